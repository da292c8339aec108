use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use implicative_cli::commands::{self, CliError, Outcome};
use implicative_cli::format::{emit, load_file, Loaded};

#[derive(Parser)]
#[command(name = "ialg", version, about = "Finite implicative structures and algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the axioms and classify the named separators.
    Validate {
        file: PathBuf,
        /// Seed for sampled validation of large carriers.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the file in canonical form.
    Emit { file: PathBuf },
    /// Evaluate a lambda term.
    Eval {
        file: PathBuf,
        #[arg(long)]
        term: String,
        /// Free variable assignment, `x=a,y=b`.
        #[arg(long)]
        ctx: Option<String>,
        /// Check that the term has this type under `--ctx` instead of printing its value.
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Print the combinators, with the value of their lambda terms where they have one.
    Combinator { file: PathBuf, names: Vec<String> },
    /// Separator operations.
    Sep {
        #[command(subcommand)]
        cmd: SepCmd,
    },
    /// The induced Heyting algebra.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        sep: String,
        /// Print the Hasse diagram instead.
        #[arg(long)]
        graph: bool,
    },
    /// Interpret a first-order formula, or audit the tautology corpus.
    Fol {
        file: PathBuf,
        #[arg(long, conflicts_with = "soundness", required_unless_present = "soundness")]
        formula: Option<String>,
        #[arg(long)]
        soundness: bool,
    },
    /// Audit the tripos laws up to an index size.
    Tripos {
        file: PathBuf,
        #[arg(long)]
        sep: String,
        #[arg(long, default_value_t = 2)]
        max_index: usize,
        /// Comma-separated subset of functor,adjunction,bc,generic,rho,collapse; all by default.
        #[arg(long, value_delimiter = ',')]
        audit: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Complete a quasi structure; with `--audit-index`, audit the embedding instead.
    Complete {
        file: PathBuf,
        #[arg(long)]
        audit_index: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Abstract Krivine structures.
    Aks {
        #[command(subcommand)]
        cmd: AksCmd,
    },
}

#[derive(Subcommand)]
enum SepCmd {
    /// The least separator containing the given elements.
    Gen { file: PathBuf, elements: Vec<String> },
    /// Report the properties of a named separator or an arbitrary subset.
    Classify {
        file: PathBuf,
        #[arg(long)]
        sep: Option<String>,
        /// Comma-separated members.
        #[arg(long)]
        set: Option<String>,
    },
    /// Every separator of the structure.
    List { file: PathBuf },
}

#[derive(Subcommand)]
enum AksCmd {
    /// The structure read off a classical algebra; `--induced` prints the algebra it induces.
    Emit {
        file: PathBuf,
        #[arg(long)]
        sep: String,
        #[arg(long)]
        induced: bool,
        /// Audit the meet map from the induced algebra back to the original.
        #[arg(long)]
        audit_index: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    load_file(path).map_err(|e| match e {
        e @ implicative_cli::format::LoadError::Io { .. } => CliError::Usage(e.to_string()),
        e => CliError::Usage(format!("{}: {e}", path.display())),
    })
}

fn run(cli: Cli, out: &mut String) -> Outcome {
    match cli.cmd {
        Cmd::Validate { file, seed } => commands::validate(&load(&file)?, seed, out),
        Cmd::Emit { file } => {
            out.push_str(&emit(&load(&file)?));
            Ok(0)
        }
        Cmd::Eval { file, term, ctx, ty } => commands::eval(&load(&file)?, &term, ctx.as_deref(), ty.as_deref(), out),
        Cmd::Combinator { file, names } => commands::combinators(&load(&file)?, &names, out),
        Cmd::Sep { cmd } => match cmd {
            SepCmd::Gen { file, elements } => commands::sep_gen(&load(&file)?, &elements, out),
            SepCmd::Classify { file, sep, set } => commands::sep_classify(&load(&file)?, sep.as_deref(), set.as_deref(), out),
            SepCmd::List { file } => commands::sep_list(&load(&file)?, out),
        },
        Cmd::Quotient { file, sep, graph } => commands::quotient(&load(&file)?, &sep, graph, out),
        Cmd::Fol { file, formula, soundness } => {
            let l = load(&file)?;
            match formula {
                Some(f) if !soundness => commands::fol_formula(&l, &f, out),
                _ => commands::fol_soundness(&l, out),
            }
        }
        Cmd::Tripos { file, sep, max_index, audit, seed } => {
            commands::tripos(&load(&file)?, &sep, max_index, &audit, seed, out)
        }
        Cmd::Complete { file, audit_index, seed } => commands::complete(&load(&file)?, audit_index, seed, out),
        Cmd::Aks { cmd: AksCmd::Emit { file, sep, induced, audit_index, seed } } => {
            commands::aks_emit(&load(&file)?, &sep, induced, audit_index, seed, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
