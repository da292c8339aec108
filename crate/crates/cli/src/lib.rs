//! Front end for the `implicative` crate: the `.ialg` file format and the `ialg` subcommands.

pub mod commands;
pub mod format;
