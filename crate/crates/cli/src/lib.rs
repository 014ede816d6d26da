//! Front end for `fano-qc-core`: argument handling, the `verify` check list,
//! and text / JSON / LaTeX emitters.

pub mod cli;
pub mod emit;
pub mod json;
pub mod latex;
pub mod verify;

pub use cli::{execute, run, Args, Command};
pub use emit::{render, Format, Target};
