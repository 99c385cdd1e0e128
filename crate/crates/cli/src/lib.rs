//! Command-line front end: parameter sweeps, single-point evaluation and FEF
//! of user-supplied states.

pub mod error;
pub mod eval;
pub mod matfile;
pub mod output;
pub mod spec;
pub mod sweep;
