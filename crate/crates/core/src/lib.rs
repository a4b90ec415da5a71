//! Exact computer algebra for (a,b)-modules: the algebra generated by `a`, `b`
//! with `ab - ba = b^2`, modules over it, frescos, themes and their
//! realizations inside formal asymptotic expansions.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod fresco;
pub mod io;
pub mod module;
pub mod samples;
pub mod scalars;
pub mod theme;
pub mod xi;

pub use error::{Error, Result};
