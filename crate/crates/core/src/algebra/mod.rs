//! The completed algebra generated by `a` and `b` with `ab - ba = b^2`.

mod element;
mod homogeneous;
pub mod parse;

pub use element::{AbElement, DEFAULT_A_DEGREE_BOUND};
pub use homogeneous::HomogeneousElement;
pub use parse::{parse, parse_element, Parsed};
