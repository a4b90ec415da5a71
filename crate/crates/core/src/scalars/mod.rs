//! Exact coefficient arithmetic: rationals, `Q(tau)`, polynomials, matrices
//! and truncated power series in `b`.

mod field;
mod laurent;
mod matrix;
mod poly;
mod series;
mod series_matrix;
mod tau;

pub use field::{
    fmt_rational, frac_class, int, integer_gap, is_negative, lcm_of_denominators, parse_rational,
    rat, to_i64, unit_interval_class, Field, Rational,
};
pub use laurent::LaurentSeries;
pub use matrix::{Matrix, SubspaceBasis};
pub use poly::{Polynomial, RationalRoots};
pub use series::TruncatedSeries;
pub use series_matrix::{flatten, unflatten, SeriesMatrix};
pub use tau::QTau;
