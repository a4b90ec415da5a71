//! Small named modules used throughout the tests and the bundled corpus.

use crate::module::AbModule;
use crate::scalars::{int, rat, Matrix, Rational, SeriesMatrix};

/// `Ã / Ã (a - 3/2 b)(a - 1/2 b)` on the basis `e, a e`:
/// `a e1 = e2`, `a e2 = -1/4 b^2 e1 + 2 b e2`.
pub fn f2(precision: usize) -> AbModule {
    let m0 = Matrix::from_rows(vec![vec![int(0), int(0)], vec![int(1), int(0)]]);
    let m1 = Matrix::from_rows(vec![vec![int(0), int(0)], vec![int(0), int(2)]]);
    let m2 = Matrix::from_rows(vec![vec![int(0), rat(-1, 4)], vec![int(0), int(0)]]);
    AbModule::new(SeriesMatrix::from_coeffs(2, 2, vec![m0, m1, m2], precision)).unwrap()
}

/// `E_λ`.
pub fn e_lambda(lambda: &Rational, precision: usize) -> AbModule {
    AbModule::rank_one(lambda, precision)
}

/// `a e1 = e2`, `a e2 = e1`: not regular.
pub fn irregular(precision: usize) -> AbModule {
    let m0 = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
    AbModule::new(SeriesMatrix::from_coeffs(2, 2, vec![m0], precision)).unwrap()
}
