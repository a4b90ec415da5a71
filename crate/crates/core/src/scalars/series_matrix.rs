use num_traits::Zero;

use super::field::Rational;
use super::matrix::Matrix;
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

/// Matrix with power series entries, stored as its sequence of coefficient
/// matrices `M = Σ_t M_t b^t` modulo `b^precision`.
#[derive(Clone, PartialEq, Debug)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix>,
    precision: usize,
}

impl SeriesMatrix {
    pub fn zero(rows: usize, cols: usize, precision: usize) -> Self {
        SeriesMatrix {
            rows,
            cols,
            coeffs: vec![Matrix::zeros(rows, cols); precision],
            precision,
        }
    }

    pub fn identity(n: usize, precision: usize) -> Self {
        let mut m = Self::zero(n, n, precision);
        if precision > 0 {
            m.coeffs[0] = Matrix::identity(n);
        }
        m
    }

    /// From coefficient matrices; missing orders are zero, extra ones dropped.
    pub fn from_coeffs(rows: usize, cols: usize, mut coeffs: Vec<Matrix>, precision: usize) -> Self {
        coeffs.truncate(precision);
        while coeffs.len() < precision {
            coeffs.push(Matrix::zeros(rows, cols));
        }
        SeriesMatrix { rows, cols, coeffs, precision }
    }

    /// From a row-major table of series; precision is the minimum of the entries.
    pub fn from_entries(entries: &[Vec<TruncatedSeries>]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let precision = entries
            .iter()
            .flatten()
            .map(|s| s.precision())
            .min()
            .unwrap_or(0);
        let mut m = Self::zero(rows, cols, precision);
        for (i, row) in entries.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                for t in 0..precision {
                    m.coeffs[t].set(i, j, s.coeff(t));
                }
            }
        }
        m
    }

    /// Constant matrix times `b^shift`.
    pub fn from_constant(c: &Matrix, shift: usize, precision: usize) -> Self {
        let mut m = Self::zero(c.rows(), c.cols(), precision);
        if shift < precision {
            m.coeffs[shift] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Coefficient matrix of `b^t` (zero beyond the stored range).
    pub fn coeff(&self, t: usize) -> Matrix {
        self.coeffs
            .get(t)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.rows, self.cols))
    }

    pub fn coeff_ref(&self, t: usize) -> &Matrix {
        &self.coeffs[t]
    }

    pub fn entry(&self, i: usize, j: usize) -> TruncatedSeries {
        TruncatedSeries::new(
            self.coeffs.iter().map(|m| m.get(i, j).clone()).collect(),
            self.precision,
        )
    }

    pub fn entries(&self) -> Vec<Vec<TruncatedSeries>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<TruncatedSeries> {
        (0..self.rows).map(|i| self.entry(i, j)).collect()
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        let p = precision.min(self.precision);
        Self::from_coeffs(self.rows, self.cols, self.coeffs[..p].to_vec(), p)
    }

    /// Least `t` with `M_t ≠ 0`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|m| !m.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        let c = (0..p).map(|t| self.coeffs[t].add(&o.coeffs[t])).collect();
        Self::from_coeffs(self.rows, self.cols, c, p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        let c = (0..p).map(|t| self.coeffs[t].sub(&o.coeffs[t])).collect();
        Self::from_coeffs(self.rows, self.cols, c, p)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let cs = self.coeffs.iter().map(|m| m.scale(c)).collect();
        Self::from_coeffs(self.rows, self.cols, cs, self.precision)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let p = self.precision.min(o.precision);
        let mut out = vec![Matrix::zeros(self.rows, o.cols); p];
        for (s, a) in self.coeffs.iter().enumerate().take(p) {
            if a.is_zero() {
                continue;
            }
            for (t, b) in o.coeffs.iter().enumerate().take(p - s) {
                if b.is_zero() {
                    continue;
                }
                out[s + t] = out[s + t].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.rows, o.cols, out, p)
    }

    /// Multiplication by `b^n`; precision rises by `n`.
    pub fn shift(&self, n: usize) -> Self {
        let mut c = vec![Matrix::zeros(self.rows, self.cols); n];
        c.extend(self.coeffs.iter().cloned());
        let p = self.precision + n;
        Self::from_coeffs(self.rows, self.cols, c, p)
    }

    /// Termwise derivative; precision drops by one.
    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(t, m)| m.scale(&Rational::from_integer((t as i64).into())))
            .collect();
        let p = self.precision.saturating_sub(1);
        Self::from_coeffs(self.rows, self.cols, c, p)
    }

    /// Inverse, requiring an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        let p = self.precision;
        if p == 0 {
            return Ok(self.clone());
        }
        let inv0 = self.coeffs[0]
            .inverse()
            .ok_or_else(|| Error::NotAUnit("matrix with singular constant term".into()))?;
        let mut out: Vec<Matrix> = vec![inv0.clone()];
        for t in 1..p {
            let mut acc = Matrix::zeros(self.rows, self.cols);
            for s in 1..=t {
                if self.coeffs[s].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[s].mul(&out[t - s]));
            }
            out.push(inv0.mul(&acc).neg());
        }
        Ok(Self::from_coeffs(self.rows, self.cols, out, p))
    }

    pub fn transpose(&self) -> Self {
        let c = self.coeffs.iter().map(|m| m.transpose()).collect();
        Self::from_coeffs(self.cols, self.rows, c, self.precision)
    }

    /// Applies to a vector of series.
    pub fn mul_vec(&self, v: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
        let col = SeriesMatrix::from_entries(&v.iter().map(|s| vec![s.clone()]).collect::<Vec<_>>());
        let col = if v.is_empty() { SeriesMatrix::zero(0, 1, self.precision) } else { col };
        self.mul(&col).column(0)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let p = self.precision.min(o.precision);
        let c = (0..p)
            .map(|t| {
                let mut m = Matrix::zeros(self.rows, self.cols + o.cols);
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        m.set(i, j, self.coeffs[t].get(i, j).clone());
                    }
                    for j in 0..o.cols {
                        m.set(i, self.cols + j, o.coeffs[t].get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        Self::from_coeffs(self.rows, self.cols + o.cols, c, p)
    }

    /// Sub-block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let c = self
            .coeffs
            .iter()
            .map(|m| {
                let mut b = Matrix::zeros(r1 - r0, c1 - c0);
                for i in r0..r1 {
                    for j in c0..c1 {
                        b.set(i - r0, j - c0, m.get(i, j).clone());
                    }
                }
                b
            })
            .collect();
        Self::from_coeffs(r1 - r0, c1 - c0, c, self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|m| m.is_zero())
    }
}

/// Flattens series vectors of length `k` modulo `b^p` to `Q^{kp}`, index `t*k + i`.
pub fn flatten(v: &[TruncatedSeries], p: usize) -> Vec<Rational> {
    let k = v.len();
    let mut out = vec![Rational::zero(); k * p];
    for (i, s) in v.iter().enumerate() {
        for t in 0..p {
            out[t * k + i] = s.coeff(t);
        }
    }
    out
}

/// Inverse of [`flatten`].
pub fn unflatten(x: &[Rational], k: usize, p: usize) -> Vec<TruncatedSeries> {
    (0..k)
        .map(|i| TruncatedSeries::new((0..p).map(|t| x[t * k + i].clone()).collect(), p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::int;

    #[test]
    fn inverse_round_trip() {
        let m = SeriesMatrix::from_coeffs(
            2,
            2,
            vec![
                Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(0), int(1)]]),
                Matrix::from_rows(vec![vec![int(3), int(0)], vec![int(1), int(1)]]),
            ],
            5,
        );
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), SeriesMatrix::identity(2, 5));
        assert_eq!(inv.mul(&m), SeriesMatrix::identity(2, 5));
    }

    #[test]
    fn flatten_round_trip() {
        let v = vec![
            TruncatedSeries::new(vec![int(1), int(2)], 3),
            TruncatedSeries::new(vec![int(0), int(0), int(5)], 3),
        ];
        assert_eq!(unflatten(&flatten(&v, 3), 2, 3), v);
    }
}
