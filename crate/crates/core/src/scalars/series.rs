use std::fmt;

use num_traits::{One, Zero};

use super::field::{fmt_rational, Rational};
use crate::error::{Error, Result};

/// Power series in `b` known modulo `b^precision`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
    precision: usize,
}

impl TruncatedSeries {
    pub fn new(mut coeffs: Vec<Rational>, precision: usize) -> Self {
        coeffs.truncate(precision);
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        TruncatedSeries { coeffs, precision }
    }

    pub fn zero(precision: usize) -> Self {
        Self::new(Vec::new(), precision)
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(Rational::one(), precision)
    }

    pub fn constant(c: Rational, precision: usize) -> Self {
        Self::new(vec![c], precision)
    }

    /// `c * b^n`.
    pub fn monomial(c: Rational, n: usize, precision: usize) -> Self {
        let mut v = vec![Rational::zero(); n + 1];
        v[n] = c;
        Self::new(v, precision)
    }

    /// Builds from sparse `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: &[(usize, Rational)], precision: usize) -> Self {
        let len = terms.iter().map(|(e, _)| e + 1).max().unwrap_or(0);
        let mut v = vec![Rational::zero(); len];
        for (e, c) in terms {
            v[*e] += c;
        }
        Self::new(v, precision)
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the first nonzero coefficient, `None` if zero mod `b^N`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        Self::new(self.coeffs.clone(), precision.min(self.precision))
    }

    /// Re-labels the precision without checking; used when the caller knows
    /// the series is exact (a polynomial).
    pub fn exact_to(&self, precision: usize) -> Self {
        Self::new(self.coeffs.clone(), precision)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        let n = self.coeffs.len().max(o.coeffs.len()).min(p);
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect(), p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), self.precision)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect(), self.precision)
    }

    /// Product, truncated to the smaller precision.
    pub fn mul(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        let mut out = vec![Rational::zero(); (self.coeffs.len() + o.coeffs.len()).min(p)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= p {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Self::new(out, p)
    }

    /// Multiplication by `b^n`; precision rises by `n`.
    pub fn shift(&self, n: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v, self.precision + n)
    }

    /// Division by `b^n`, assuming the first `n` coefficients vanish.
    pub fn unshift(&self, n: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(n).all(|c| c.is_zero()));
        Self::new(
            self.coeffs.iter().skip(n).cloned().collect(),
            self.precision.saturating_sub(n),
        )
    }

    /// Multiplicative inverse modulo `b^N`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let inv0 = c0.recip();
        let n = self.precision;
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut s = Rational::zero();
            for i in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s += &self.coeffs[i] * &out[k - i];
            }
            out.push(-s * &inv0);
        }
        Ok(Self::new(out, n))
    }

    /// Termwise derivative; the precision drops by one.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
            self.precision.saturating_sub(1),
        )
    }

    /// `self(inner)` for `inner` without constant term.
    pub fn compose(&self, inner: &Self) -> Self {
        assert!(inner.coeff(0).is_zero(), "inner series must vanish at 0");
        let p = self.precision.min(inner.precision);
        let mut acc = Self::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone(), p));
        }
        acc
    }

    pub fn to_pretty(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = fmt_rational(c);
            parts.push(if i == 0 {
                cs
            } else if c.is_one() {
                mon
            } else if *c == -Rational::one() {
                format!("-{mon}")
            } else {
                format!("{cs}*{mon}")
            });
        }
        let mut out = if parts.is_empty() { "0".to_string() } else { parts[0].clone() };
        for p in parts.iter().skip(1) {
            match p.strip_prefix('-') {
                Some(r) => {
                    out.push_str(" - ");
                    out.push_str(r);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        format!("{out} + O({var}^{})", self.precision)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pretty("b"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::int;

    fn s(c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::new(c.iter().map(|&x| int(x)).collect(), n)
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(s(&[1, 1], 4).mul(&s(&[1, -1], 4)), s(&[1, 0, -1], 4));
        assert_eq!(s(&[1], 3).mul(&s(&[0, 0, 1], 3)), s(&[0, 0, 1], 3));
        assert_eq!(s(&[1, 2], 3).mul(&s(&[1, 3], 3)), s(&[1, 5, 6], 3));
        // truncation to the smaller precision
        assert_eq!(s(&[1, 1], 2).mul(&s(&[1, 1], 5)).precision(), 2);
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(s(&[1], 4).invert().unwrap(), s(&[1], 4));
        assert_eq!(s(&[1, 1], 3).invert().unwrap(), s(&[1, -1, 1], 3));
        assert!(matches!(s(&[0, 1], 3).invert(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(s(&[1, 1, 1], 3).derivative(), s(&[1, 2], 2));
        assert_eq!(s(&[7], 3).derivative(), s(&[], 2));
        assert_eq!(s(&[0, 0, 0, 1], 5).derivative(), s(&[0, 0, 3], 4));
    }

    #[test]
    fn composition() {
        // (1 + z)(z + z^2) composed: z -> z + z^2
        let f = s(&[0, 1, 1], 6);
        let g = s(&[0, 2], 6);
        assert_eq!(g.compose(&f), s(&[0, 2, 2], 6));
        assert_eq!(f.compose(&g), s(&[0, 2, 4], 6));
    }
}
