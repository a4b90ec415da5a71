use std::fmt;

use num_traits::{One, Signed, Zero};

use super::field::{fmt_rational, Rational};
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

/// Laurent series in `b` known modulo `b^precision` (absolute precision,
/// may be negative).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LaurentSeries {
    valuation: i64,
    coeffs: Vec<Rational>,
    precision: i64,
}

impl LaurentSeries {
    /// `Σ coeffs[i] b^(start + i)` known modulo `b^precision`.
    pub fn new(start: i64, coeffs: Vec<Rational>, precision: i64) -> Self {
        let mut out = Vec::new();
        let mut val = precision;
        for (i, c) in coeffs.into_iter().enumerate() {
            let e = start + i as i64;
            if e >= precision {
                break;
            }
            if out.is_empty() {
                if c.is_zero() {
                    continue;
                }
                val = e;
            }
            out.push(c);
        }
        while out.last().map_or(false, |c: &Rational| c.is_zero()) {
            out.pop();
        }
        if out.is_empty() {
            val = precision;
        }
        LaurentSeries { valuation: val, coeffs: out, precision }
    }

    pub fn zero(precision: i64) -> Self {
        Self::new(0, Vec::new(), precision)
    }

    pub fn monomial(c: Rational, e: i64, precision: i64) -> Self {
        Self::new(e, vec![c], precision)
    }

    pub fn from_series(s: &TruncatedSeries) -> Self {
        Self::new(0, s.coeffs().to_vec(), s.precision() as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero coefficient; equals the precision for zero.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn coeff(&self, e: i64) -> Rational {
        if e < self.valuation {
            return Rational::zero();
        }
        self.coeffs
            .get((e - self.valuation) as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        let v = self.valuation;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (v + i as i64, c))
    }

    /// Re-labels the precision, treating the stored terms as exact.
    pub fn exact_to(&self, precision: i64) -> Self {
        Self::new(self.valuation, self.coeffs.clone(), precision)
    }

    pub fn with_precision(&self, precision: i64) -> Self {
        Self::new(self.valuation, self.coeffs.clone(), precision.min(self.precision))
    }

    /// Non-negative part as a truncated series; the caller guarantees the
    /// principal part is zero or irrelevant.
    pub fn to_series(&self) -> TruncatedSeries {
        let p = self.precision.max(0) as usize;
        let v: Vec<Rational> = (0..p as i64).map(|e| self.coeff(e)).collect();
        TruncatedSeries::new(v, p)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        let lo = self.valuation.min(o.valuation).min(p);
        let v: Vec<Rational> = (lo..p).map(|e| self.coeff(e) + o.coeff(e)).collect();
        Self::new(lo, v, p)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.precision);
        }
        LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            precision: self.precision,
        }
    }

    /// Multiplication by `b^n`.
    pub fn shift(&self, n: i64) -> Self {
        LaurentSeries {
            valuation: self.valuation + n,
            coeffs: self.coeffs.clone(),
            precision: self.precision + n,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        // absolute precision of a product: min(v1 + p2, v2 + p1)
        let p = (self.valuation + o.precision).min(o.valuation + self.precision);
        if self.is_zero() || o.is_zero() {
            return Self::zero(p);
        }
        let lo = self.valuation + o.valuation;
        let len = (p - lo).max(0) as usize;
        let mut v = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                v[i + j] += a * b;
            }
        }
        Self::new(lo, v, p)
    }

    /// Inverse of a nonzero series.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let rel = (self.precision - self.valuation) as usize;
        let unit = TruncatedSeries::new(self.coeffs.clone(), rel).invert()?;
        Ok(Self::new(-self.valuation, unit.coeffs().to_vec(), rel as i64 - self.valuation))
    }

    pub fn derivative(&self) -> Self {
        let v: Vec<Rational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational::from_integer((self.valuation + i as i64).into()))
            .collect();
        Self::new(self.valuation - 1, v, self.precision - 1)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let cs = fmt_rational(c);
            let (neg, body) = match cs.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, cs),
            };
            let mon = if e == 0 {
                body
            } else if c.abs().is_one() {
                format!("b^{e}")
            } else {
                format!("{body}*b^{e}")
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, mon)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, mon)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(b^{})", self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::{int, rat};

    #[test]
    fn normalizes_valuation() {
        let s = LaurentSeries::new(-3, vec![int(0), int(0), int(2), int(1)], 5);
        assert_eq!(s.valuation(), -1);
        assert_eq!(s.coeff(0), int(1));
        assert!(LaurentSeries::zero(4).is_zero());
    }

    #[test]
    fn inverse_of_pole() {
        // (b^-1 + 1)^-1 = b - b^2 + b^3 ...
        let s = LaurentSeries::new(-1, vec![int(1), int(1)], 3);
        let inv = s.invert().unwrap();
        assert_eq!(inv.valuation(), 1);
        assert_eq!(inv.coeff(2), int(-1));
        let one = s.mul(&inv);
        assert_eq!(one.coeff(0), int(1));
        assert_eq!(one.coeff(1), int(0));
    }

    #[test]
    fn derivative_of_negative_power() {
        let s = LaurentSeries::monomial(rat(1, 2), -2, 4);
        let d = s.derivative();
        assert_eq!(d.coeff(-3), int(-1));
        assert_eq!(d.precision(), 3);
    }
}
