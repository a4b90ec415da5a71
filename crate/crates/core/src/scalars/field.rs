use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Coefficient field used by polynomials, matrices and expansions.
///
/// Two fields are provided: [`Rational`] (the default) and
/// [`QTau`](super::QTau), rational functions in the monodromy symbol `tau`.
pub trait Field: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(q: &Rational) -> Self;

    /// The transcendental `tau = 2*i*pi`, when the field contains it.
    fn tau() -> Option<Self> {
        None
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Representative of `q` modulo `Z` in `[0, 1)`.
pub fn frac_class(q: &Rational) -> Rational {
    q - q.floor()
}

/// Representative of `q` modulo `Z` in `(0, 1]`.
pub fn unit_interval_class(q: &Rational) -> Rational {
    let f = frac_class(q);
    if Zero::is_zero(&f) {
        One::one()
    } else {
        f
    }
}

/// Difference `a - b` when it is an integer.
pub fn integer_gap(a: &Rational, b: &Rational) -> Option<i64> {
    let d = a - b;
    if d.is_integer() {
        d.to_integer().to_i64()
    } else {
        None
    }
}

pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p`, `p/q` with arbitrary-size integers.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(n))
    }
}

pub fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_mod_z() {
        assert_eq!(frac_class(&rat(-1, 3)), rat(2, 3));
        assert_eq!(frac_class(&int(2)), int(0));
        assert_eq!(unit_interval_class(&int(-2)), int(1));
        assert_eq!(unit_interval_class(&rat(7, 2)), rat(1, 2));
        assert_eq!(integer_gap(&rat(5, 2), &rat(1, 2)), Some(2));
        assert_eq!(integer_gap(&rat(5, 2), &rat(1, 3)), None);
    }

    #[test]
    fn text_round_trip() {
        for q in [rat(-7, 4), int(0), int(12), rat(1, 3)] {
            assert_eq!(parse_rational(&fmt_rational(&q)), Some(q));
        }
        assert_eq!(parse_rational(" 6/4 "), Some(rat(3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(lcm_of_denominators(&[rat(1, 4), rat(1, 6)]), BigInt::from(12));
    }
}
