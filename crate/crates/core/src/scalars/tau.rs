use std::fmt;

use super::field::{Field, Rational};
use super::poly::Polynomial;

/// Element of `Q(tau)`, the rational functions in the monodromy symbol
/// `tau` (standing for `2*i*pi`).
///
/// Stored as `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Debug)]
pub struct QTau {
    num: Polynomial<Rational>,
    den: Polynomial<Rational>,
}

impl QTau {
    pub fn new(num: Polynomial<Rational>, den: Polynomial<Rational>) -> Self {
        assert!(!den.is_zero(), "zero denominator in Q(tau)");
        if num.is_zero() {
            return QTau { num, den: Polynomial::one() };
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let lead = d.leading().unwrap().clone();
        let inv = lead.inv().unwrap();
        n = n.scale(&inv);
        d = d.scale(&inv);
        QTau { num: n, den: d }
    }

    pub fn from_poly(p: Polynomial<Rational>) -> Self {
        QTau { num: p, den: Polynomial::one() }
    }

    /// The symbol `tau` itself.
    pub fn symbol() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn numerator(&self) -> &Polynomial<Rational> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<Rational> {
        &self.den
    }

    /// Degree in `tau` of a polynomial value; `None` when not a polynomial.
    pub fn poly_degree(&self) -> Option<usize> {
        if self.den.degree() == Some(0) {
            Some(self.num.degree().unwrap_or(0))
        } else {
            None
        }
    }

    /// Rational value when `self` does not depend on `tau`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.degree() == Some(0) && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }
}

impl Field for QTau {
    fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }
    fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return QTau::new(self.num.add(&o.num), self.den.clone());
        }
        QTau::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        QTau::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        QTau { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(QTau::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_rational(q: &Rational) -> Self {
        Self::from_poly(Polynomial::constant(q.clone()))
    }
    fn tau() -> Option<Self> {
        Some(Self::symbol())
    }
}

impl fmt::Display for QTau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.display_with("tau");
        if self.den.degree() == Some(0) {
            write!(f, "{n}")
        } else {
            let d = self.den.display_with("tau");
            write!(f, "({n})/({d})")
        }
    }
}
