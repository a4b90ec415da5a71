use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{int, Field, Polynomial, Rational};

use super::element::AbElement;

/// Homogeneous element `Σ_j γ_j b^{k-j} a^j` of degree `k`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct HomogeneousElement {
    gamma: Vec<Rational>,
}

/// Rising factorial `λ (λ+1) ... (λ+j-1)` as a polynomial in `λ`.
fn rising_factorial(j: usize) -> Polynomial {
    let mut p = Polynomial::one();
    for i in 0..j {
        p = p.mul(&Polynomial::new(vec![int(i as i64), int(1)]));
    }
    p
}

impl HomogeneousElement {
    /// From `γ_0..γ_k`; the degree is `len - 1`.
    pub fn new(gamma: Vec<Rational>) -> Self {
        assert!(!gamma.is_empty(), "homogeneous element needs at least γ_0");
        HomogeneousElement { gamma }
    }

    /// The product `(a - λ_1 b) ... (a - λ_k b)`.
    pub fn from_lambdas(lambdas: &[Rational]) -> Self {
        let n = lambdas.len() + 1;
        let mut x = AbElement::one(n);
        for l in lambdas {
            x = x.mul(&AbElement::linear(l, n));
        }
        Self::from_element(&x, lambdas.len()).expect("product of linear factors is homogeneous")
    }

    /// Reads the degree-`k` homogeneous element `x`; `None` if `x` has other terms.
    pub fn from_element(x: &AbElement, k: usize) -> Option<Self> {
        let mut gamma = vec![<Rational as Field>::zero(); k + 1];
        for (&(m, d), c) in x.terms() {
            if m + d != k {
                return None;
            }
            gamma[d] = c.clone();
        }
        Some(HomogeneousElement { gamma })
    }

    pub fn degree(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.gamma
    }

    pub fn is_monic(&self) -> bool {
        self.gamma[self.degree()].is_one()
    }

    pub fn to_element(&self, precision: usize) -> AbElement {
        let k = self.degree();
        let terms: Vec<_> = self
            .gamma
            .iter()
            .enumerate()
            .map(|(j, c)| (k - j, j, c.clone()))
            .collect();
        AbElement::from_left_terms(&terms, precision)
    }

    /// `r(λ)`: the coefficient of `b^k` in the right remainder by `a - λ b`.
    pub fn remainder_polynomial(&self) -> Polynomial {
        let mut r = Polynomial::zero();
        for (j, c) in self.gamma.iter().enumerate() {
            r = r.add(&rising_factorial(j).scale(c));
        }
        r
    }

    /// Bernstein polynomial `B(x)`, the monic normalization of `r(-x)`.
    pub fn bernstein_polynomial(&self) -> Result<Polynomial> {
        if !self.is_monic() {
            return Err(Error::InvalidInput(format!(
                "homogeneous element {self} is not monic in a"
            )));
        }
        let r = self.remainder_polynomial();
        let minus_x = Polynomial::new(vec![int(0), int(-1)]);
        Ok(r.compose(&minus_x).monic())
    }

    /// Inverse of [`bernstein_polynomial`](Self::bernstein_polynomial): the
    /// monic homogeneous element of degree `deg B`.
    pub fn from_bernstein(bp: &Polynomial) -> Result<Self> {
        if !bp.is_monic() {
            return Err(Error::InvalidInput(format!("{bp} is not monic")));
        }
        let k = bp.degree().unwrap_or(0);
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        let minus_x = Polynomial::new(vec![int(0), int(-1)]);
        let mut r = bp.compose(&minus_x).scale(&sign);
        let mut gamma = vec![<Rational as Field>::zero(); k + 1];
        while let Some(d) = r.degree() {
            if r.is_zero() {
                break;
            }
            let c = r.leading().unwrap().clone();
            gamma[d] = c.clone();
            r = r.sub(&rising_factorial(d).scale(&c));
        }
        Ok(HomogeneousElement { gamma })
    }

    /// `λ_1..λ_k` with the principal ordering: the roots of `B` sorted
    /// nonincreasing and `λ_j = -r_j + k - j`.
    pub fn factor(&self) -> Result<Vec<Rational>> {
        let bp = self.bernstein_polynomial()?;
        let rr = bp.rational_roots();
        if !rr.fully_split {
            return Err(Error::NotFullySplit(bp.to_string()));
        }
        self.factor_with_roots(&rr.roots)
    }

    /// Factorization for an explicit ordering of the Bernstein roots.
    pub fn factor_with_roots(&self, roots: &[Rational]) -> Result<Vec<Rational>> {
        let k = self.degree();
        if roots.len() != k {
            return Err(Error::InvalidInput(format!(
                "expected {k} roots, got {}",
                roots.len()
            )));
        }
        let lambdas: Vec<Rational> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| -r.clone() + int((k - i - 1) as i64))
            .collect();
        // successive right division must leave no remainder
        let n = k + 1;
        let mut cur = self.to_element(n);
        for l in lambdas.iter().rev() {
            let (q, r) = cur.right_divide(&AbElement::linear(l, n))?;
            if !r.is_zero() {
                return Err(Error::NotFullySplit(format!(
                    "ordering {roots:?} does not factor {self}"
                )));
            }
            cur = q;
        }
        debug_assert_eq!(cur, AbElement::one(n));
        Ok(lambdas)
    }
}

impl fmt::Display for HomogeneousElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_element(self.degree() + 1))
    }
}
