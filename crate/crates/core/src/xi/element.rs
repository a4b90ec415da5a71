use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{fmt_rational, unit_interval_class, Field, Rational};

/// Finite sum `Σ c_{λ,j,m} s^{λ+m-1} (Log s)^j / j!` with vector coefficients,
/// `λ ∈ (0,1]`, known for `m < shift_precision`.
#[derive(Clone, PartialEq, Debug)]
pub struct XiElement<F: Field = Rational> {
    dim: usize,
    terms: BTreeMap<(Rational, usize, usize), Vec<F>>,
    shift_precision: usize,
}

/// Normalizes `(λ, m)` so that `λ ∈ (0,1]` while keeping the exponent `λ+m-1`.
pub fn normalize_lambda(lambda: &Rational, m: i64) -> Result<(Rational, usize)> {
    let l = unit_interval_class(lambda);
    let shift = lambda - &l;
    let m2 = crate::scalars::to_i64(&shift).unwrap() + m;
    if m2 < 0 {
        return Err(Error::InvalidInput(format!(
            "exponent {} is not integrable at 0",
            fmt_rational(&(lambda + Rational::from_integer(m.into()) - Rational::from_integer(1.into())))
        )));
    }
    Ok((l, m2 as usize))
}

impl<F: Field> XiElement<F> {
    pub fn zero(dim: usize, shift_precision: usize) -> Self {
        XiElement { dim, terms: BTreeMap::new(), shift_precision }
    }

    /// `c · s^{λ+m-1} (Log s)^j / j!`; `λ` is normalized into `(0,1]`.
    pub fn term(lambda: &Rational, m: i64, j: usize, coeff: Vec<F>, shift_precision: usize) -> Result<Self> {
        let mut x = Self::zero(coeff.len(), shift_precision);
        let (l, m) = normalize_lambda(lambda, m)?;
        x.add_term(l, j, m, coeff);
        Ok(x)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shift_precision(&self) -> usize {
        self.shift_precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms keyed by `(λ, j, m)`.
    pub fn terms(&self) -> impl Iterator<Item = (&(Rational, usize, usize), &Vec<F>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: &Rational, j: usize, m: usize) -> Vec<F> {
        self.terms
            .get(&(lambda.clone(), j, m))
            .cloned()
            .unwrap_or_else(|| vec![F::zero(); self.dim])
    }

    /// Largest log-degree present.
    pub fn log_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(_, j, _)| *j).max()
    }

    /// Distinct `λ` present.
    pub fn lambdas(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.terms.keys().map(|(l, _, _)| l.clone()).collect();
        out.dedup();
        out.sort();
        out.dedup();
        out
    }

    pub(crate) fn add_term(&mut self, lambda: Rational, j: usize, m: usize, coeff: Vec<F>) {
        if m >= self.shift_precision {
            return;
        }
        assert_eq!(coeff.len(), self.dim, "coefficient vector length");
        let key = (lambda, j, m);
        let entry = self.terms.entry(key.clone()).or_insert_with(|| vec![F::zero(); coeff.len()]);
        for (e, c) in entry.iter_mut().zip(coeff) {
            *e = e.add(&c);
        }
        if entry.iter().all(|c| c.is_zero()) {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut x = self.clone();
        x.shift_precision = self.shift_precision.min(o.shift_precision);
        x.terms.retain(|(_, _, m), _| *m < x.shift_precision);
        for ((l, j, m), c) in &o.terms {
            x.add_term(l.clone(), *j, *m, c.clone());
        }
        x
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut x = Self::zero(self.dim, self.shift_precision);
        for ((l, j, m), v) in &self.terms {
            x.add_term(l.clone(), *j, *m, v.iter().map(|y| y.mul(c)).collect());
        }
        x
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().neg()))
    }

    /// Multiplication by `s`.
    pub fn xi_a(&self) -> Self {
        let mut x = Self::zero(self.dim, self.shift_precision);
        for ((l, j, m), v) in &self.terms {
            x.add_term(l.clone(), *j, m + 1, v.clone());
        }
        x
    }

    /// Primitive vanishing at 0:
    /// `b(s^{μ-1} L^j/j!) = Σ_{i≤j} (-1)^{j-i} μ^{-(j-i+1)} s^μ L^i/i!`, `μ = λ+m`.
    pub fn xi_b(&self) -> Self {
        let mut x = Self::zero(self.dim, self.shift_precision);
        for ((l, j, m), v) in &self.terms {
            let mu = l + Rational::from_integer((*m as i64).into());
            let inv = F::from_rational(&mu.recip());
            let mut factor = inv.clone();
            for i in (0..=*j).rev() {
                let sign = if (j - i) % 2 == 0 { F::one() } else { F::one().neg() };
                let c = factor.mul(&sign);
                x.add_term(l.clone(), i, m + 1, v.iter().map(|y| y.mul(&c)).collect());
                factor = factor.mul(&inv);
            }
        }
        x
    }

    /// Unipotent part of the monodromy: `L^j/j! ↦ Σ_{i≤j} L^i/i! τ^{j-i}/(j-i)!`.
    pub fn monodromy_unipotent(&self) -> Result<Self> {
        let tau = F::tau().ok_or(Error::FieldTooSmall)?;
        let mut x = Self::zero(self.dim, self.shift_precision);
        for ((l, j, m), v) in &self.terms {
            let mut pow = F::one();
            for d in 0..=*j {
                // τ^d / d!
                let c = pow.clone();
                x.add_term(l.clone(), j - d, *m, v.iter().map(|y| y.mul(&c)).collect());
                pow = pow
                    .mul(&tau)
                    .mul(&F::from_rational(&Rational::new(1.into(), ((d + 1) as i64).into())));
            }
        }
        Ok(x)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> XiElement<G> {
        let mut x = XiElement::<G>::zero(self.dim, self.shift_precision);
        for ((l, j, m), v) in &self.terms {
            x.add_term(l.clone(), *j, *m, v.iter().map(&f).collect());
        }
        x
    }
}

impl<F: Field> fmt::Display for XiElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((l, j, m), v) in &self.terms {
            let e = l + Rational::from_integer((*m as i64).into()) - Rational::from_integer(1.into());
            let coeff = if v.len() == 1 {
                format!("{}", v[0])
            } else {
                format!("[{}]", v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
            };
            let log = match j {
                0 => String::new(),
                1 => "*L".to_string(),
                _ => format!("*L^{j}/{j}!"),
            };
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({coeff})*s^({}){log}", fmt_rational(&e))?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat, QTau};

    fn s(l: Rational, m: i64, j: usize) -> XiElement {
        XiElement::term(&l, m, j, vec![int(1)], 8).unwrap()
    }

    #[test]
    fn action_of_a() {
        assert_eq!(s(rat(1, 2), 0, 0).xi_a(), s(rat(1, 2), 1, 0));
        assert_eq!(s(rat(1, 2), 0, 1).xi_a(), s(rat(1, 2), 1, 1));
        assert!(XiElement::<Rational>::zero(1, 4).xi_a().is_zero());
    }

    #[test]
    fn action_of_b() {
        assert_eq!(s(rat(1, 2), 0, 0).xi_b(), s(rat(1, 2), 1, 0).scale(&int(2)));
        let expected = s(rat(1, 2), 1, 1).scale(&int(2)).sub(&s(rat(1, 2), 1, 0).scale(&int(4)));
        assert_eq!(s(rat(1, 2), 0, 1).xi_b(), expected);
        let l = rat(2, 3);
        assert_eq!(s(l.clone(), 0, 0).xi_a(), s(l.clone(), 0, 0).xi_b().scale(&l));
    }

    #[test]
    fn normalization() {
        assert_eq!(s(rat(3, 2), 0, 0), s(rat(1, 2), 1, 0));
        assert!(XiElement::<Rational>::term(&rat(-1, 2), 0, 0, vec![int(1)], 4).is_err());
    }

    #[test]
    fn monodromy() {
        let x = s(rat(1, 2), 0, 0);
        assert!(x.monodromy_unipotent().is_err());
        let xt = x.map(|c| QTau::from_rational(c));
        assert_eq!(xt.monodromy_unipotent().unwrap(), xt);
        let y = s(rat(1, 2), 0, 1).map(|c| QTau::from_rational(c));
        let expected = y.add(&s(rat(1, 2), 0, 0).map(|c| QTau::from_rational(c)).scale(&QTau::symbol()));
        assert_eq!(y.monodromy_unipotent().unwrap(), expected);
        // (U - 1)^3 kills log-degree 2
        let z = s(rat(1, 2), 0, 2).map(|c| QTau::from_rational(c));
        let mut w = z.clone();
        for _ in 0..3 {
            w = w.monodromy_unipotent().unwrap().sub(&w);
        }
        assert!(w.is_zero());
        let mut w = z.clone();
        for _ in 0..2 {
            w = w.monodromy_unipotent().unwrap().sub(&w);
        }
        let t2 = QTau::symbol().mul(&QTau::symbol());
        assert_eq!(w, s(rat(1, 2), 0, 0).map(|c| QTau::from_rational(c)).scale(&t2));
    }
}
