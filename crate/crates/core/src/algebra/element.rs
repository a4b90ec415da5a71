use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{fmt_rational, Rational, TruncatedSeries};

/// Default bound on the a-degree of an element.
pub const DEFAULT_A_DEGREE_BOUND: usize = 64;

/// Element of the completed algebra modulo `b^N`, stored in left normal form
/// `Σ c_{m,d} b^m a^d`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct AbElement {
    terms: BTreeMap<(usize, usize), Rational>,
    precision: usize,
    a_bound: usize,
}

impl AbElement {
    pub fn zero(precision: usize) -> Self {
        AbElement { terms: BTreeMap::new(), precision, a_bound: DEFAULT_A_DEGREE_BOUND }
    }

    pub fn one(precision: usize) -> Self {
        Self::monomial(Rational::one(), 0, 0, precision)
    }

    /// `c * b^m * a^d`.
    pub fn monomial(c: Rational, m: usize, d: usize, precision: usize) -> Self {
        let mut x = Self::zero(precision);
        x.add_term(m, d, c);
        x
    }

    pub fn a(precision: usize) -> Self {
        Self::monomial(Rational::one(), 0, 1, precision)
    }

    pub fn b(precision: usize) -> Self {
        Self::monomial(Rational::one(), 1, 0, precision)
    }

    /// `a - λ b`.
    pub fn linear(lambda: &Rational, precision: usize) -> Self {
        let mut x = Self::a(precision);
        x.add_term(1, 0, -lambda.clone());
        x
    }

    /// A series in `b` viewed as an element of degree 0 in `a`.
    pub fn from_series(s: &TruncatedSeries) -> Self {
        let mut x = Self::zero(s.precision());
        for (m, c) in s.coeffs().iter().enumerate() {
            x.add_term(m, 0, c.clone());
        }
        x
    }

    /// Builds from `(m, d, c)` triples in left normal form.
    pub fn from_left_terms(terms: &[(usize, usize, Rational)], precision: usize) -> Self {
        let mut x = Self::zero(precision);
        for (m, d, c) in terms {
            x.add_term(*m, *d, c.clone());
        }
        x
    }

    /// Builds from `(d, n, c)` triples meaning `c * a^d * b^n` (right form).
    pub fn from_right_terms(terms: &[(usize, usize, Rational)], precision: usize) -> Self {
        let mut x = Self::zero(precision);
        for (d, n, c) in terms {
            let mut t = Self::monomial(c.clone(), *n, 0, precision);
            for _ in 0..*d {
                t = t.left_mul_a();
            }
            x = x.add(&t);
        }
        x
    }

    pub fn with_a_bound(mut self, bound: usize) -> Self {
        self.a_bound = bound;
        self.check_bound();
        self
    }

    pub fn a_bound(&self) -> usize {
        self.a_bound
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        let p = precision.min(self.precision);
        let mut x = AbElement { terms: BTreeMap::new(), precision: p, a_bound: self.a_bound };
        for (&(m, d), c) in &self.terms {
            x.add_term(m, d, c.clone());
        }
        x
    }

    fn add_term(&mut self, m: usize, d: usize, c: Rational) {
        if m >= self.precision || c.is_zero() {
            return;
        }
        let e = self.terms.entry((m, d)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(m, d));
        }
    }

    fn check_bound(&self) {
        if let Some(d) = self.a_degree() {
            assert!(
                d <= self.a_bound,
                "a-degree {d} exceeds the configured bound {}",
                self.a_bound
            );
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `b^m a^d` in left normal form.
    pub fn coeff(&self, m: usize, d: usize) -> Rational {
        self.terms.get(&(m, d)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms `((m, d), c)` in increasing order of `(m, d)`.
    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.terms.iter()
    }

    pub fn a_degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(_, d)| d).max()
    }

    /// The coefficient series of `a^d`: `Σ_m c_{m,d} b^m`.
    pub fn a_coefficient(&self, d: usize) -> TruncatedSeries {
        let pairs: Vec<(usize, Rational)> = self
            .terms
            .iter()
            .filter(|(&(_, dd), _)| dd == d)
            .map(|(&(m, _), c)| (m, c.clone()))
            .collect();
        TruncatedSeries::from_terms(&pairs, self.precision)
    }

    /// Least total degree `m + d` among the terms.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(|&(m, d)| m + d).min()
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut x = Self::zero(self.precision);
        x.a_bound = self.a_bound;
        for (&(m, d), c) in &self.terms {
            if m + d == k {
                x.add_term(m, d, c.clone());
            }
        }
        x
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut x = self.with_precision(o.precision);
        x.a_bound = self.a_bound.max(o.a_bound);
        for (&(m, d), c) in &o.terms {
            x.add_term(m, d, c.clone());
        }
        x
    }

    pub fn neg(&self) -> Self {
        let mut x = self.clone();
        for c in x.terms.values_mut() {
            *c = -c.clone();
        }
        x
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut x = Self::zero(self.precision);
        x.a_bound = self.a_bound;
        for (&(m, d), v) in &self.terms {
            x.add_term(m, d, v * c);
        }
        x
    }

    /// `a * self`, using `a b^n = b^n a + n b^{n+1}`.
    pub fn left_mul_a(&self) -> Self {
        let mut x = Self::zero(self.precision);
        x.a_bound = self.a_bound;
        for (&(n, e), c) in &self.terms {
            x.add_term(n, e + 1, c.clone());
            if n > 0 {
                x.add_term(n + 1, e, c * Rational::from_integer((n as i64).into()));
            }
        }
        x.check_bound();
        x
    }

    /// `b^k * self`.
    pub fn left_mul_b_pow(&self, k: usize) -> Self {
        let mut x = Self::zero(self.precision);
        x.a_bound = self.a_bound;
        for (&(n, e), c) in &self.terms {
            x.add_term(n + k, e, c.clone());
        }
        x
    }

    /// Product in normal form, exact modulo `b^min(N_x, N_y)`.
    pub fn mul(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        let mut out = Self::zero(p);
        out.a_bound = self.a_bound.max(o.a_bound);
        let top = self.a_degree().unwrap_or(0);
        let mut pow = o.with_precision(p);
        pow.a_bound = out.a_bound;
        let mut powers = vec![pow.clone()];
        for _ in 0..top {
            pow = pow.left_mul_a();
            powers.push(pow.clone());
        }
        for (&(m, d), c) in &self.terms {
            if m >= p {
                continue;
            }
            for (&(n, e), v) in powers[d].terms() {
                out.add_term(m + n, e, c * v);
            }
        }
        out.check_bound();
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.precision);
        acc.a_bound = self.a_bound;
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Right normal form as `(d, n, c)` triples meaning `c * a^d * b^n`.
    pub fn to_right_terms(&self) -> Vec<(usize, usize, Rational)> {
        // right form keyed by (d, n)
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (&(m, d), c) in &self.terms {
            let mut cur: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            cur.insert((0, m), c.clone());
            for _ in 0..d {
                // (a^e b^n) a = a^{e+1} b^n - n a^e b^{n+1}
                let mut next: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
                for (&(e, n), v) in &cur {
                    *next.entry((e + 1, n)).or_insert_with(Rational::zero) += v;
                    if n > 0 && n + 1 < self.precision {
                        *next.entry((e, n + 1)).or_insert_with(Rational::zero) -=
                            v * Rational::from_integer((n as i64).into());
                    }
                }
                cur = next;
            }
            for (k, v) in cur {
                *acc.entry(k).or_insert_with(Rational::zero) += v;
            }
        }
        acc.into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((d, n), v)| (d, n, v))
            .collect()
    }

    /// Division on the right: `self = q * d + r` with `r` of a-degree 0.
    /// The divisor must have the shape `a - T(b)`.
    pub fn right_divide(&self, d: &Self) -> Result<(Self, Self)> {
        if d.a_degree() != Some(1) || !d.a_coefficient(1).coeffs().eq(&[Rational::one()]) {
            return Err(Error::DivisorNotMonic);
        }
        self.right_divide_general(d)
    }

    /// Division on the right by any element whose leading a-coefficient is a
    /// unit series: `self = q * d + r` with `deg_a r < deg_a d`.
    pub fn right_divide_general(&self, d: &Self) -> Result<(Self, Self)> {
        let p = self.precision.min(d.precision);
        let h = d.a_degree().ok_or(Error::DivisorNotMonic)?;
        let lead_inv = d
            .a_coefficient(h)
            .with_precision(p)
            .invert()
            .map_err(|_| Error::DivisorNotMonic)?;
        let mut rem = self.with_precision(p);
        let mut q = Self::zero(p);
        q.a_bound = self.a_bound.max(d.a_bound);
        while let Some(top) = rem.a_degree() {
            if top < h {
                break;
            }
            let s = rem.a_coefficient(top);
            let t = s.mul(&lead_inv);
            let mut step = Self::zero(p);
            for (m, c) in t.coeffs().iter().enumerate() {
                step.add_term(m, top - h, c.clone());
            }
            rem = rem.sub(&step.mul(d));
            q = q.add(&step);
            debug_assert!(rem.a_degree().map_or(true, |x| x < top));
        }
        Ok((q, rem))
    }

    /// The pure series when the a-degree is at most 0.
    pub fn as_series(&self) -> Option<TruncatedSeries> {
        if self.a_degree().unwrap_or(0) == 0 {
            Some(self.a_coefficient(0))
        } else {
            None
        }
    }

    /// `[m, d, "p/q"]` triples.
    pub fn to_triples(&self) -> Vec<(usize, usize, String)> {
        self.terms
            .iter()
            .map(|(&(m, d), c)| (m, d, fmt_rational(c)))
            .collect()
    }
}

fn monomial_text(m: usize, d: usize) -> String {
    let bpart = match m {
        0 => String::new(),
        1 => "b".to_string(),
        _ => format!("b^{m}"),
    };
    let apart = match d {
        0 => String::new(),
        1 => "a".to_string(),
        _ => format!("a^{d}"),
    };
    match (bpart.is_empty(), apart.is_empty()) {
        (true, true) => String::new(),
        (false, true) => bpart,
        (true, false) => apart,
        (false, false) => format!("{bpart}*{apart}"),
    }
}

impl fmt::Display for AbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest a-degree first, then increasing b-power
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by(|x, y| y.0 .1.cmp(&x.0 .1).then(x.0 .0.cmp(&y.0 .0)));
        for (i, (&(m, d), c)) in keys.into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let mon = monomial_text(m, d);
            let body = if mon.is_empty() {
                fmt_rational(&abs)
            } else if abs.is_one() {
                mon
            } else {
                format!("{}*{}", fmt_rational(&abs), mon)
            };
            if i == 0 {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    const N: usize = 8;

    fn a() -> AbElement {
        AbElement::a(N)
    }
    fn b() -> AbElement {
        AbElement::b(N)
    }

    #[test]
    fn commutation_rule() {
        let ab = a().mul(&b());
        let expected = AbElement::from_left_terms(&[(1, 1, int(1)), (2, 0, int(1))], N);
        assert_eq!(ab, expected);
        let ab2 = a().mul(&b().pow(2));
        let expected = AbElement::from_left_terms(&[(2, 1, int(1)), (3, 0, int(2))], N);
        assert_eq!(ab2, expected);
        assert_eq!(b().mul(&a()), AbElement::from_left_terms(&[(1, 1, int(1))], N));
    }

    #[test]
    fn product_of_linear_factors() {
        let x = AbElement::linear(&rat(3, 2), N).mul(&AbElement::linear(&rat(1, 2), N));
        let expected = AbElement::from_left_terms(
            &[(0, 2, int(1)), (1, 1, int(-2)), (2, 0, rat(1, 4))],
            N,
        );
        assert_eq!(x, expected);
        assert_eq!(x.to_string(), "a^2 - 2*b*a + 1/4*b^2");
        assert_eq!(AbElement::one(N).mul(&x), x);
        assert_eq!(b().mul(&b()), AbElement::monomial(int(1), 2, 0, N));
    }

    #[test]
    fn right_division() {
        let x = AbElement::linear(&rat(3, 2), N).mul(&AbElement::linear(&rat(1, 2), N));
        let (q, r) = x.right_divide(&AbElement::linear(&rat(1, 2), N)).unwrap();
        assert_eq!(q, AbElement::linear(&rat(3, 2), N));
        assert!(r.is_zero());
        // remainder (λ² - λ + 1/4) b² for a generic λ
        for l in [int(0), int(1), rat(1, 3), int(-2)] {
            let (_, r) = x.right_divide(&AbElement::linear(&l, N)).unwrap();
            let expected = &l * &l - &l + rat(1, 4);
            assert_eq!(r, AbElement::monomial(expected, 2, 0, N));
        }
        let d = AbElement::linear(&int(4), N);
        let (q, r) = d.right_divide(&d).unwrap();
        assert_eq!(q, AbElement::one(N));
        assert!(r.is_zero());
        let bad = AbElement::a(N).scale(&int(2));
        assert_eq!(x.right_divide(&bad), Err(Error::DivisorNotMonic));
    }

    #[test]
    fn right_form_round_trip() {
        let x = AbElement::linear(&rat(3, 2), N)
            .mul(&AbElement::linear(&rat(1, 2), N))
            .mul(&AbElement::from_left_terms(&[(0, 0, int(1)), (1, 0, int(3)), (2, 1, int(1))], N));
        let r = x.to_right_terms();
        assert_eq!(AbElement::from_right_terms(&r, N), x);
    }
}
