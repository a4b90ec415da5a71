use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::field::{fmt_rational, lcm_of_denominators, Field, Rational};

/// Dense univariate polynomial, `coeffs[i]` is the coefficient of `x^i`.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<F: Field = Rational> {
    coeffs: Vec<F>,
}

impl<F: Field> Polynomial<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `x - root`.
    pub fn linear(root: &F) -> Self {
        Self::new(vec![root.neg(), F::one()])
    }

    pub fn x() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map_or(false, |c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].sub(&c.mul(dc));
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(o);
        self.mul(o).div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &F) -> Self {
        let lin = Self::new(vec![c.clone(), F::one()]);
        self.compose(&lin)
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(q).add(&Self::constant(c.clone())))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&F::from_int(i as i64)))
                .collect(),
        )
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn from_roots(roots: &[F]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| acc.mul(&Self::linear(r)))
    }

    /// Formats with a custom variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if i == 0 {
                cs
            } else if c.is_one() {
                mon
            } else if *c == F::one().neg() {
                format!("-{mon}")
            } else if cs.contains(['+', ' ']) || cs[1..].contains('-') {
                format!("({cs})*{mon}")
            } else {
                format!("{cs}*{mon}")
            };
            parts.push(term);
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

/// Result of the rational-root search.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalRoots {
    /// Roots with multiplicity, sorted in nonincreasing order.
    pub roots: Vec<Rational>,
    /// True when the polynomial is a constant times the product of `x - r`.
    pub fully_split: bool,
}

impl Polynomial<Rational> {
    /// Primitive integer polynomial proportional to `self`.
    pub fn primitive_integer_form(&self) -> Vec<BigInt> {
        let l = lcm_of_denominators(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(<BigInt as num_traits::Zero>::zero(), |g, c| g.gcd(c));
        if num_traits::Zero::is_zero(&g) {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// All rational roots with multiplicity, by the rational-root theorem
    /// on the primitive integer form, deflating each root found.
    pub fn rational_roots(&self) -> RationalRoots {
        assert!(!self.is_zero(), "rational_roots of the zero polynomial");
        let mut p = self.clone();
        let mut roots = Vec::new();
        // zero roots first
        while p.degree().unwrap_or(0) > 0 && p.coeff(0).is_zero() {
            roots.push(Rational::zero());
            p = Polynomial::new(p.coeffs[1..].to_vec());
        }
        loop {
            let deg = p.degree().unwrap();
            if deg == 0 {
                break;
            }
            let ints = p.primitive_integer_form();
            let lead = ints.last().unwrap().abs();
            let cst = ints[0].abs();
            let mut found = None;
            'search: for q in divisors(&lead) {
                for pn in divisors(&cst) {
                    for sign in [1, -1] {
                        let cand = Rational::new(pn.clone() * BigInt::from(sign), q.clone());
                        if p.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    let (q, rem) = p.div_rem(&Polynomial::linear(&r));
                    debug_assert!(rem.is_zero());
                    roots.push(r);
                    p = q;
                }
                None => break,
            }
        }
        roots.sort_by(|a, b| b.cmp(a));
        let fully_split = p.degree() == Some(0);
        RationalRoots { roots, fully_split }
    }

    pub fn to_pretty(&self) -> String {
        self.display_with("x")
    }

    /// Product form `(x + 1/2)^2*(x + 3)` when the polynomial splits over Q.
    pub fn factored_display(&self) -> String {
        if self.is_zero() || self.degree() == Some(0) {
            return self.to_string();
        }
        let rr = self.rational_roots();
        if !rr.fully_split {
            return self.to_string();
        }
        let mut out = String::new();
        let lead = self.leading().unwrap().clone();
        if !lead.is_one() {
            out.push_str(&fmt_rational(&lead));
            out.push('*');
        }
        let mut i = 0;
        let mut factors = Vec::new();
        while i < rr.roots.len() {
            let r = &rr.roots[i];
            let mut m = 1;
            while i + m < rr.roots.len() && &rr.roots[i + m] == r {
                m += 1;
            }
            let f = if r.is_zero() {
                "x".to_string()
            } else if r.is_negative() {
                format!("(x + {})", fmt_rational(&-r))
            } else {
                format!("(x - {})", fmt_rational(r))
            };
            factors.push(if m > 1 { format!("{f}^{m}") } else { f });
            i += m;
        }
        out.push_str(&factors.join("*"));
        out
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if num_traits::Zero::is_zero(n) {
        return vec![<BigInt as num_traits::One>::one()];
    }
    let n = n.abs();
    let mut out = Vec::new();
    let mut small = Vec::new();
    let mut d = <BigInt as num_traits::One>::one();
    while &d * &d <= n {
        if num_traits::Zero::is_zero(&(&n % &d)) {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    small.extend(out.into_iter().rev());
    small
}
