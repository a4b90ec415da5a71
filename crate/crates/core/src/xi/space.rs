use num_traits::Zero;

use super::element::XiElement;
use crate::error::{Error, Result};
use crate::module::{AbModule, ModuleElement};
use crate::scalars::{int, unit_interval_class, Matrix, Rational, TruncatedSeries};

/// `Ξ^N_Λ ⊗ V` as a free `C[[b]]`-module with basis
/// `e_{λ,j} ⊗ v = s^{λ-1} (Log s)^j / j! ⊗ v`, `λ ∈ Λ`, `j ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiSpace {
    lambdas: Vec<Rational>,
    n_log: usize,
    dim: usize,
}

impl XiSpace {
    /// Classes are normalized into `(0,1]`; duplicates are removed.
    pub fn new(lambdas: &[Rational], n_log: usize, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("coefficient dimension must be positive".into()));
        }
        let mut ls: Vec<Rational> = lambdas.iter().map(unit_interval_class).collect();
        ls.sort();
        ls.dedup();
        if ls.is_empty() {
            return Err(Error::InvalidInput("empty set of exponent classes".into()));
        }
        Ok(XiSpace { lambdas: ls, n_log, dim })
    }

    /// The smallest space containing `x`.
    pub fn of_element(x: &XiElement) -> Result<Self> {
        Self::new(&x.lambdas(), x.log_degree().unwrap_or(0), x.dim())
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn n_log(&self) -> usize {
        self.n_log
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len() * (self.n_log + 1) * self.dim
    }

    pub fn index(&self, lambda_idx: usize, j: usize, v: usize) -> usize {
        (lambda_idx * (self.n_log + 1) + j) * self.dim + v
    }

    /// `(λ index, j, v)` of a basis index.
    pub fn label(&self, idx: usize) -> (usize, usize, usize) {
        let v = idx % self.dim;
        let rest = idx / self.dim;
        (rest / (self.n_log + 1), rest % (self.n_log + 1), v)
    }

    /// Residue `R` with `a e = b R e`: `R e_{λ,j} = λ e_{λ,j} + e_{λ,j-1}`.
    pub fn residue(&self) -> Matrix {
        let n = self.rank();
        let mut r = Matrix::zeros(n, n);
        for c in 0..n {
            let (li, j, v) = self.label(c);
            r.set(c, c, self.lambdas[li].clone());
            if j > 0 {
                r.set(self.index(li, j - 1, v), c, int(1));
            }
        }
        r
    }

    pub fn module(&self, precision: usize) -> AbModule {
        AbModule::simple_pole(&self.residue(), precision)
    }

    /// `b^m e_{λ,j} ⊗ v` as an expansion.
    fn basis_power(&self, li: usize, j: usize, v: usize, m: usize, shift_precision: usize) -> XiElement {
        let mut c = vec![Rational::zero(); self.dim];
        c[v] = int(1);
        let mut x = XiElement::zero(self.dim, shift_precision);
        x.add_term(self.lambdas[li].clone(), j, 0, c);
        for _ in 0..m {
            x = x.xi_b();
        }
        x
    }

    /// Coordinates of `x` modulo `b^{shift precision}`.
    pub fn to_coords(&self, x: &XiElement) -> Result<ModuleElement> {
        if x.dim() != self.dim {
            return Err(Error::InvalidInput("coefficient dimension mismatch".into()));
        }
        let p = x.shift_precision();
        let n = self.rank();
        let mut coeffs = vec![vec![Rational::zero(); p]; n];
        let mut rest = x.clone();
        for m in 0..p {
            for li in 0..self.lambdas.len() {
                let l = self.lambdas[li].clone();
                for j in (0..=self.n_log).rev() {
                    let c = rest.coeff(&l, j, m);
                    if c.iter().all(|y| y.is_zero()) {
                        continue;
                    }
                    // leading coefficient of b^m e_{λ,j} is 1 / Π_{i<m} (λ+i)
                    let mut lead = int(1);
                    for i in 0..m {
                        lead *= &l + int(i as i64);
                    }
                    for (v, cv) in c.iter().enumerate() {
                        if cv.is_zero() {
                            continue;
                        }
                        let s = cv * &lead;
                        coeffs[self.index(li, j, v)][m] = s.clone();
                        rest = rest.sub(&self.basis_power(li, j, v, m, p).scale(&s));
                    }
                }
            }
        }
        if let Some(((l, j, _), _)) = rest.terms().next() {
            return Err(Error::InvalidInput(format!(
                "term with exponent class {l} and log degree {j} lies outside the space"
            )));
        }
        Ok(coeffs.into_iter().map(|c| TruncatedSeries::new(c, p)).collect())
    }

    /// The expansion with the given coordinates.
    pub fn from_coords(&self, y: &[TruncatedSeries]) -> XiElement {
        let p = y.iter().map(|s| s.precision()).min().unwrap_or(0);
        let mut x = XiElement::zero(self.dim, p);
        for (idx, s) in y.iter().enumerate() {
            let (li, j, v) = self.label(idx);
            for (m, c) in s.coeffs().iter().enumerate() {
                if !c.is_zero() && m < p {
                    x = x.add(&self.basis_power(li, j, v, m, p).scale(c));
                }
            }
        }
        x
    }

    /// Coordinates of `(U - 1)^d / d!` applied to `y`, i.e. the `τ^d` part of
    /// the unipotent monodromy.
    pub fn monodromy_part(&self, y: &[TruncatedSeries], d: usize) -> ModuleElement {
        let p = y.iter().map(|s| s.precision()).min().unwrap_or(0);
        (0..self.rank())
            .map(|idx| {
                let (li, j, v) = self.label(idx);
                if j + d > self.n_log {
                    return TruncatedSeries::zero(p);
                }
                y[self.index(li, j + d, v)].clone()
            })
            .collect()
    }

    /// Indices of basis vectors with log degree `> j`.
    pub fn log_rows_above(&self, j: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.label(i).1 > j).collect()
    }

    /// Indices of basis vectors whose class is not in `classes`.
    pub fn rows_outside_classes(&self, classes: &[Rational]) -> Vec<usize> {
        let cl: Vec<Rational> = classes.iter().map(unit_interval_class).collect();
        (0..self.rank())
            .filter(|&i| !cl.contains(&self.lambdas[self.label(i).0]))
            .collect()
    }
}
