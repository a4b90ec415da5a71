use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::{
    int, Matrix, Polynomial, Rational, SeriesMatrix, SubspaceBasis, TruncatedSeries,
};

/// Coordinates `Σ S_j(b) e_j` of an element in the basis `(e_j)`.
pub type ModuleElement = Vec<TruncatedSeries>;

/// Free `C[[b]]`-module of rank `k` with `a` acting by `a e_j = Σ_i M_ij e_i`.
#[derive(Clone, PartialEq, Debug)]
pub struct AbModule {
    action: SeriesMatrix,
}

impl AbModule {
    pub fn new(action: SeriesMatrix) -> Result<Self> {
        if action.rows() != action.cols() {
            return Err(Error::InvalidInput("action matrix must be square".into()));
        }
        if action.rows() == 0 {
            return Err(Error::InvalidInput("rank must be at least 1".into()));
        }
        Ok(AbModule { action })
    }

    /// `E_λ`: rank one with `a e = λ b e`.
    pub fn rank_one(lambda: &Rational, precision: usize) -> Self {
        let m = Matrix::from_rows(vec![vec![lambda.clone()]]);
        AbModule { action: SeriesMatrix::from_constant(&m, 1, precision) }
    }

    /// Simple pole module `a e = b R e` for a constant matrix `R`.
    pub fn simple_pole(r: &Matrix, precision: usize) -> Self {
        AbModule { action: SeriesMatrix::from_constant(r, 1, precision) }
    }

    /// The module with `a e_j = Σ_i A_ij(a) b e_i`, solved order by order.
    pub fn from_simple_pole_system(a: &[Vec<Polynomial>], precision: usize) -> Result<Self> {
        let k = a.len();
        if k == 0 || a.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput("system matrix must be square and nonempty".into()));
        }
        let constant = Matrix::from_rows(
            a.iter().map(|r| r.iter().map(|p| p.coeff(0)).collect()).collect(),
        );
        let mut module = Self::simple_pole(&constant, precision);
        // each round fixes at least one more b-adic order
        for _ in 0..precision {
            let mut cols = Vec::with_capacity(k);
            for j in 0..k {
                let mut acc = module.zero_element();
                for (i, row) in a.iter().enumerate() {
                    let p = &row[j];
                    if p.is_zero() {
                        continue;
                    }
                    let be = module.basis_element(i).iter().map(|s| s.shift(1)).collect::<Vec<_>>();
                    let term = module.apply_polynomial(p, &be);
                    acc = add_elements(&acc, &term);
                }
                cols.push(acc);
            }
            let next = AbModule { action: columns_to_matrix(&cols, precision) };
            if next == module {
                break;
            }
            module = next;
        }
        Ok(module)
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn precision(&self) -> usize {
        self.action.precision()
    }

    pub fn action(&self) -> &SeriesMatrix {
        &self.action
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        AbModule { action: self.action.with_precision(precision) }
    }

    pub fn zero_element(&self) -> ModuleElement {
        vec![TruncatedSeries::zero(self.precision()); self.rank()]
    }

    pub fn basis_element(&self, i: usize) -> ModuleElement {
        let mut v = self.zero_element();
        v[i] = TruncatedSeries::one(self.precision());
        v
    }

    /// `a · v` via `a (S e) = S (a e) + b^2 S' e`.
    pub fn apply_a(&self, v: &[TruncatedSeries]) -> ModuleElement {
        let p = v.iter().map(|s| s.precision()).min().unwrap_or(0).min(self.precision());
        let mut out: ModuleElement = self.action.mul_vec(v);
        for (o, s) in out.iter_mut().zip(v) {
            *o = o.add(&s.derivative().shift(2)).with_precision(p);
        }
        out
    }

    /// `P(a) · v` for a polynomial `P`.
    pub fn apply_polynomial(&self, p: &Polynomial, v: &[TruncatedSeries]) -> ModuleElement {
        let mut acc: ModuleElement = v.iter().map(|s| TruncatedSeries::zero(s.precision())).collect();
        for c in p.coeffs().iter().rev() {
            acc = add_elements(&self.apply_a(&acc), &scale_element(v, c));
        }
        acc
    }

    /// `a · E ⊂ b · E`.
    pub fn is_simple_pole(&self) -> bool {
        self.precision() == 0 || self.action.coeff(0).is_zero()
    }

    /// Coefficient `R_0` of `b` in the action; the residue of `b^{-1} a` for
    /// simple pole modules.
    pub fn residue(&self) -> Matrix {
        self.action.coeff(1)
    }

    /// Matrix of `a` on `E / b^p E` in the flattened basis `b^t e_i ↦ t*k + i`.
    pub fn a_matrix(&self, p: usize) -> Matrix {
        let k = self.rank();
        let mut m = Matrix::zeros(k * p, k * p);
        for t in 0..p {
            for i in 0..k {
                let col = t * k + i;
                for s in 0..p - t {
                    let ms = self.action.coeff(s);
                    for r in 0..k {
                        let v = ms.get(r, i).clone();
                        if !v.is_zero() {
                            m.set((t + s) * k + r, col, v);
                        }
                    }
                }
                if t > 0 && t + 1 < p {
                    let v = m.get((t + 1) * k + i, col).clone() + int(t as i64);
                    m.set((t + 1) * k + i, col, v);
                }
            }
        }
        m
    }

    /// Module in the basis given by the columns of `b` (invertible constant
    /// term): action `B^{-1} (M B + b^2 B')`.
    pub fn change_basis(&self, b: &SeriesMatrix) -> Result<Self> {
        let inv = b.inverse()?;
        let mb = self.action.mul(b).add(&b.derivative().shift(2));
        AbModule::new(inv.mul(&mb).with_precision(b.precision().min(self.precision())))
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let k1 = self.rank();
        let k2 = o.rank();
        let p = self.precision().min(o.precision());
        let coeffs = (0..p)
            .map(|t| {
                let mut m = Matrix::zeros(k1 + k2, k1 + k2);
                let a = self.action.coeff(t);
                let b = o.action.coeff(t);
                for i in 0..k1 {
                    for j in 0..k1 {
                        m.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..k2 {
                    for j in 0..k2 {
                        m.set(k1 + i, k1 + j, b.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        AbModule { action: SeriesMatrix::from_coeffs(k1 + k2, k1 + k2, coeffs, p) }
    }

    /// Codimension of `a E + b E` in `E`.
    pub fn cokernel_dimension(&self) -> usize {
        self.rank() - self.action.coeff(0).rank()
    }
}

pub(crate) fn add_elements(x: &[TruncatedSeries], y: &[TruncatedSeries]) -> ModuleElement {
    x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
}

pub(crate) fn scale_element(x: &[TruncatedSeries], c: &Rational) -> ModuleElement {
    x.iter().map(|a| a.scale(c)).collect()
}

/// Series matrix whose columns are the given elements.
pub(crate) fn columns_to_matrix(cols: &[ModuleElement], precision: usize) -> SeriesMatrix {
    let k = cols.first().map_or(0, |c| c.len());
    let p = cols
        .iter()
        .flatten()
        .map(|s| s.precision())
        .min()
        .unwrap_or(precision)
        .min(precision);
    let coeffs = (0..p)
        .map(|t| {
            let mut m = Matrix::zeros(k, cols.len());
            for (j, c) in cols.iter().enumerate() {
                for (i, s) in c.iter().enumerate() {
                    m.set(i, j, s.coeff(t));
                }
            }
            m
        })
        .collect();
    SeriesMatrix::from_coeffs(k, cols.len(), coeffs, p)
}

/// Indices of standard vectors completing the constant terms of `gens` to a
/// basis; `None` when the constant terms are dependent.
pub(crate) fn complement_indices(gens: &[ModuleElement], k: usize) -> Option<Vec<usize>> {
    let mut sub = SubspaceBasis::new(k);
    for g in gens {
        let c: Vec<Rational> = g.iter().map(|s| s.coeff(0)).collect();
        if !sub.insert(&c) {
            return None;
        }
    }
    let mut out = Vec::new();
    for i in 0..k {
        let mut e = vec![Rational::zero(); k];
        e[i] = int(1);
        if sub.insert(&e) {
            out.push(i);
        }
    }
    Some(out)
}

impl fmt::Display for AbModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank {} module, precision {}", self.rank(), self.precision())?;
        for j in 0..self.rank() {
            let terms: Vec<String> = (0..self.rank())
                .filter_map(|i| {
                    let s = self.action.entry(i, j);
                    if s.is_zero() {
                        None
                    } else {
                        let body = s.to_pretty("b");
                        let body = body.rsplit_once(" + O(").map_or(body.clone(), |(x, _)| x.to_string());
                        Some(format!("({body})*e{}", i + 1))
                    }
                })
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            writeln!(f, "  a*e{} = {}", j + 1, rhs)?;
        }
        Ok(())
    }
}
