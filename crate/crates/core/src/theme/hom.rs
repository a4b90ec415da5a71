use num_traits::Zero;

use crate::error::{Error, Result};
use crate::module::{saturate, AbModule, Saturation};
use crate::scalars::{int, to_i64, Matrix, Rational, TruncatedSeries};
use crate::xi::{realization_is_invariant, Realization};

/// `dim Hom_Ã(E_1, E_2)` with a stabilization flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomReport {
    pub dimension: usize,
    /// Same dimension at precision `N - 1`.
    pub stabilized: bool,
    pub precision: usize,
}

/// Resonances `n = ρ_1 - ρ_2 ≥ 0` between residue eigenvalues.
fn max_resonance(r1: &Matrix, r2: &Matrix) -> i64 {
    let roots = |m: &Matrix| m.char_poly().rational_roots().roots;
    let mut best = -1;
    for a in roots(r1) {
        for b in roots(r2) {
            let d = &a - &b;
            if d.is_integer() && d >= Rational::zero() {
                best = best.max(to_i64(&d).unwrap());
            }
        }
    }
    best
}

fn hom_at(e1: &AbModule, e2: &AbModule) -> Result<usize> {
    let s1 = saturate(e1, None);
    let s2 = saturate(e2, None);
    let m1 = s1.saturated()?;
    let m2 = s2.saturated()?;
    let (k1, k2) = (m1.rank(), m2.rank());
    let p = m1.precision().min(m2.precision()).saturating_sub(1);
    let need = (max_resonance(&m1.residue(), &m2.residue()) + 1).max(0) as usize;
    if p < need.max(s2.gap) || p == 0 {
        return Err(Error::PrecisionTooLow(format!("need {} orders of the saturations, have {p}", need.max(s2.gap))));
    }
    // unknown Φ_t[i][j] at index (t*k2 + i)*k1 + j
    let idx = |t: usize, i: usize, j: usize| (t * k2 + i) * k1 + j;
    let nvar = p * k1 * k2;
    let mut sys = Matrix::zeros(nvar, nvar);
    for n in 0..p {
        for s in 0..=n {
            let t = n - s;
            let r1 = m1.action().coeff(s + 1);
            let r2 = m2.action().coeff(s + 1);
            for i in 0..k2 {
                for j in 0..k1 {
                    let row = idx(n, i, j);
                    // (Φ_t R1_s)_{ij} = Σ_l Φ_t[i][l] R1_s[l][j]
                    for l in 0..k1 {
                        let c = r1.get(l, j);
                        if !c.is_zero() {
                            let v = sys.get(row, idx(t, i, l)) + c;
                            sys.set(row, idx(t, i, l), v);
                        }
                    }
                    // -(R2_s Φ_t)_{ij}
                    for l in 0..k2 {
                        let c = r2.get(i, l);
                        if !c.is_zero() {
                            let v = sys.get(row, idx(t, l, j)) - c;
                            sys.set(row, idx(t, l, j), v);
                        }
                    }
                }
            }
        }
        for i in 0..k2 {
            for j in 0..k1 {
                let v = sys.get(idx(n, i, j), idx(n, i, j)) - int(n as i64);
                sys.set(idx(n, i, j), idx(n, i, j), v);
            }
        }
    }
    let sols = sys.kernel();
    if sols.is_empty() {
        return Ok(0);
    }
    let delta = s2.gap;
    if delta == 0 {
        return Ok(sols.len());
    }
    // integrality: F_2 Φ F_1^{-1} e_i has no polar part
    let inv_cols: Vec<Vec<TruncatedSeries>> = (0..k1)
        .map(|i| {
            let mut e = vec![TruncatedSeries::zero(delta); k1];
            e[i] = TruncatedSeries::one(delta);
            s1.from_e_coords(&e, delta)
        })
        .collect();
    let constraints: Vec<Vec<Rational>> = sols
        .iter()
        .map(|v| polar_parts(v, &inv_cols, &s2, k1, k2, delta))
        .collect();
    let rank = Matrix::from_rows(constraints).transpose().rank();
    Ok(sols.len() - rank)
}

fn polar_parts(
    phi: &[Rational],
    inv_cols: &[Vec<TruncatedSeries>],
    s2: &Saturation,
    k1: usize,
    k2: usize,
    delta: usize,
) -> Vec<Rational> {
    let entry = |i: usize, j: usize| {
        TruncatedSeries::new((0..delta).map(|t| phi[(t * k2 + i) * k1 + j].clone()).collect(), delta)
    };
    let mut out = Vec::new();
    for y in inv_cols {
        let z: Vec<TruncatedSeries> = (0..k2)
            .map(|i| (0..k1).fold(TruncatedSeries::zero(delta), |acc, j| acc.add(&entry(i, j).mul(&y[j]))))
            .collect();
        let ez = s2.to_e_coords(&z);
        for c in &ez {
            for s in 1..=delta as i64 {
                out.push(c.coeff(-s));
            }
        }
    }
    out
}

/// `dim_C Hom_Ã(E_1, E_2)`, computed on the saturations and checked at two
/// precisions.
pub fn hom_dimension(e1: &AbModule, e2: &AbModule) -> Result<HomReport> {
    let n = e1.precision().min(e2.precision());
    let dimension = hom_at(&e1.with_precision(n), &e2.with_precision(n))?;
    let stabilized = match hom_at(&e1.with_precision(n - 1), &e2.with_precision(n - 1)) {
        Ok(d) => d == dimension,
        Err(_) => false,
    };
    Ok(HomReport { dimension, stabilized, precision: n })
}

/// Both invariance criteria for a theme.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub hom: HomReport,
    /// `dim End = rank`.
    pub by_endomorphisms: bool,
    /// The supplied realization is monodromy invariant.
    pub realization_invariant: Option<bool>,
}

pub fn is_invariant(theta: &AbModule, realization: Option<&Realization>) -> Result<InvarianceReport> {
    let hom = hom_dimension(theta, theta)?;
    let by_endomorphisms = hom.dimension == theta.rank();
    Ok(InvarianceReport { hom, by_endomorphisms, realization_invariant: realization.map(realization_is_invariant) })
}
