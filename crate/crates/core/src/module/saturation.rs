use num_traits::{One, Zero};

use super::abmodule::AbModule;
use crate::error::{Error, Result};
use crate::scalars::{int, LaurentSeries, Matrix, Rational, SeriesMatrix, SubspaceBasis};

/// Why a saturation run stopped without stabilizing.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NotStabilizedReason {
    /// The iteration cap was reached.
    StepCap,
    /// Lattice valuations left the window `b^{-N} E` representable at precision `N`.
    PrecisionWindow,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SaturationStatus {
    Saturated,
    NotStabilized(NotStabilizedReason),
}

/// Lattice `E ⊆ L ⊆ b^{-N} E`, given by generators in `e`-coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct Lattice {
    /// Column generators; entry `[j][i]` is coordinate `i` of generator `j`.
    pub generators: Vec<Vec<LaurentSeries>>,
}

impl Lattice {
    /// Least exponent of `b` appearing in the generators.
    pub fn valuation(&self) -> i64 {
        self.generators
            .iter()
            .flatten()
            .filter(|s| !s.is_zero())
            .map(|s| s.valuation())
            .min()
            .unwrap_or(0)
    }
}

/// Outcome of [`saturate`].
#[derive(Clone, Debug)]
pub struct Saturation {
    pub status: SaturationStatus,
    /// Number of iterations that enlarged the lattice.
    pub steps: usize,
    /// Lattice valuation after each enlarging step.
    pub valuations: Vec<i64>,
    /// The saturated module on the basis `f_j` (only when saturated).
    pub module: Option<AbModule>,
    /// Basis `f_j` of the saturation in `e`-coordinates, echelon form.
    pub basis: Lattice,
    /// Least `δ` with `b^δ Ẽ ⊆ E`.
    pub gap: usize,
}

impl Saturation {
    pub fn is_saturated(&self) -> bool {
        self.status == SaturationStatus::Saturated
    }

    /// The saturated module, or `NotStabilized`.
    pub fn saturated(&self) -> Result<&AbModule> {
        let m = self.module.as_ref().ok_or_else(|| {
            Error::NotStabilized(format!(
                "{:?} after {} steps (lattice valuation {})",
                self.status,
                self.steps,
                self.valuations.last().copied().unwrap_or(0)
            ))
        })?;
        if m.precision() < 2 {
            return Err(Error::PrecisionTooLow(format!(
                "saturation known modulo b^{}, the residue needs b^2 (gap {})",
                m.precision(),
                self.gap
            )));
        }
        Ok(m)
    }

    /// Basis matrix `F` (columns `f_j`) with exact Laurent polynomial entries.
    pub fn basis_matrix(&self) -> &[Vec<LaurentSeries>] {
        &self.basis.generators
    }
}

/// Principal parts `Σ c_{s,i} b^{-s} e_i`, `1 ≤ s ≤ depth`, flattened as `(s-1)*k + i`.
struct PrincipalParts {
    k: usize,
    depth: usize,
}

impl PrincipalParts {
    fn idx(&self, s: usize, i: usize) -> usize {
        (s - 1) * self.k + i
    }

    fn dim(&self) -> usize {
        self.k * self.depth
    }

    fn depth_of(&self, v: &[Rational]) -> usize {
        (1..=self.depth)
            .rev()
            .find(|&s| (0..self.k).any(|i| !v[self.idx(s, i)].is_zero()))
            .unwrap_or(0)
    }

    /// `b · v` modulo `E`.
    fn mul_b(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for s in 2..=self.depth {
            for i in 0..self.k {
                out[self.idx(s - 1, i)] = v[self.idx(s, i)].clone();
            }
        }
        out
    }

    /// `b^{-1} a · v` modulo `E`; `None` when the result leaves the window.
    fn b_inv_a(&self, e: &AbModule, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.dim()];
        for s in 1..=self.depth {
            for i in 0..self.k {
                let c = &v[self.idx(s, i)];
                if c.is_zero() {
                    continue;
                }
                if s >= self.depth || s >= e.precision() {
                    return None;
                }
                // b^{-1} a (b^{-s} e_i) = Σ_t b^{t-s-1} M_t e_i - s b^{-s} e_i
                for t in 0..=s {
                    let mt = e.action().coeff(t);
                    for r in 0..self.k {
                        let m = mt.get(r, i);
                        if !m.is_zero() {
                            let d = s + 1 - t;
                            out[self.idx(d, r)] += c * m;
                        }
                    }
                }
                out[self.idx(s, i)] -= c * int(s as i64);
            }
        }
        Some(out)
    }

    /// `b^{-1} M_0 e_i`, the part of `b^{-1} a E` outside `E`.
    fn image_of_e(&self, e: &AbModule) -> Vec<Vec<Rational>> {
        let m0 = e.action().coeff(0);
        (0..self.k)
            .map(|i| {
                let mut v = vec![Rational::zero(); self.dim()];
                for r in 0..self.k {
                    v[self.idx(1, r)] = m0.get(r, i).clone();
                }
                v
            })
            .collect()
    }

    fn close_under_b(&self, basis: &mut SubspaceBasis) {
        let mut queue: Vec<Vec<Rational>> = basis.vectors().cloned().collect();
        while let Some(v) = queue.pop() {
            let w = self.mul_b(&v);
            if basis.insert(&w) {
                queue.push(w);
            }
        }
    }
}

/// Saturates `E` under `b^{-1} a`: the smallest lattice containing `E` stable
/// by `b^{-1} a`. The default cap is `rank * N` iterations.
pub fn saturate(e: &AbModule, max_steps: Option<usize>) -> Saturation {
    let k = e.rank();
    let n = e.precision();
    let cap = max_steps.unwrap_or(k * n).max(1);
    let pp = PrincipalParts { k, depth: n };
    let mut v = SubspaceBasis::new(pp.dim());
    let mut steps = 0;
    let mut valuations = Vec::new();
    let mut status = SaturationStatus::Saturated;
    loop {
        let mut next = v.clone();
        for w in pp.image_of_e(e) {
            next.insert(&w);
        }
        let mut overflow = false;
        for w in v.vectors() {
            match pp.b_inv_a(e, w) {
                Some(x) => {
                    next.insert(&x);
                }
                None => overflow = true,
            }
        }
        pp.close_under_b(&mut next);
        if overflow {
            status = SaturationStatus::NotStabilized(NotStabilizedReason::PrecisionWindow);
            break;
        }
        if next.len() == v.len() {
            break;
        }
        v = next;
        steps += 1;
        let depth = v.vectors().map(|w| pp.depth_of(w)).max().unwrap_or(0);
        valuations.push(-(depth as i64));
        if depth >= n {
            status = SaturationStatus::NotStabilized(NotStabilizedReason::PrecisionWindow);
            break;
        }
        if steps >= cap {
            status = SaturationStatus::NotStabilized(NotStabilizedReason::StepCap);
            break;
        }
    }
    let (basis, depths) = echelon_basis(&pp, &v, n);
    let gap = depths.iter().copied().max().unwrap_or(0);
    let module = if status == SaturationStatus::Saturated {
        Some(action_on_basis(e, &basis, gap))
    } else {
        None
    };
    Saturation {
        status,
        steps,
        valuations,
        module,
        basis: Lattice { generators: basis },
        gap,
    }
}

/// Lower-triangular basis `f_i = b^{-d_i} e_i + ...` of `E + V`.
fn echelon_basis(
    pp: &PrincipalParts,
    v: &SubspaceBasis,
    n: usize,
) -> (Vec<Vec<LaurentSeries>>, Vec<usize>) {
    let k = pp.k;
    // order coordinates by (i ascending, s descending) so that the RREF pivots
    // give, for each i, the deepest pole available with zero earlier coordinates
    let order: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (1..=pp.depth).rev().map(move |s| (s, i)))
        .collect();
    let rows: Vec<Vec<Rational>> = v
        .vectors()
        .map(|w| order.iter().map(|&(s, i)| w[pp.idx(s, i)].clone()).collect())
        .collect();
    let precision = n as i64;
    let mut basis = Vec::with_capacity(k);
    let mut depths = vec![0; k];
    let (rref, pivots) = if rows.is_empty() {
        (Matrix::zeros(0, order.len()), Vec::new())
    } else {
        Matrix::from_rows(rows).rref()
    };
    for i in 0..k {
        let found = pivots.iter().enumerate().find(|(_, &p)| order[p].1 == i);
        let mut col: Vec<LaurentSeries> = (0..k).map(|_| LaurentSeries::zero(precision)).collect();
        match found {
            Some((r, &p)) => {
                depths[i] = order[p].0;
                for (c, &(s, ii)) in order.iter().enumerate() {
                    let x = rref.get(r, c);
                    if !x.is_zero() {
                        col[ii] = col[ii].add(&LaurentSeries::monomial(x.clone(), -(s as i64), precision));
                    }
                }
            }
            None => {
                col[i] = LaurentSeries::monomial(Rational::one(), 0, precision);
            }
        }
        basis.push(col);
    }
    (basis, depths)
}

/// `a` applied to a Laurent vector: `Σ x_i (M e_i) + b^2 x_i' e_i`.
pub(crate) fn apply_a_laurent(e: &AbModule, x: &[LaurentSeries], precision: i64) -> Vec<LaurentSeries> {
    let k = e.rank();
    let mut out: Vec<LaurentSeries> = (0..k).map(|_| LaurentSeries::zero(precision)).collect();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (r, o) in out.iter_mut().enumerate() {
            // M is treated as exact; the caller bounds the precision
            let m = LaurentSeries::from_series(&e.action().entry(r, i))
                .exact_to(precision - xi.valuation().min(0) + 1);
            *o = o.add(&xi.mul(&m));
        }
        out[i] = out[i].add(&xi.derivative().shift(2));
    }
    out.into_iter().map(|s| s.with_precision(precision)).collect()
}

/// Solves `F y = x` for the lower-triangular Laurent basis `F`.
pub(crate) fn solve_triangular(f: &[Vec<LaurentSeries>], x: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
    let k = f.len();
    let mut rest = x.to_vec();
    let mut y = Vec::with_capacity(k);
    for i in 0..k {
        let c = rest[i].mul(&f[i][i].invert()?);
        for (r, col) in rest.iter_mut().zip(&f[i]) {
            *r = r.sub(&c.mul(col));
        }
        y.push(c);
    }
    Ok(y)
}

/// Action matrix of `a` on the basis `f`, known modulo `b^{N-δ}`.
fn action_on_basis(e: &AbModule, basis: &[Vec<LaurentSeries>], gap: usize) -> AbModule {
    let k = e.rank();
    let n = e.precision();
    let out_prec = n.saturating_sub(gap);
    // the unknown tail of M only affects orders ≥ N - δ because F^{-1} is
    // integral; pad the working precision to absorb conservative tracking
    let work = (out_prec + (k + 3) * gap + 4) as i64;
    let exact: Vec<Vec<LaurentSeries>> = basis
        .iter()
        .map(|c| c.iter().map(|s| s.exact_to(work + gap as i64)).collect())
        .collect();
    let mut coeffs = vec![Matrix::zeros(k, k); out_prec];
    for j in 0..k {
        let ax = apply_a_laurent(e, &exact[j], work);
        let y = solve_triangular(&exact, &ax).expect("triangular basis has invertible diagonal");
        for (i, yi) in y.iter().enumerate() {
            debug_assert!(yi.is_zero() || yi.valuation() >= 0, "saturated action must be integral");
            assert!(yi.precision() >= out_prec as i64, "insufficient working precision");
            for (t, m) in coeffs.iter_mut().enumerate() {
                m.set(i, j, yi.coeff(t as i64));
            }
        }
    }
    AbModule::new(SeriesMatrix::from_coeffs(k, k, coeffs, out_prec)).expect("square action")
}

impl Saturation {
    /// `F x`: coordinates in `e` of an element given in the basis `f`.
    pub fn to_e_coords(&self, x: &[crate::scalars::TruncatedSeries]) -> Vec<LaurentSeries> {
        let f = &self.basis.generators;
        let k = f.len();
        let p = x.iter().map(|s| s.precision()).min().unwrap_or(0) as i64;
        let mut out: Vec<LaurentSeries> = (0..k).map(|_| LaurentSeries::zero(p - self.gap as i64)).collect();
        for (j, xj) in x.iter().enumerate() {
            let xj = LaurentSeries::from_series(xj);
            for (o, fij) in out.iter_mut().zip(&f[j]) {
                *o = o.add(&xj.mul(&fij.exact_to(p + self.gap as i64)));
            }
        }
        out
    }

    /// `F^{-1} y`: coordinates in `f` of an element of `E`, modulo `b^p`.
    pub fn from_e_coords(&self, y: &[crate::scalars::TruncatedSeries], p: usize) -> Vec<crate::scalars::TruncatedSeries> {
        let k = self.basis.generators.len();
        let work = (p + (k + 2) * self.gap + 2) as i64;
        let f: Vec<Vec<LaurentSeries>> = self
            .basis
            .generators
            .iter()
            .map(|c| c.iter().map(|s| s.exact_to(work)).collect())
            .collect();
        let ys: Vec<LaurentSeries> = y.iter().map(LaurentSeries::from_series).collect();
        let sol = solve_triangular(&f, &ys).expect("triangular basis has invertible diagonal");
        sol.iter().map(|s| s.to_series().with_precision(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{e_lambda, f2, irregular};
    use crate::scalars::rat;

    #[test]
    fn saturates_f2_in_one_step() {
        let s = saturate(&f2(16), None);
        assert!(s.is_saturated());
        assert_eq!(s.steps, 1);
        assert_eq!(s.gap, 1);
        let m = s.saturated().unwrap();
        assert!(m.is_simple_pole());
        assert_eq!(m.precision(), 15);
        // f1 = e1, f2 = b^{-1} e2
        assert_eq!(s.basis.generators[0][0], LaurentSeries::monomial(int(1), 0, 16));
        assert!(s.basis.generators[0][1].is_zero());
        assert_eq!(s.basis.generators[1][1], LaurentSeries::monomial(int(1), -1, 16));
        let r = m.residue().neg();
        assert_eq!(
            r,
            Matrix::from_rows(vec![vec![int(0), rat(1, 4)], vec![int(-1), int(-1)]])
        );
        // nothing beyond order one
        for t in 2..m.precision() {
            assert!(m.action().coeff(t).is_zero());
        }
    }

    #[test]
    fn simple_pole_is_fixed() {
        let e = e_lambda(&rat(1, 2), 8);
        let s = saturate(&e, None);
        assert_eq!(s.steps, 0);
        assert_eq!(s.saturated().unwrap(), &e);
        let again = saturate(s.saturated().unwrap(), None);
        assert_eq!(again.steps, 0);
    }

    #[test]
    fn irregular_valuations_drop() {
        let s = saturate(&irregular(16), None);
        assert!(matches!(s.status, SaturationStatus::NotStabilized(_)));
        assert!(s.valuations.len() >= 5);
        for w in s.valuations.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(s.saturated().is_err());
    }

    #[test]
    fn coordinate_round_trip() {
        let s = saturate(&f2(12), None);
        let y = vec![
            crate::scalars::TruncatedSeries::new(vec![int(1), int(2)], 12),
            crate::scalars::TruncatedSeries::new(vec![int(3), int(0), int(5)], 12),
        ];
        let x = s.from_e_coords(&y, 10);
        let back = s.to_e_coords(&x);
        for (b, yy) in back.iter().zip(&y) {
            for t in 0..8 {
                assert_eq!(b.coeff(t), yy.coeff(t as usize));
            }
        }
    }
}
