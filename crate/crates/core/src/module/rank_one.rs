use num_traits::Zero;

use super::abmodule::{AbModule, ModuleElement};
use super::invariants::geometric_roots;
use super::saturation::{saturate, Saturation};
use crate::error::{Error, Result};
use crate::scalars::{int, Matrix, Rational, SubspaceBasis, TruncatedSeries};

/// A normal rank-one submodule `C[[b]] x` with `a x = λ b x`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneSubmodule {
    pub lambda: Rational,
    pub generator: ModuleElement,
}

/// All normal rank-one submodules, grouped by `λ`.
#[derive(Clone, Debug)]
pub struct RankOneReport {
    /// Generators spanning, for each `λ`, a complement of `b W_{λ-1}` in `W_λ`,
    /// where `W_λ = {x ∈ E : a x = λ b x}`.
    pub generators: Vec<RankOneSubmodule>,
    /// `(λ, dim W_λ)` for every candidate with `W_λ ≠ 0`.
    pub dimensions: Vec<(Rational, usize)>,
    /// Exactly one normal rank-one submodule exists.
    pub unique: bool,
}

/// Solutions of `a x = λ b x` in the saturated module, truncated to
/// `x_0..x_{p-1}`, as flattened vectors (index `t*k + i`).
pub(crate) fn eigen_solutions(sat_module: &AbModule, lambda: &Rational, p: usize) -> Vec<Vec<Rational>> {
    let k = sat_module.rank();
    // equation n: Σ_{s=0}^{n} R_s x_{n-s} + (n - λ) x_n = 0, with R_s the b^{s+1} coefficient
    let mut sys = Matrix::zeros(k * p, k * p);
    for n in 0..p {
        for s in 0..=n {
            let rs = sat_module.action().coeff(s + 1);
            for r in 0..k {
                for c in 0..k {
                    let mut v = rs.get(r, c).clone();
                    if s == 0 && r == c {
                        v += int(n as i64) - lambda;
                    }
                    if !v.is_zero() {
                        sys.set(n * k + r, (n - s) * k + c, v);
                    }
                }
            }
        }
    }
    sys.kernel()
}

/// Window `p` of orders solved in the saturation for eigenvalue `λ`.
fn solve_window(sat: &Saturation, roots: &[Rational], lambda: &Rational) -> Result<usize> {
    let m = sat.saturated()?;
    let available = m.precision().saturating_sub(1);
    // resonances sit at n = λ + r for roots r
    let last = roots
        .iter()
        .filter_map(|r| {
            let n = lambda + r;
            if n.is_integer() && n >= Rational::zero() {
                crate::scalars::to_i64(&n)
            } else {
                None
            }
        })
        .max()
        .unwrap_or(-1);
    let need = ((last + 1).max(0) as usize).max(sat.gap + 1);
    if need > available {
        return Err(Error::PrecisionTooLow(format!(
            "need {need} orders of the saturated module, have {available}"
        )));
    }
    Ok(available)
}

/// `W_λ` as elements of `E`, with the precision they are known to.
pub(crate) fn lambda_space(
    sat: &Saturation,
    roots: &[Rational],
    lambda: &Rational,
) -> Result<Vec<ModuleElement>> {
    let m = sat.saturated()?;
    let k = m.rank();
    let p = solve_window(sat, roots, lambda)?;
    let sols = eigen_solutions(m, lambda, p);
    if sols.is_empty() {
        return Ok(Vec::new());
    }
    let delta = sat.gap as i64;
    let in_e: Vec<Vec<crate::scalars::LaurentSeries>> = sols
        .iter()
        .map(|v| sat.to_e_coords(&crate::scalars::unflatten(v, k, p)))
        .collect();
    // membership in E: principal parts vanish
    let rows: Vec<Vec<Rational>> = (1..=delta)
        .flat_map(|s| (0..k).map(move |i| (s, i)))
        .map(|(s, i)| in_e.iter().map(|x| x[i].coeff(-s)).collect())
        .collect();
    let combos = if rows.is_empty() {
        (0..sols.len())
            .map(|j| (0..sols.len()).map(|l| if l == j { int(1) } else { int(0) }).collect())
            .collect()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    let out_p = (p as i64 - delta).max(0) as usize;
    Ok(combos
        .iter()
        .map(|c| {
            (0..k)
                .map(|i| {
                    let mut acc = crate::scalars::LaurentSeries::zero(out_p as i64);
                    for (cj, x) in c.iter().zip(&in_e) {
                        if !cj.is_zero() {
                            acc = acc.add(&x[i].scale(cj));
                        }
                    }
                    TruncatedSeries::new((0..out_p as i64).map(|t| acc.coeff(t)).collect(), out_p)
                })
                .collect()
        })
        .collect())
}

/// Extends a solution `x` of `a x = λ b x`, known modulo `b^p`, using the
/// recursion `Σ_s M_s y_{n-s} + (n - 1 - λ) y_{n-1} = 0` in `E` for `n < N`.
/// The result is cut at the first order left free by the truncated system.
fn refine_in_e(e: &AbModule, lambda: &Rational, x: &[TruncatedSeries]) -> ModuleElement {
    let k = e.rank();
    let n_top = e.precision();
    let p = x.iter().map(|s| s.precision()).min().unwrap_or(0);
    if p >= n_top || p == 0 {
        return x.to_vec();
    }
    let m = n_top - p;
    let known = |t: usize, i: usize| x[i].coeff(t);
    let mut sys: Matrix = Matrix::zeros(k * m, k * m);
    let mut rhs = vec![Rational::zero(); k * m];
    for n in p..n_top {
        let row = (n - p) * k;
        for s in 0..=n {
            let ms = e.action().coeff(s);
            let t = n - s;
            for r in 0..k {
                for c in 0..k {
                    let v = ms.get(r, c);
                    if v.is_zero() {
                        continue;
                    }
                    if t >= p {
                        let cur = sys.get(row + r, (t - p) * k + c).clone();
                        sys.set(row + r, (t - p) * k + c, cur + v);
                    } else {
                        rhs[row + r] -= v * known(t, c);
                    }
                }
            }
        }
        let d = int(n as i64 - 1) - lambda;
        let t = n - 1;
        for r in 0..k {
            if t >= p {
                let cur = sys.get(row + r, (t - p) * k + r).clone();
                sys.set(row + r, (t - p) * k + r, cur + &d);
            } else {
                rhs[row + r] -= &d * known(t, r);
            }
        }
    }
    let Some(sol) = sys.solve(&rhs) else {
        return x.to_vec();
    };
    let free = sys
        .kernel()
        .iter()
        .filter_map(|v| v.iter().position(|c| !c.is_zero()).map(|i| i / k))
        .min()
        .unwrap_or(m);
    let out_p = p + free;
    (0..k)
        .map(|i| {
            let mut c: Vec<Rational> = (0..p).map(|t| known(t, i)).collect();
            c.extend((0..free).map(|t| sol[t * k + i].clone()));
            TruncatedSeries::new(c, out_p)
        })
        .collect()
}

/// Candidate eigenvalues `-r + m`, `0 ≤ m ≤ δ`: a normal generator has
/// valuation at most `δ` in the saturation.
fn candidates(roots: &[Rational], gap: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for r in roots {
        for m in 0..=gap {
            let l = -r.clone() + int(m as i64);
            if !out.contains(&l) {
                out.push(l);
            }
        }
    }
    out.sort();
    out
}

/// Normal rank-one submodules `C[[b]] x` with `a x = λ b x`.
pub fn rank1_normal_submodules(e: &AbModule) -> Result<RankOneReport> {
    let roots = geometric_roots(e)?;
    let sat = saturate(e, None);
    sat.saturated()?;
    let mut generators = Vec::new();
    let mut dimensions = Vec::new();
    let mut family = false;
    for lambda in candidates(&roots, sat.gap) {
        let w: Vec<ModuleElement> = lambda_space(&sat, &roots, &lambda)?
            .iter()
            .map(|x| refine_in_e(e, &lambda, x))
            .collect();
        if w.is_empty() {
            continue;
        }
        dimensions.push((lambda.clone(), w.len()));
        let k = e.rank();
        let mut consts = SubspaceBasis::new(k);
        let mut found = 0;
        for x in &w {
            let c: Vec<Rational> = x.iter().map(|s| s.coeff(0)).collect();
            if consts.insert(&c) {
                found += 1;
            }
        }
        if found == 0 {
            continue;
        }
        if w.len() > 1 {
            family = true;
        }
        // reduced basis of the constant-term image, lifted to W_λ
        let lifted = normalized_generators(&w, k);
        for g in lifted {
            generators.push(RankOneSubmodule { lambda: lambda.clone(), generator: g });
        }
    }
    let unique = generators.len() == 1 && !family;
    Ok(RankOneReport { generators, dimensions, unique })
}

/// Elements of `W` whose constant terms form a reduced echelon basis of the
/// image of `W` in `E / b E`.
fn normalized_generators(w: &[ModuleElement], k: usize) -> Vec<ModuleElement> {
    // rows: constant terms of w, augmented with an identity to track combinations
    let n = w.len();
    let rows: Vec<Vec<Rational>> = w
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let mut r: Vec<Rational> = x.iter().map(|s| s.coeff(0)).collect();
            r.extend((0..n).map(|l| if l == j { int(1) } else { int(0) }));
            r
        })
        .collect();
    let (rref, pivots) = Matrix::from_rows(rows).rref();
    let mut out = Vec::new();
    for (row, &p) in pivots.iter().enumerate() {
        if p >= k {
            break;
        }
        let p_prec = w[0][0].precision();
        let mut g: ModuleElement = vec![TruncatedSeries::zero(p_prec); k];
        for (j, x) in w.iter().enumerate() {
            let c = rref.get(row, k + j);
            if c.is_zero() {
                continue;
            }
            for (gi, xi) in g.iter_mut().zip(x) {
                *gi = gi.add(&xi.scale(c));
            }
        }
        out.push(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{e_lambda, f2};
    use crate::scalars::rat;

    fn check_eigen(e: &AbModule, s: &RankOneSubmodule) {
        let ax = e.apply_a(&s.generator);
        for (i, g) in s.generator.iter().enumerate() {
            let rhs = g.shift(1).scale(&s.lambda);
            let p = g.precision();
            assert!(ax[i].sub(&rhs).with_precision(p).is_zero());
        }
        assert!(s.generator.iter().any(|c| !c.coeff(0).is_zero()));
    }

    #[test]
    fn rank_one_module() {
        let e = e_lambda(&rat(1, 2), 10);
        let r = rank1_normal_submodules(&e).unwrap();
        assert!(r.unique);
        assert_eq!(r.generators.len(), 1);
        assert_eq!(r.generators[0].lambda, rat(1, 2));
        assert_eq!(r.generators[0].generator[0].coeffs(), &[int(1)]);
    }

    #[test]
    fn f2_has_unique_rank_one() {
        let e = f2(16);
        let r = rank1_normal_submodules(&e).unwrap();
        assert!(r.unique, "{r:?}");
        let g = &r.generators[0];
        assert_eq!(g.lambda, rat(3, 2));
        // e2 - 1/2 b e1
        assert_eq!(g.generator[0].coeffs(), &[int(0), rat(-1, 2)]);
        assert_eq!(g.generator[1].coeffs(), &[int(1)]);
        check_eigen(&e, g);
    }

    #[test]
    fn direct_sum_gives_family() {
        let e = e_lambda(&rat(1, 2), 10);
        let s = e.direct_sum(&e);
        let r = rank1_normal_submodules(&s).unwrap();
        assert!(!r.unique);
        assert_eq!(r.generators.len(), 2);
        for g in &r.generators {
            check_eigen(&s, g);
        }
    }
}
