use num_traits::Zero;

use super::data::{build_vw, theme_from_canonical, CanonicalForm};
use super::detect::fundamental_data;
use crate::error::{Error, Result};
use crate::module::{rank1_normal_submodules, AbModule, ModuleElement};
use crate::scalars::{Matrix, Rational, SubspaceBasis, TruncatedSeries};

/// A canonical form of a theme and whether it is known to be unique
/// (`None` when the search cannot decide).
#[derive(Clone, Debug)]
pub struct CanonicalResult {
    pub form: CanonicalForm,
    pub unique: Option<bool>,
}

/// Solves `(a - λ b) z - Σ_i s_i b^i y = y` modulo `b^p` for `z` and the
/// coefficients `s_i`, `i ∈ exps`. Returns a particular solution and the
/// kernel, both as `(z, s)`.
#[allow(clippy::type_complexity)]
fn stage_system(
    theta: &AbModule,
    lambda: &Rational,
    y: &[TruncatedSeries],
    exps: &[usize],
    p: usize,
) -> Option<((ModuleElement, Vec<Rational>), Vec<(ModuleElement, Vec<Rational>)>)> {
    let k = theta.rank();
    let nz = k * p;
    let mut sys = Matrix::zeros(k * p, nz + exps.len());
    let mut put = |col: usize, v: &[TruncatedSeries], sign: &Rational| {
        for (r, s) in v.iter().enumerate() {
            for (t, c) in s.coeffs().iter().enumerate() {
                if t < p && !c.is_zero() {
                    sys.set(t * k + r, col, c * sign);
                }
            }
        }
    };
    let one = Rational::from_integer(1.into());
    for c in 0..k {
        for t in 0..p {
            let mut v = vec![TruncatedSeries::zero(p); k];
            v[c] = TruncatedSeries::monomial(one.clone(), t, p);
            let av = theta.apply_a(&v);
            let col: Vec<TruncatedSeries> = av.iter().zip(&v).map(|(a, x)| a.sub(&x.shift(1).scale(lambda)).with_precision(p)).collect();
            put(c * p + t, &col, &one);
        }
    }
    for (n, &i) in exps.iter().enumerate() {
        let col: Vec<TruncatedSeries> = y.iter().map(|s| s.shift(i).with_precision(p)).collect();
        put(nz + n, &col, &-one.clone());
    }
    let mut rhs = vec![Rational::zero(); k * p];
    for (r, s) in y.iter().enumerate() {
        for t in 0..p {
            rhs[t * k + r] = s.coeff(t);
        }
    }
    let split = |v: &[Rational]| {
        let z: ModuleElement = (0..k).map(|c| TruncatedSeries::new(v[c * p..(c + 1) * p].to_vec(), p)).collect();
        (z, v[nz..].to_vec())
    };
    let part = sys.solve(&rhs)?;
    Some((split(&part), sys.kernel().iter().map(|v| split(v)).collect()))
}

fn is_generator(theta: &AbModule, x: &[TruncatedSeries]) -> bool {
    let m0 = theta.action().coeff(0);
    let mut img = SubspaceBasis::new(theta.rank());
    for c in 0..m0.cols() {
        img.insert(&m0.col(c));
    }
    let c0: Vec<Rational> = x.iter().map(|s| s.coeff(0)).collect();
    !img.contains(&c0)
}

fn add(x: &ModuleElement, y: &ModuleElement) -> ModuleElement {
    x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
}

/// Finds `S_j ∈ W_j` with `Θ ≅ Ã / Ã (a - λ_1 b) S_1^{-1} ... (a - λ_k b)`
/// by building `z_1 = w`, `(a - λ_{j+1} b) z_{j+1} = S_j z_j`, where `w`
/// spans the rank-one normal submodule; `z_k` is then a generator killed by `Π`.
pub fn canonical_form(theta: &AbModule) -> Result<CanonicalResult> {
    let data = fundamental_data(theta)?;
    let k = data.rank();
    if k == 1 {
        return Ok(CanonicalResult { form: CanonicalForm::new(data, Vec::new())?, unique: Some(true) });
    }
    let lambdas = data.lambdas();
    let report = rank1_normal_submodules(theta)?;
    if !report.unique {
        return Err(Error::NotPrimitive("no unique normal rank-one submodule".into()));
    }
    let w = &report.generators[0];
    if w.lambda != lambdas[0] {
        return Err(Error::CanonicalizationFailed(format!(
            "rank-one submodule has eigenvalue {}, expected {}",
            w.lambda, lambdas[0]
        )));
    }
    let vw = build_vw(&data);
    let mut z = w.generator.clone();
    let mut units = Vec::new();
    let mut all_unique = true;
    for j in 1..k {
        let p = z.iter().map(|s| s.precision()).min().unwrap_or(0);
        let exps: Vec<usize> = vw[j - 1].support.iter().copied().filter(|&i| i > 0).collect();
        let (part, ker) = stage_system(theta, &lambdas[j], &z, &exps, p).ok_or_else(|| {
            Error::CanonicalizationFailed(format!("stage {j}: no solution modulo b^{p}"))
        })?;
        let s_free = ker.iter().any(|(_, s)| s.iter().any(|c| !c.is_zero()));
        all_unique &= !s_free;
        let mut choice = part.clone();
        if j == k - 1 && !is_generator(theta, &choice.0) {
            let fixed = ker.iter().find(|(kz, ks)| {
                let cand = add(&part.0, kz);
                is_generator(theta, &cand) && (!s_free || ks.iter().all(|c| c.is_zero()))
            });
            match fixed {
                Some((kz, _)) => choice.0 = add(&part.0, kz),
                None => {
                    return Err(Error::CanonicalizationFailed("final stage gives no generator".into()));
                }
            }
        }
        let mut coeffs = vec![Rational::zero(); vw[j - 1].support.iter().max().unwrap() + 1];
        coeffs[0] = Rational::from_integer(1.into());
        for (&i, c) in exps.iter().zip(&choice.1) {
            coeffs[i] = c.clone();
        }
        let s = TruncatedSeries::new(coeffs, p);
        if !vw[j - 1].contains(&s) {
            return Err(Error::CanonicalizationFailed(format!("S_{j} = {s} is not in W_{j}")));
        }
        units.push(s);
        z = choice.0;
    }
    let form = CanonicalForm::new(data.clone(), units)?;
    let check = theme_from_canonical(&form, theta.precision())?;
    if fundamental_data(&check)? != data {
        return Err(Error::CanonicalizationFailed("reconstructed theme has different data".into()));
    }
    let unique = if k == 2 { Some(all_unique) } else { None };
    Ok(CanonicalResult { form, unique })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{e_lambda, f2};
    use crate::scalars::{int, rat};
    use crate::theme::{is_theme, FundamentalData};

    #[test]
    fn f2_form() {
        let r = canonical_form(&f2(16)).unwrap();
        assert_eq!(r.unique, Some(true));
        assert_eq!(r.form.units[0].coeffs(), &[int(1)]);
        assert_eq!(r.form.to_string(), "(a - 3/2 b) * (a - 1/2 b)");
    }

    #[test]
    fn rank_one_form() {
        let r = canonical_form(&e_lambda(&rat(7, 3), 8)).unwrap();
        assert_eq!(r.unique, Some(true));
        assert_eq!(r.form.data.lambda1(), &rat(7, 3));
    }

    #[test]
    fn recovers_parameter() {
        for (p1, alpha) in [(1usize, rat(2, 3)), (2, int(1)), (2, int(-5))] {
            let d = FundamentalData::new(rat(5, 2), vec![p1]).unwrap();
            let mut c = vec![int(0); p1 + 1];
            c[0] = int(1);
            c[p1] = alpha.clone();
            let cf = CanonicalForm::new(d, vec![TruncatedSeries::new(c, 16)]).unwrap();
            let theta = theme_from_canonical(&cf, 20).unwrap();
            assert!(is_theme(&theta).unwrap().is_theme);
            let r = canonical_form(&theta).unwrap();
            assert_eq!(r.form.units[0].coeff(p1), alpha);
        }
    }

    #[test]
    fn rank_three_round_trip() {
        let d = FundamentalData::new(rat(7, 2), vec![1, 1]).unwrap();
        let u1 = TruncatedSeries::new(vec![int(1), int(2)], 16);
        let u2 = TruncatedSeries::new(vec![int(1), int(3)], 16);
        let cf = CanonicalForm::new(d.clone(), vec![u1, u2]).unwrap();
        let theta = theme_from_canonical(&cf, 24).unwrap();
        assert!(is_theme(&theta).unwrap().is_theme);
        let r = canonical_form(&theta).unwrap();
        assert_eq!(r.form.data, d);
        eprintln!("{} unique {:?}", r.form, r.unique);
    }
}
