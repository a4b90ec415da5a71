use num_traits::Zero;

use super::abmodule::{AbModule, ModuleElement};
use super::invariants::geometric_roots;
use super::saturation::saturate;
use super::submodule::{split_normal, NormalSplit};
use crate::error::{Error, Result};
use crate::scalars::{frac_class, int, unflatten, Matrix, Rational, SubspaceBasis, TruncatedSeries};

/// `E_Λ` together with `E / E_Λ`.
#[derive(Clone, Debug)]
pub struct PrimitivePart {
    pub classes: Vec<Rational>,
    pub split: NormalSplit,
}

impl PrimitivePart {
    pub fn rank(&self) -> usize {
        self.split.generators.len()
    }
}

fn in_classes(root: &Rational, classes: &[Rational]) -> bool {
    let c = frac_class(&-root.clone());
    classes.iter().any(|l| frac_class(l) == c)
}

/// The largest normal submodule whose Bernstein roots lie in `-Λ mod Z`.
pub fn primitive_part(e: &AbModule, classes: &[Rational]) -> Result<PrimitivePart> {
    let roots = geometric_roots(e)?;
    let sat = saturate(e, None);
    let m = sat.saturated()?;
    let k = e.rank();
    let delta = sat.gap;
    let target = roots.iter().filter(|r| in_classes(r, classes)).count();
    let p = m.precision().saturating_sub(1);
    if p <= delta {
        return Err(Error::PrecisionTooLow("precision does not exceed the regularity gap".into()));
    }
    // T = -b^{-1} a on Ẽ / b^p Ẽ
    let mut t = Matrix::zeros(k * p, k * p);
    for tt in 0..p {
        for i in 0..k {
            let col = tt * k + i;
            for s in 0..p - tt {
                let rs = m.action().coeff(s + 1);
                for r in 0..k {
                    let v = rs.get(r, i);
                    if !v.is_zero() {
                        t.set((tt + s) * k + r, col, -v.clone());
                    }
                }
            }
            let d = t.get(col, col).clone() - int(tt as i64);
            t.set(col, col, d);
        }
    }
    // generalized eigenspaces for eigenvalues r - t with r in the chosen classes
    let mut eig: Vec<(Rational, usize)> = Vec::new();
    for r in &roots {
        for tt in 0..p {
            let ev = r.clone() - int(tt as i64);
            match eig.iter_mut().find(|(x, _)| *x == ev) {
                Some((_, mult)) => *mult += 1,
                None => eig.push((ev, 1)),
            }
        }
    }
    let mut kspace = SubspaceBasis::new(k * p);
    for (ev, mult) in eig.iter().filter(|(ev, _)| in_classes(&(ev.clone()), classes)) {
        let shifted = t.sub(&Matrix::identity(k * p).scale(ev));
        for v in shifted.pow(*mult).kernel() {
            kspace.insert(&v);
        }
    }
    // image of E in Ẽ / b^p Ẽ
    let mut espace = SubspaceBasis::new(k * p);
    for i in 0..k {
        let mut unit = vec![TruncatedSeries::zero(p + delta); k];
        unit[i] = TruncatedSeries::one(p + delta);
        let f = sat.from_e_coords(&unit, p);
        for tt in 0..p {
            let shifted: Vec<TruncatedSeries> = f.iter().map(|s| s.shift(tt).with_precision(p)).collect();
            espace.insert(&crate::scalars::flatten(&shifted, p));
        }
    }
    let inter = intersect(&kspace, &espace, k * p);
    // back to e-coordinates, known modulo b^{p-δ}
    let mut gens: Vec<ModuleElement> = Vec::new();
    let mut consts = SubspaceBasis::new(k);
    let out_p = p - delta;
    for v in &inter {
        let x = sat.to_e_coords(&unflatten(v, k, p));
        let x: ModuleElement = x
            .iter()
            .map(|s| TruncatedSeries::new((0..out_p as i64).map(|t| s.coeff(t)).collect(), out_p))
            .collect();
        let c: Vec<Rational> = x.iter().map(|s| s.coeff(0)).collect();
        if consts.insert(&c) {
            gens.push(x);
        }
    }
    if gens.len() != target {
        return Err(Error::PrecisionTooLow(format!(
            "found {} generators for a part of rank {target}",
            gens.len()
        )));
    }
    let split = split_normal(e, &gens)?;
    Ok(PrimitivePart { classes: classes.to_vec(), split })
}

/// Basis of `U ∩ V`.
pub(crate) fn intersect(u: &SubspaceBasis, v: &SubspaceBasis, dim: usize) -> Vec<Vec<Rational>> {
    let uv: Vec<&Vec<Rational>> = u.vectors().collect();
    let vv: Vec<&Vec<Rational>> = v.vectors().collect();
    if uv.is_empty() || vv.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vec<Rational>> = uv.iter().map(|x| (*x).clone()).collect();
    cols.extend(vv.iter().map(|x| x.iter().map(|c| -c.clone()).collect::<Vec<_>>()));
    let m = Matrix::from_cols(&cols, dim);
    m.kernel()
        .into_iter()
        .map(|c| {
            let mut out = vec![Rational::zero(); dim];
            for (cj, x) in c.iter().zip(&uv) {
                if !cj.is_zero() {
                    for (o, xi) in out.iter_mut().zip(x.iter()) {
                        *o += cj * xi;
                    }
                }
            }
            out
        })
        .collect()
}
