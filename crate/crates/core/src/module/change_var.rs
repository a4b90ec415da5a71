use num_traits::Zero;

use super::abmodule::{add_elements, columns_to_matrix, scale_element, AbModule, ModuleElement};
use super::saturation::saturate;
use crate::error::{Error, Result};
use crate::scalars::TruncatedSeries;

/// `c(a) · v` for a power series `c`, using `a^m E ⊆ b^{m-δ} E` to truncate.
/// Terms of `c` at or beyond its precision are unknown, which lowers the
/// precision of the result accordingly.
pub fn apply_a_series(e: &AbModule, c: &TruncatedSeries, v: &[TruncatedSeries]) -> Result<ModuleElement> {
    let sat = saturate(e, None);
    sat.saturated().map_err(|_| Error::NotRegular)?;
    Ok(apply_a_series_with_gap(e, c, v, sat.gap))
}

pub(crate) fn apply_a_series_with_gap(
    e: &AbModule,
    c: &TruncatedSeries,
    v: &[TruncatedSeries],
    gap: usize,
) -> ModuleElement {
    let p = v.iter().map(|s| s.precision()).min().unwrap_or(0).min(e.precision());
    let needed = p + gap;
    let out_p = if c.precision() >= needed { p } else { c.precision().saturating_sub(gap) };
    let mut acc: ModuleElement = vec![TruncatedSeries::zero(out_p); v.len()];
    let mut pow: ModuleElement = v.iter().map(|s| s.with_precision(p)).collect();
    for m in 0..needed.min(c.precision()) {
        let cm = c.coeff(m);
        if !cm.is_zero() {
            acc = add_elements(&acc, &scale_element(&pow, &cm));
        }
        pow = e.apply_a(&pow);
    }
    acc.into_iter().map(|s| s.with_precision(out_p)).collect()
}

/// The module obtained by letting `θ(a)` act as `a` and `b θ'(a)` as `b`,
/// expressed on the same basis (which stays a basis for the new `b`).
pub fn change_of_variable(e: &AbModule, theta: &TruncatedSeries) -> Result<AbModule> {
    if !theta.coeff(0).is_zero() {
        return Err(Error::InvalidTheta("θ(0) must vanish".into()));
    }
    let dtheta = theta.derivative();
    if dtheta.coeff(0).is_zero() {
        return Err(Error::InvalidTheta("θ'(0) must be nonzero".into()));
    }
    let sat = saturate(e, None);
    sat.saturated().map_err(|_| Error::NotRegular)?;
    let gap = sat.gap;
    let n = e.precision();
    let unit_inv = dtheta.invert().expect("nonzero constant term");
    let k = e.rank();
    let mut cols: Vec<ModuleElement> = Vec::with_capacity(k);
    for j in 0..k {
        let alpha = apply_a_series_with_gap(e, theta, &e.basis_element(j), gap);
        // expand α e_j = Σ_n β^n c_n with constant vectors c_n
        let mut coords: Vec<Vec<crate::scalars::Rational>> = vec![Vec::new(); k];
        let mut y = alpha;
        while y.iter().map(|s| s.precision()).min().unwrap_or(0) > 0 && coords[0].len() < n {
            let c: Vec<_> = y.iter().map(|s| s.coeff(0)).collect();
            for (ci, v) in coords.iter_mut().zip(&c) {
                ci.push(v.clone());
            }
            // β^{-1} = θ'(a)^{-1} b^{-1}
            let rest: ModuleElement = y
                .iter()
                .zip(&c)
                .map(|(s, v)| s.sub(&TruncatedSeries::constant(v.clone(), s.precision())).unshift(1))
                .collect();
            y = apply_a_series_with_gap(e, &unit_inv, &rest, gap);
        }
        let len = coords[0].len();
        cols.push(coords.into_iter().map(|v| TruncatedSeries::new(v, len)).collect());
    }
    AbModule::new(columns_to_matrix(&cols, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    #[test]
    fn a_series_on_rank_one() {
        let e = AbModule::rank_one(&rat(1, 2), 6);
        let v = e.basis_element(0);
        let z = TruncatedSeries::new(vec![int(0), int(1)], 20);
        assert_eq!(apply_a_series(&e, &z, &v).unwrap(), e.apply_a(&v));
        let one_plus_z = TruncatedSeries::new(vec![int(1), int(1)], 20);
        let got = apply_a_series(&e, &one_plus_z, &v).unwrap();
        assert_eq!(got[0], TruncatedSeries::new(vec![int(1), rat(1, 2)], 6));
        let geo = TruncatedSeries::new(vec![int(1); 20], 20);
        let got = apply_a_series(&e, &geo, &v).unwrap();
        let mut expected = Vec::new();
        let mut c = int(1);
        for m in 0..6 {
            expected.push(c.clone());
            c *= rat(1, 2) + int(m);
        }
        assert_eq!(got[0], TruncatedSeries::new(expected, 6));
    }

    #[test]
    fn change_of_variable_examples() {
        let e = AbModule::rank_one(&rat(2, 3), 8);
        let id = TruncatedSeries::new(vec![int(0), int(1)], 20);
        assert_eq!(change_of_variable(&e, &id).unwrap(), e);
        let double = TruncatedSeries::new(vec![int(0), int(2)], 20);
        assert_eq!(change_of_variable(&e, &double).unwrap(), e);
        let bad = TruncatedSeries::new(vec![int(1), int(1)], 20);
        assert!(matches!(change_of_variable(&e, &bad), Err(Error::InvalidTheta(_))));
        let flat = TruncatedSeries::new(vec![int(0), int(0), int(1)], 20);
        assert!(matches!(change_of_variable(&e, &flat), Err(Error::InvalidTheta(_))));
    }
}
