use super::data::FundamentalData;
use crate::error::{Error, Result};
use crate::fresco::bernstein_element;
use crate::module::{bernstein_char_poly, rank1_normal_submodules, AbModule, RankOneReport};
use crate::scalars::{unit_interval_class, Rational};

/// Outcome of [`is_theme`].
#[derive(Clone, Debug)]
pub struct ThemeCheck {
    pub is_theme: bool,
    /// Common class in `(0,1]` of the exponents, when they share one.
    pub class: Option<Rational>,
    pub rank_one: RankOneReport,
}

/// Classes in `(0,1]` of `-r` for the Bernstein roots `r`.
fn exponent_classes(e: &AbModule) -> Result<Vec<Rational>> {
    let cp = bernstein_char_poly(e)?;
    let rr = cp.rational_roots();
    if !rr.fully_split || rr.roots.iter().any(|r| !crate::scalars::is_negative(r)) {
        return Err(Error::NotGeometric(format!("Bernstein polynomial {cp}")));
    }
    let mut cl: Vec<Rational> = rr.roots.iter().map(|r| unit_interval_class(&-r.clone())).collect();
    cl.sort();
    cl.dedup();
    Ok(cl)
}

/// A geometric module is a theme iff it has exactly one normal rank-one
/// submodule.
pub fn is_theme(e: &AbModule) -> Result<ThemeCheck> {
    let classes = exponent_classes(e)?;
    let rank_one = rank1_normal_submodules(e)?;
    let class = if classes.len() == 1 { Some(classes[0].clone()) } else { None };
    if rank_one.unique && class.is_none() {
        log::warn!("unique rank-one submodule but exponents in {} classes", classes.len());
    }
    Ok(ThemeCheck { is_theme: rank_one.unique, class, rank_one })
}

/// Fundamental data read off the principal factorization of `P_Θ`.
pub fn fundamental_data(theta: &AbModule) -> Result<FundamentalData> {
    let classes = exponent_classes(theta)?;
    if classes.len() > 1 {
        return Err(Error::NotPrimitive(format!("exponents lie in {} classes modulo Z", classes.len())));
    }
    let lambdas = bernstein_element(theta)?.factor()?;
    FundamentalData::from_lambdas(&lambdas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{e_lambda, f2};
    use crate::scalars::rat;

    #[test]
    fn detection() {
        let c = is_theme(&f2(16)).unwrap();
        assert!(c.is_theme);
        assert_eq!(c.class, Some(rat(1, 2)));
        let e = e_lambda(&rat(1, 2), 12);
        assert!(!is_theme(&e.direct_sum(&e)).unwrap().is_theme);
        let c = is_theme(&e_lambda(&rat(5, 3), 12)).unwrap();
        assert!(c.is_theme);
        assert_eq!(c.class, Some(rat(2, 3)));
    }

    #[test]
    fn data_of_f2() {
        let d = fundamental_data(&f2(16)).unwrap();
        assert_eq!(d.lambda1(), &rat(3, 2));
        assert_eq!(d.p(), &[0]);
        let d1 = fundamental_data(&e_lambda(&rat(1, 2), 8)).unwrap();
        assert!(d1.p().is_empty());
        let mixed = e_lambda(&rat(1, 2), 8).direct_sum(&e_lambda(&rat(1, 3), 8));
        assert!(matches!(fundamental_data(&mixed), Err(Error::NotPrimitive(_))));
    }
}
