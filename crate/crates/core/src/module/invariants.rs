use super::abmodule::AbModule;
use super::saturation::saturate;
use crate::error::{Error, Result};
use crate::scalars::{Matrix, Polynomial};

/// `-b^{-1} a` on `Ẽ / b Ẽ`, where `Ẽ` is the saturation.
pub fn residue_matrix(e: &AbModule) -> Result<Matrix> {
    let sat = saturate(e, None);
    Ok(sat.saturated()?.residue().neg())
}

/// Minimal polynomial of `-b^{-1} a` on `Ẽ / b Ẽ`.
pub fn bernstein_polynomial(e: &AbModule) -> Result<Polynomial> {
    Ok(residue_matrix(e)?.min_poly())
}

/// Characteristic polynomial of `-b^{-1} a` on `Ẽ / b Ẽ`.
pub fn bernstein_char_poly(e: &AbModule) -> Result<Polynomial> {
    Ok(residue_matrix(e)?.char_poly())
}

/// True when the Bernstein polynomial splits over `Q` with negative roots.
pub fn is_geometric(e: &AbModule) -> Result<bool> {
    Ok(polynomial_is_geometric(&bernstein_polynomial(e)?))
}

pub fn polynomial_is_geometric(p: &Polynomial) -> bool {
    let rr = p.rational_roots();
    rr.fully_split && rr.roots.iter().all(|r| crate::scalars::is_negative(r))
}

/// Roots of the characteristic Bernstein polynomial, or `NotGeometric`.
pub(crate) fn geometric_roots(e: &AbModule) -> Result<Vec<crate::scalars::Rational>> {
    let cp = bernstein_char_poly(e)?;
    if !polynomial_is_geometric(&cp) {
        return Err(Error::NotGeometric(format!("Bernstein polynomial {cp}")));
    }
    Ok(cp.rational_roots().roots)
}
