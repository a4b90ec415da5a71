use super::abmodule::{columns_to_matrix, complement_indices, AbModule, ModuleElement};
use crate::error::{Error, Result};
use crate::scalars::{SeriesMatrix, TruncatedSeries};

/// A normal submodule `G ⊆ E` with the induced modules `G` and `E/G`.
#[derive(Clone, Debug)]
pub struct NormalSplit {
    /// Basis of `G` in `e`-coordinates.
    pub generators: Vec<ModuleElement>,
    /// Columns: the generators followed by the complementary standard vectors.
    pub basis: SeriesMatrix,
    /// Indices of the complementary standard vectors.
    pub complement: Vec<usize>,
    /// `G` in the basis of its generators (`None` when `G = 0`).
    pub sub: Option<AbModule>,
    /// `E/G` in the basis of the images of the complement (`None` when `G = E`).
    pub quotient: Option<AbModule>,
}

/// Splits `E` along the submodule generated by `gens`. The generators must
/// have independent constant terms (so that the span is normal) and span an
/// `a`-stable submodule.
pub fn split_normal(e: &AbModule, gens: &[ModuleElement]) -> Result<NormalSplit> {
    let k = e.rank();
    let r = gens.len();
    let comp = complement_indices(gens, k)
        .ok_or_else(|| Error::NotNormal("generators are dependent modulo b".into()))?;
    let p = gens
        .iter()
        .flatten()
        .map(|s| s.precision())
        .min()
        .unwrap_or(e.precision())
        .min(e.precision());
    let mut cols: Vec<ModuleElement> = gens.iter().map(|g| g.iter().map(|s| s.with_precision(p)).collect()).collect();
    for &i in &comp {
        let mut v = vec![TruncatedSeries::zero(p); k];
        v[i] = TruncatedSeries::one(p);
        cols.push(v);
    }
    let basis = columns_to_matrix(&cols, p);
    let m = e.with_precision(p).change_basis(&basis)?;
    let lower = m.action().block(r, k, 0, r);
    if !lower.is_zero() {
        return Err(Error::NotNormal("span of the generators is not stable under a".into()));
    }
    let sub = if r > 0 { Some(AbModule::new(m.action().block(0, r, 0, r))?) } else { None };
    let quotient = if r < k { Some(AbModule::new(m.action().block(r, k, r, k))?) } else { None };
    Ok(NormalSplit { generators: gens.to_vec(), basis, complement: comp, sub, quotient })
}
