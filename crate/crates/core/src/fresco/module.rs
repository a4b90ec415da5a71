use num_traits::Zero;

use super::presentation::FrescoPresentation;
use crate::algebra::{AbElement, HomogeneousElement};
use crate::error::{Error, Result};
use crate::module::{
    bernstein_char_poly, columns_to_matrix, is_geometric, rank1_normal_submodules, split_normal,
    AbModule, ModuleElement, NormalSplit,
};
use crate::scalars::{int, Polynomial, Rational, SeriesMatrix, SubspaceBasis, TruncatedSeries};

/// `Ã / Ã Π` on the basis `e, a e, ..., a^{k-1} e`, for `Π` whose leading
/// `a`-coefficient is a unit.
pub fn module_from_element(pi: &AbElement) -> Result<AbModule> {
    let k = pi
        .a_degree()
        .filter(|&k| k > 0)
        .ok_or_else(|| Error::InvalidInput(format!("{pi} has no positive a-degree")))?;
    let n = pi.precision();
    let lead_inv = pi.a_coefficient(k).invert()?;
    let mut cols: Vec<ModuleElement> = Vec::with_capacity(k);
    for j in 0..k - 1 {
        let mut v = vec![TruncatedSeries::zero(n); k];
        v[j + 1] = TruncatedSeries::one(n);
        cols.push(v);
    }
    cols.push((0..k).map(|j| pi.a_coefficient(j).mul(&lead_inv).neg()).collect());
    AbModule::new(columns_to_matrix(&cols, n))
}

/// The fresco `Ã / Ã Π` for a presentation, modulo `b^precision`.
pub fn module_from_presentation(p: &FrescoPresentation, precision: usize) -> Result<AbModule> {
    module_from_element(&p.to_element(precision)?)
}

/// `e, a e, ..., a^{n-1} e`.
fn krylov(e: &AbModule, x: &[TruncatedSeries], n: usize) -> Vec<ModuleElement> {
    let mut out = vec![x.to_vec()];
    for _ in 1..n {
        let next = e.apply_a(out.last().unwrap());
        out.push(next);
    }
    out
}

/// A generator `x` of `E` over `Ã` such that `x, a x, ..., a^{k-1} x` is a
/// basis, or `None` when `E / (a E + b E)` is not one-dimensional.
pub fn fresco_generator(e: &AbModule) -> Option<ModuleElement> {
    if e.cokernel_dimension() != 1 {
        return None;
    }
    let k = e.rank();
    let n = e.precision();
    let m0 = e.action().coeff(0);
    let mut image = SubspaceBasis::new(k);
    for c in 0..k {
        image.insert(&m0.col(c));
    }
    for i in 0..k {
        let mut col = vec![Rational::zero(); k];
        col[i] = int(1);
        if image.contains(&col) {
            continue;
        }
        let mut x = vec![TruncatedSeries::zero(n); k];
        x[i] = TruncatedSeries::one(n);
        let basis = columns_to_matrix(&krylov(e, &x, k), n);
        if basis.coeff(0).rank() == k {
            return Some(x);
        }
    }
    None
}

/// Geometric and monogenic over `Ã`.
pub fn is_fresco(e: &AbModule) -> Result<bool> {
    if !is_geometric(e)? {
        return Ok(false);
    }
    Ok(fresco_generator(e).is_some())
}

/// A fresco presented by the annihilator of a generator.
#[derive(Clone, Debug)]
pub struct FrescoData {
    pub generator: ModuleElement,
    /// `a^k - Σ_{j<k} u_j(b) a^j` with `Π x = 0`.
    pub relation: AbElement,
    /// Initial form `P_F` of the relation.
    pub initial_form: HomogeneousElement,
}

/// Annihilator of `x` (or of a generator found by [`fresco_generator`]) in
/// normal form, and its initial form.
pub fn presentation_from_module(e: &AbModule, x: Option<&ModuleElement>) -> Result<FrescoData> {
    if !is_geometric(e)? {
        return Err(Error::NotGeometric("module is not geometric".into()));
    }
    let k = e.rank();
    let gen = match x {
        Some(x) => x.clone(),
        None => fresco_generator(e).ok_or_else(|| Error::NotAFresco("module is not monogenic".into()))?,
    };
    let ys = krylov(e, &gen, k + 1);
    let p = ys.iter().flatten().map(|s| s.precision()).min().unwrap_or(e.precision());
    let c = columns_to_matrix(&ys[..k], p);
    let cinv = c
        .inverse()
        .map_err(|_| Error::NotAFresco("a^j x, j < rank, is not a basis".into()))?;
    let u = cinv.mul_vec(&ys[k]);
    let mut terms = vec![(0usize, k, int(1))];
    for (j, s) in u.iter().enumerate() {
        for (m, cm) in s.coeffs().iter().enumerate() {
            if !cm.is_zero() {
                terms.push((m, j, -cm.clone()));
            }
        }
    }
    let relation = AbElement::from_left_terms(&terms, p);
    if relation.order() != Some(k) {
        return Err(Error::NotAFresco(format!("initial form of {relation} has degree below the rank")));
    }
    let initial_form = HomogeneousElement::from_element(&relation.homogeneous_part(k), k)
        .expect("homogeneous part");
    Ok(FrescoData { generator: gen, relation, initial_form })
}

/// The initial form `P_F`.
pub fn bernstein_element(e: &AbModule) -> Result<HomogeneousElement> {
    Ok(presentation_from_module(e, None)?.initial_form)
}

/// Bernstein polynomial of a fresco, computed from the saturation and from
/// `P_F`; the two must agree.
pub fn fresco_bernstein_polynomial(e: &AbModule) -> Result<Polynomial> {
    let from_residue = bernstein_char_poly(e)?;
    let from_initial = bernstein_element(e)?.bernstein_polynomial()?;
    if from_residue != from_initial {
        return Err(Error::BernsteinMismatch(format!(
            "residue gives {from_residue}, initial form gives {from_initial}"
        )));
    }
    Ok(from_residue)
}

/// Invariants of `0 → G → F → F/G → 0` for a normal submodule `G`.
#[derive(Clone, Debug)]
pub struct ExactSequenceReport {
    pub split: NormalSplit,
    pub p_f: HomogeneousElement,
    pub p_g: HomogeneousElement,
    pub p_h: HomogeneousElement,
    pub b_f: Polynomial,
    pub b_g: Polynomial,
    pub b_h: Polynomial,
    /// `P_F = P_G · P_H`.
    pub initial_forms_multiply: bool,
    /// `B_F(x) = B_G(x - rk H) · B_H(x)`.
    pub bernstein_multiplies: bool,
}

fn invariants_of(m: Option<&AbModule>) -> Result<(HomogeneousElement, Polynomial)> {
    match m {
        None => Ok((HomogeneousElement::new(vec![int(1)]), Polynomial::one())),
        Some(m) => {
            let p = bernstein_element(m)?;
            let b = p.bernstein_polynomial()?;
            Ok((p, b))
        }
    }
}

/// Product of homogeneous elements.
pub fn homogeneous_product(x: &HomogeneousElement, y: &HomogeneousElement) -> HomogeneousElement {
    let k = x.degree() + y.degree();
    let prod = x.to_element(k + 1).mul(&y.to_element(k + 1));
    HomogeneousElement::from_element(&prod, k).expect("product of homogeneous elements")
}

pub fn exact_sequence_check(f: &AbModule, gens: &[ModuleElement]) -> Result<ExactSequenceReport> {
    let split = split_normal(f, gens)?;
    let (p_f, b_f) = invariants_of(Some(f))?;
    let (p_g, b_g) = invariants_of(split.sub.as_ref())?;
    let (p_h, b_h) = invariants_of(split.quotient.as_ref())?;
    let rk_h = split.quotient.as_ref().map_or(0, |q| q.rank());
    let initial_forms_multiply = homogeneous_product(&p_g, &p_h) == p_f;
    let bernstein_multiplies = b_g.shift(&int(-(rk_h as i64))).mul(&b_h) == b_f;
    Ok(ExactSequenceReport { split, p_f, p_g, p_h, b_f, b_g, b_h, initial_forms_multiply, bernstein_multiplies })
}

/// One step `F_{j-1} ⊂ F_j` of a Jordan–Hölder sequence.
#[derive(Clone, Debug)]
pub struct JhStage {
    pub lambda: Rational,
    /// Lift to `F` of the generator of `F_j / F_{j-1}`.
    pub generator: ModuleElement,
    /// Action of `a` on `F_j / F_{j-1}` in the basis given by the generator.
    pub quotient_action: TruncatedSeries,
}

#[derive(Clone, Debug)]
pub struct JhSequence {
    pub stages: Vec<JhStage>,
    /// Basis of `F` adapted to the sequence: columns are the stage generators.
    pub basis: SeriesMatrix,
}

impl JhSequence {
    pub fn lambdas(&self) -> Vec<Rational> {
        self.stages.iter().map(|s| s.lambda.clone()).collect()
    }
}

/// `λ_1..λ_k` of the principal Jordan–Hölder sequence.
pub fn principal_lambdas(f: &AbModule) -> Result<Vec<Rational>> {
    bernstein_element(f)?.factor()
}

/// Builds a Jordan–Hölder sequence with quotients `E_{λ_1}, ..., E_{λ_k}`.
/// With `strict`, a stage admitting more than one choice is an error.
pub fn jh_sequence(f: &AbModule, lambdas: &[Rational], strict: bool) -> Result<JhSequence> {
    let k = f.rank();
    if lambdas.len() != k {
        return Err(Error::InvalidInput(format!("expected {k} eigenvalues, got {}", lambdas.len())));
    }
    let mut gens: Vec<ModuleElement> = Vec::new();
    let mut quotient = f.clone();
    let mut complement: Vec<usize> = (0..k).collect();
    let mut stages = Vec::new();
    let mut last: Option<NormalSplit> = None;
    for (j, lambda) in lambdas.iter().enumerate() {
        let report = rank1_normal_submodules(&quotient)?;
        let cands: Vec<_> = report.generators.iter().filter(|g| &g.lambda == lambda).collect();
        if cands.is_empty() {
            return Err(Error::NotFullySplit(format!(
                "stage {}: no normal rank-one submodule with eigenvalue {lambda}",
                j + 1
            )));
        }
        if strict && cands.len() > 1 {
            return Err(Error::SelectionAmbiguous(format!(
                "stage {}: {} independent choices for eigenvalue {lambda}",
                j + 1,
                cands.len()
            )));
        }
        let w = &cands[0].generator;
        let p = w.iter().map(|s| s.precision()).min().unwrap_or(0);
        log::debug!("J-H stage {}: λ = {lambda}, quotient precision {}, generator precision {p}", j + 1, quotient.precision());
        let mut lift = vec![TruncatedSeries::zero(p); k];
        for (c, &idx) in complement.iter().enumerate() {
            lift[idx] = w[c].clone();
        }
        gens.push(lift.clone());
        let split = split_normal(f, &gens)?;
        let sub = split.sub.as_ref().expect("nonempty submodule");
        stages.push(JhStage { lambda: lambda.clone(), generator: lift, quotient_action: sub.action().entry(j, j) });
        complement = split.complement.clone();
        if let Some(q) = &split.quotient {
            quotient = q.clone();
        }
        last = Some(split);
    }
    let basis = last.expect("rank at least one").basis;
    Ok(JhSequence { stages, basis })
}

/// The principal Jordan–Hölder sequence (`λ_j + j` nondecreasing).
pub fn principal_jh(f: &AbModule) -> Result<JhSequence> {
    let lambdas = principal_lambdas(f)?;
    jh_sequence(f, &lambdas, true)
}

/// Whether some ordering of the Bernstein roots gives a Jordan–Hölder
/// sequence with `λ_j + j` strictly decreasing.
pub fn strictly_decreasing_jh_exists(f: &AbModule) -> Result<bool> {
    let p = bernstein_element(f)?;
    let bp = p.bernstein_polynomial()?;
    let rr = bp.rational_roots();
    if !rr.fully_split {
        return Err(Error::NotFullySplit(bp.to_string()));
    }
    let mut roots = rr.roots;
    roots.sort();
    if roots.windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    // λ_j + j = k - r_j strictly decreasing forces increasing roots
    let lambdas = match p.factor_with_roots(&roots) {
        Ok(l) => l,
        Err(Error::NotFullySplit(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(jh_sequence(f, &lambdas, false).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{e_lambda, f2};
    use crate::scalars::rat;

    #[test]
    fn companion_matrix_matches_sample() {
        let p = FrescoPresentation::from_lambdas(vec![rat(3, 2), rat(1, 2)], 12);
        assert_eq!(module_from_presentation(&p, 12).unwrap(), f2(12));
    }

    #[test]
    fn generator_and_relation() {
        let e = f2(12);
        assert!(is_fresco(&e).unwrap());
        let d = presentation_from_module(&e, None).unwrap();
        assert_eq!(d.generator[0].coeffs(), &[int(1)]);
        assert_eq!(d.relation.to_string(), "a^2 - 2*b*a + 1/4*b^2");
        assert_eq!(d.initial_form, HomogeneousElement::from_lambdas(&[rat(3, 2), rat(1, 2)]));
        // another generator gives the same initial form
        let x = vec![TruncatedSeries::new(vec![int(1), int(1)], 12), TruncatedSeries::new(vec![int(0), int(3)], 12)];
        let d2 = presentation_from_module(&e, Some(&x)).unwrap();
        assert_eq!(d2.initial_form, d.initial_form);
        assert_ne!(d2.relation, d.relation);
    }

    #[test]
    fn non_frescos() {
        let e = e_lambda(&rat(1, 2), 8);
        let s = e.direct_sum(&e);
        assert!(!is_fresco(&s).unwrap());
        assert!(is_fresco(&e).unwrap());
    }

    #[test]
    fn bernstein_two_paths() {
        let e = f2(12);
        let b = fresco_bernstein_polynomial(&e).unwrap();
        assert_eq!(b, Polynomial::from_roots(&[rat(-1, 2), rat(-1, 2)]));
    }

    #[test]
    fn exact_sequence_of_f2() {
        let e = f2(16);
        let r = rank1_normal_submodules(&e).unwrap();
        let rep = exact_sequence_check(&e, &[r.generators[0].generator.clone()]).unwrap();
        assert!(rep.initial_forms_multiply);
        assert!(rep.bernstein_multiplies);
        assert_eq!(rep.p_g, HomogeneousElement::from_lambdas(&[rat(3, 2)]));
        assert_eq!(rep.p_h, HomogeneousElement::from_lambdas(&[rat(1, 2)]));
    }

    #[test]
    fn principal_sequence_of_f2() {
        let e = f2(16);
        let jh = principal_jh(&e).unwrap();
        assert_eq!(jh.lambdas(), vec![rat(3, 2), rat(1, 2)]);
        for s in &jh.stages {
            let expect = TruncatedSeries::monomial(s.lambda.clone(), 1, s.quotient_action.precision());
            assert_eq!(s.quotient_action, expect);
        }
        assert!(!strictly_decreasing_jh_exists(&e).unwrap());
    }

    #[test]
    fn split_product_has_strict_sequence() {
        let p = FrescoPresentation::from_lambdas(vec![rat(5, 2), rat(1, 2)], 16);
        let e = module_from_presentation(&p, 16).unwrap();
        assert_eq!(principal_lambdas(&e).unwrap(), vec![rat(3, 2), rat(3, 2)]);
        assert!(strictly_decreasing_jh_exists(&e).unwrap());
    }
}
