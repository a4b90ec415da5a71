use num_traits::Zero;

use super::element::XiElement;
use super::linear::{kernel_submodule, solve_combination};
use super::space::XiSpace;
use crate::algebra::AbElement;
use crate::error::{Error, Result};
use crate::fresco::{module_from_element, presentation_from_module};
use crate::module::{AbModule, ModuleElement};
use crate::scalars::{int, to_i64, unit_interval_class, Rational, TruncatedSeries};

/// The theme `Ã x ⊂ Ξ ⊗ V` generated by an expansion `x`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub space: XiSpace,
    pub element: XiElement,
    /// `a^k - Σ u_j(b) a^j`, the annihilator of `x` in normal form.
    pub relation: AbElement,
    /// The module on the basis `x, a x, ..., a^{k-1} x`.
    pub module: AbModule,
    /// Coordinates of `a^j x` in `Ξ ⊗ V`, `j < k`.
    pub images: Vec<ModuleElement>,
}

impl Realization {
    pub fn rank(&self) -> usize {
        self.images.len()
    }
}

/// Rank of `Ã x` and the relation `a^k x = Σ u_j(b) a^j x`.
pub fn generate_theme(x: &XiElement) -> Result<Realization> {
    let space = XiSpace::of_element(x)?;
    generate_in(&space, x)
}

pub(crate) fn generate_in(space: &XiSpace, x: &XiElement) -> Result<Realization> {
    let p = x.shift_precision();
    let y0 = space.to_coords(x)?;
    if y0.iter().all(|s| s.is_zero()) {
        return Err(Error::RankNotStabilized("the expansion vanishes modulo the window".into()));
    }
    let xi = space.module(p);
    let mut ys = vec![y0];
    loop {
        let i = ys.len();
        let next = xi.apply_a(ys.last().unwrap());
        if next.iter().all(|s| s.is_zero()) {
            return Err(Error::RankNotStabilized(format!(
                "a^{i} x vanishes modulo b^{p}; enlarge the shift precision"
            )));
        }
        if let Some((u, det)) = solve_combination(&ys, &next, p) {
            let mut terms = vec![(0usize, i, int(1))];
            for (j, s) in u.iter().enumerate() {
                for (m, c) in s.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        terms.push((m, j, -c.clone()));
                    }
                }
            }
            let relation = AbElement::from_left_terms(&terms, det);
            let module = module_from_element(&relation)?;
            return Ok(Realization { space: space.clone(), element: x.clone(), relation, module, images: ys });
        }
        if i >= space.rank() {
            return Err(Error::RankNotStabilized(format!(
                "no relation among a^j x, j ≤ {i}, modulo b^{p}"
            )));
        }
        ys.push(next);
    }
}

/// Expansions `x ∈ Ξ ⊗ C` (modulo `b^window`) with `Π x = 0`, as a basis.
pub fn solve_in_xi(pi: &AbElement, space: &XiSpace, window: usize) -> Result<Vec<XiElement>> {
    let k = pi.a_degree().unwrap_or(0);
    let out_p = window + k;
    if pi.precision() < out_p {
        return Err(Error::PrecisionTooLow(format!(
            "relation known modulo b^{}, need b^{out_p}",
            pi.precision()
        )));
    }
    let n = space.rank();
    let xi = space.module(out_p);
    // columns: images of b^t e_d, t < window
    let mut sys = crate::scalars::Matrix::zeros(n * out_p, n * window);
    for d in 0..n {
        for t in 0..window {
            let start: ModuleElement = xi.basis_element(d).iter().map(|s| s.shift(t).with_precision(out_p)).collect();
            let mut pows = vec![start];
            for _ in 0..k {
                let nx = xi.apply_a(pows.last().unwrap());
                pows.push(nx);
            }
            let mut col = vec![TruncatedSeries::zero(out_p); n];
            for (&(m, deg), c) in pi.terms() {
                for (acc, s) in col.iter_mut().zip(&pows[deg]) {
                    *acc = acc.add(&s.shift(m).with_precision(out_p).scale(c));
                }
            }
            for (r, s) in col.iter().enumerate() {
                for (tt, c) in s.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        sys.set(tt * n + r, d * window + t, c.clone());
                    }
                }
            }
        }
    }
    Ok(sys
        .kernel()
        .iter()
        .map(|v| {
            let coords: Vec<TruncatedSeries> =
                (0..n).map(|d| TruncatedSeries::new(v[d * window..(d + 1) * window].to_vec(), window)).collect();
            space.from_coords(&coords)
        })
        .collect())
}

/// Window beyond the resonances of a fresco with the given principal `λ`.
fn resonance_window(lambdas: &[Rational]) -> usize {
    let top = lambdas.iter().map(|l| to_i64(&l.ceil()).unwrap_or(0)).max().unwrap_or(0);
    (top.max(0) as usize) + lambdas.len() + 2
}

/// Stacks a basis of solutions into one vector-valued expansion.
fn stack(sols: &[XiElement], window: usize) -> XiElement {
    let r = sols.len();
    let mut x = XiElement::zero(r, window);
    for (i, s) in sols.iter().enumerate() {
        for ((l, j, m), c) in s.terms() {
            let mut v = vec![Rational::zero(); r];
            v[i] = c[0].clone();
            x.add_term(l.clone(), *j, *m, v);
        }
    }
    x
}

/// A realization of the fresco `F` inside `Ξ^{n_log}_Λ ⊗ V`, if one exists,
/// where `Λ` holds the classes of its exponents.
pub fn realize_fresco(f: &AbModule, n_log: usize) -> Result<Option<Realization>> {
    let data = presentation_from_module(f, None)?;
    let lambdas = data.initial_form.factor()?;
    let k = f.rank();
    let window = resonance_window(&lambdas);
    if data.relation.precision() < window + k {
        return Err(Error::PrecisionTooLow(format!(
            "fresco known modulo b^{}, need b^{}",
            data.relation.precision(),
            window + k
        )));
    }
    let classes: Vec<Rational> = lambdas.iter().map(unit_interval_class).collect();
    let space1 = XiSpace::new(&classes, n_log, 1)?;
    let sols = solve_in_xi(&data.relation.with_precision(window + k), &space1, window)?;
    if sols.len() < k {
        return Ok(None);
    }
    let x = stack(&sols, window);
    let space = XiSpace::new(&classes, n_log, sols.len())?;
    let r = generate_in(&space, &x)?;
    Ok(if r.rank() == k { Some(r) } else { None })
}

/// Smallest log level admitting a realization.
pub fn minimal_log_level(f: &AbModule) -> Result<usize> {
    for n in 0..f.rank() {
        if realize_fresco(f, n)?.is_some() {
            return Ok(n);
        }
    }
    Err(Error::NotMinimalEmbedding("no realization with log level below the rank".into()))
}

/// A fresco is semisimple when it embeds into the log-free part of `Ξ ⊗ V`.
pub fn is_semisimple(f: &AbModule) -> Result<bool> {
    Ok(realize_fresco(f, 0)?.is_some())
}

/// A normal submodule of a realized theme, in the basis `a^j x`.
#[derive(Clone, Debug)]
pub struct FiltrationPiece {
    pub index: usize,
    pub rank: usize,
    pub generators: Vec<ModuleElement>,
    pub precision: usize,
}

fn piece(r: &Realization, index: usize, rows: &[usize]) -> FiltrationPiece {
    let p = r.images.iter().flatten().map(|s| s.precision()).min().unwrap_or(0);
    let (generators, precision) = kernel_submodule(&r.images, rows, p);
    FiltrationPiece { index, rank: generators.len(), generators, precision }
}

/// `S_j = F ∩ Ξ^{j-1}`, `j = 1, ..., N+1`.
pub fn log_filtration(r: &Realization) -> Vec<FiltrationPiece> {
    (1..=r.space.n_log() + 1).map(|j| piece(r, j, &r.space.log_rows_above(j - 1))).collect()
}

/// `Σ_j = F ∩ Ξ^{N-j}`, `j = 0, ..., N`, for a realization of minimal log level `N`.
pub fn co_semisimple_filtration(r: &Realization) -> Result<Vec<FiltrationPiece>> {
    let n = r.element.log_degree().unwrap_or(0);
    let min = minimal_log_level(&r.module)?;
    if n > min {
        return Err(Error::NotMinimalEmbedding(format!(
            "realization has log level {n}, the minimum is {min}"
        )));
    }
    Ok((0..=n).map(|j| piece(r, j, &r.space.log_rows_above(n - j))).collect())
}

/// `F ∩ (Ξ_{[Λ']} ⊗ V)`.
pub fn primitive_filtration(r: &Realization, classes: &[Rational]) -> FiltrationPiece {
    piece(r, 0, &r.space.rows_outside_classes(classes))
}

/// Whether the realized lattice is stable under the unipotent monodromy.
pub fn realization_is_invariant(r: &Realization) -> bool {
    let p = r.images.iter().flatten().map(|s| s.precision()).min().unwrap_or(0);
    // U x = Σ_d τ^d N^d x / d!, with τ transcendental: each part must lie in F
    (1..=r.space.n_log()).all(|d| {
        let z = r.space.monodromy_part(&r.images[0], d);
        let z: Vec<TruncatedSeries> = z.iter().map(|s| s.with_precision(p)).collect();
        z.iter().all(|s| s.is_zero()) || solve_combination(&r.images, &z, p).is_some()
    })
}
