use num_traits::Zero;

use crate::module::ModuleElement;
use crate::scalars::{int, Matrix, Rational, SubspaceBasis, TruncatedSeries};

/// Matrix of `u ↦ Σ_j u_j(b) y_j` restricted to `rows`, on coefficients
/// `u_{j,t}` (column `j*p + t`) to coefficients `(t, row)` modulo `b^p`.
fn combination_matrix(cols: &[ModuleElement], rows: &[usize], p: usize) -> Matrix {
    let nr = rows.len();
    let mut m = Matrix::zeros(nr * p, cols.len() * p);
    for (j, y) in cols.iter().enumerate() {
        for (ri, &d) in rows.iter().enumerate() {
            for (t2, c) in y[d].coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for t1 in 0..p.saturating_sub(t2) {
                    m.set((t1 + t2) * nr + ri, j * p + t1, c.clone());
                }
            }
        }
    }
    m
}

fn to_series(u: &[Rational], n: usize, p: usize, keep: usize) -> Vec<TruncatedSeries> {
    (0..n).map(|j| TruncatedSeries::new(u[j * p..j * p + keep].to_vec(), keep)).collect()
}

/// Solves `Σ_j u_j(b) y_j = z` modulo `b^p`. Returns the solution and the
/// precision up to which it is determined.
pub(crate) fn solve_combination(
    cols: &[ModuleElement],
    z: &[TruncatedSeries],
    p: usize,
) -> Option<(Vec<TruncatedSeries>, usize)> {
    let rows: Vec<usize> = (0..z.len()).collect();
    let m = combination_matrix(cols, &rows, p);
    let mut rhs = vec![Rational::zero(); rows.len() * p];
    for (d, s) in z.iter().enumerate() {
        for t in 0..p {
            rhs[t * rows.len() + d] = s.coeff(t);
        }
    }
    let u = m.solve(&rhs)?;
    let det = m
        .kernel()
        .iter()
        .filter_map(|k| (0..cols.len()).flat_map(|j| (0..p).map(move |t| (j, t))).filter(|&(j, t)| !k[j * p + t].is_zero()).map(|(_, t)| t).min())
        .min()
        .unwrap_or(p);
    Some((to_series(&u, cols.len(), p, det), det))
}

/// Normal submodule `{u : Σ_j u_j(b) y_j[d] = 0 for d ∈ rows}` of `C[[b]]^n`:
/// generators with independent constant terms, and their precision.
pub(crate) fn kernel_submodule(cols: &[ModuleElement], rows: &[usize], p: usize) -> (Vec<ModuleElement>, usize) {
    let n = cols.len();
    if rows.is_empty() {
        let gens = (0..n)
            .map(|j| (0..n).map(|i| TruncatedSeries::constant(if i == j { int(1) } else { int(0) }, p)).collect())
            .collect();
        return (gens, p);
    }
    let m = combination_matrix(cols, rows, p);
    let ker = m.kernel();
    // elementary divisors: rank mod b^p = ρ p - Σ e_i
    let mut consts = SubspaceBasis::new(n);
    let mut chosen: Vec<&Vec<Rational>> = Vec::new();
    let (rref, _) = if ker.is_empty() {
        (Matrix::zeros(0, 0), Vec::new())
    } else {
        Matrix::from_rows(ker.clone()).rref()
    };
    let reduced: Vec<Vec<Rational>> = (0..rref.rows()).map(|r| rref.row(r).to_vec()).collect();
    for k in reduced.iter().chain(ker.iter()) {
        let c: Vec<Rational> = (0..n).map(|j| k[j * p].clone()).collect();
        if consts.insert(&c) {
            chosen.push(k);
        }
    }
    let r = chosen.len();
    let rho = n - r;
    let sum_e = (rho * p).saturating_sub(m.rank());
    let prec = p.saturating_sub(sum_e).max(1);
    (chosen.iter().map(|k| to_series(k, n, p, prec)).collect(), prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn s(c: &[Rational], p: usize) -> TruncatedSeries {
        TruncatedSeries::new(c.to_vec(), p)
    }

    #[test]
    fn combination_solve() {
        // y0 = (1, 0), y1 = (b/2, b); z = (b^2, b)
        let p = 6;
        let y0 = vec![s(&[int(1)], p), s(&[], p)];
        let y1 = vec![s(&[int(0), rat(1, 2)], p), s(&[int(0), int(1)], p)];
        let z = vec![s(&[int(0), int(0), int(1)], p), s(&[int(0), int(1)], p)];
        let (u, det) = solve_combination(&[y0, y1], &z, p).unwrap();
        assert_eq!(det, p - 1);
        assert_eq!(u[1].coeffs(), &[int(1)]);
        assert_eq!(u[0].coeffs(), &[int(0), rat(-1, 2), int(1)]);
    }

    #[test]
    fn kernel_of_first_row() {
        let p = 6;
        let y0 = vec![s(&[int(1)], p), s(&[], p)];
        let y1 = vec![s(&[int(0), rat(1, 2)], p), s(&[int(0), int(1)], p)];
        let (g, prec) = kernel_submodule(&[y0, y1], &[0], p);
        assert_eq!(g.len(), 1);
        assert_eq!(prec, p);
        // u0 + b/2 u1 = 0
        let u0 = &g[0][0];
        let u1 = &g[0][1];
        assert_eq!(u0.add(&u1.shift(1).scale(&rat(1, 2))).with_precision(prec).is_zero(), true);
        assert!(!u1.coeff(0).is_zero());
    }
}
