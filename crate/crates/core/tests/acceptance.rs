use std::time::Instant;

use abmod::algebra::{parse_element, AbElement, HomogeneousElement};
use abmod::fresco::{
    exact_sequence_check, module_from_presentation, presentation_from_module, principal_jh, principal_lambdas,
    FrescoPresentation,
};
use abmod::module::{
    bernstein_char_poly, bernstein_polynomial, change_of_variable, is_geometric, residue_matrix, saturate,
    AbModule, SaturationStatus,
};
use abmod::samples::{e_lambda, f2, irregular};
use abmod::scalars::{fmt_rational, int, rat, Matrix, Polynomial, Rational, TruncatedSeries};
use abmod::theme::{
    build_vw, fundamental_data, hom_dimension, is_theme, theme_from_canonical, CanonicalForm, FundamentalData,
};
use abmod::xi::{generate_theme, log_filtration, primitive_filtration, Realization, XiElement};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const N: usize = 16;
const SEED: u64 = 0x5eed_ab01;

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.lines.push((ok, what.into()));
    }

    fn passed(&self) -> bool {
        self.lines.iter().all(|(ok, _)| *ok)
    }
}

fn rand_rat(rng: &mut StdRng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn x_plus(c: Rational) -> Polynomial {
    Polynomial::new(vec![c, int(1)])
}

/// `p(x - s)` by Horner.
fn shift_arg(p: &Polynomial, s: &Rational) -> Polynomial {
    let mut out = Polynomial::zero();
    for c in p.coeffs().iter().rev() {
        out = out.mul(&x_plus(-s.clone())).add(&Polynomial::constant(c.clone()));
    }
    out
}

/// `∏ (x + λ_j + j - k)`.
fn root_formula(lambdas: &[Rational]) -> Polynomial {
    let k = lambdas.len() as i64;
    lambdas
        .iter()
        .enumerate()
        .fold(Polynomial::one(), |acc, (j, l)| acc.mul(&x_plus(l.clone() + int(j as i64 + 1 - k))))
}

/// Degree-k part of `(a - λ_1 b)···(a - λ_k b)` expanded in the algebra.
fn product_of_linear(lambdas: &[Rational], p: usize) -> AbElement {
    lambdas
        .iter()
        .fold(AbElement::one(p), |acc, l| acc.mul(&AbElement::linear(l, p)))
        .homogeneous_part(lambdas.len())
}

/// Geometric presentation of rank `k`: `λ_j - (k - j) ∈ (0, 2]`, units `1 + small b-terms`.
fn random_fresco(rng: &mut StdRng, k: usize) -> FrescoPresentation {
    let lambdas = (1..=k)
        .map(|j| {
            let d = rng.gen_range(1..=3);
            int((k - j) as i64) + rat(rng.gen_range(1..=2 * d), d)
        })
        .collect();
    let units = (1..k)
        .map(|_| {
            let mut c = vec![int(1)];
            c.extend((0..rng.gen_range(0..=3)).map(|_| rand_rat(rng, 3, 2)));
            TruncatedSeries::new(c, N)
        })
        .collect();
    FrescoPresentation::new(lambdas, units).unwrap()
}

fn random_series(rng: &mut StdRng, deg: usize, p: usize) -> TruncatedSeries {
    TruncatedSeries::new((0..=deg).map(|_| rand_rat(rng, 9, 4)).collect(), p)
}

fn c1_commutation(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(SEED);
    let a = AbElement::a(N);
    let mut bad = 0;
    for _ in 0..100 {
        let deg = rng.gen_range(0..=10);
        let s = random_series(&mut rng, deg, N);
        let se = AbElement::from_series(&s);
        let rhs = AbElement::from_series(&s.derivative().shift(2));
        if !a.mul(&se).sub(&se.mul(&a)).sub(&rhs).is_zero() {
            bad += 1;
        }
    }
    r.check(bad == 0, format!("algebra: a·S - S·a - b²S' = 0 for 100 random S, deg ≤ 10 ({bad} nonzero)"));
    let mut bad = 0;
    let lambdas = [rat(1, 2), rat(1, 3), rat(3, 4), int(1), rat(5, 2)];
    for _ in 0..100 {
        let mut x = XiElement::zero(1, N);
        for _ in 0..rng.gen_range(1..=4) {
            let l = &lambdas[rng.gen_range(0..lambdas.len())];
            let t = XiElement::term(l, rng.gen_range(0..4), rng.gen_range(0..3), vec![rand_rat(&mut rng, 9, 4)], N)
                .unwrap();
            x = x.add(&t);
        }
        let lhs = x.xi_b().xi_a().sub(&x.xi_a().xi_b());
        if lhs != x.xi_b().xi_b() {
            bad += 1;
        }
    }
    r.check(bad == 0, format!("xi: (ab - ba)x = b²x for 100 random expansions ({bad} mismatches)"));
}

fn c2_worked_pipeline(r: &mut Report) {
    let pi = parse_element("(a - 3/2 b)*(a - 1/2 b)", N).unwrap();
    r.check(pi.to_string() == "a^2 - 2*b*a + 1/4*b^2", format!("normal form {pi}"));
    let pres = FrescoPresentation::from_lambdas(vec![rat(3, 2), rat(1, 2)], N);
    let m = module_from_presentation(&pres, N).unwrap();
    let s = saturate(&m, None);
    r.check(s.is_saturated() && s.steps == 1, format!("saturation stabilizes in {} step(s)", s.steps));
    let res = residue_matrix(&m).unwrap();
    let expected = Matrix::from_rows(vec![vec![int(0), rat(1, 4)], vec![int(-1), int(-1)]]);
    let rows: Vec<String> = (0..res.rows())
        .map(|i| format!("[{}]", res.row(i).iter().map(fmt_rational).collect::<Vec<_>>().join(", ")))
        .collect();
    r.check(res == expected, format!("residue matrix [{}]", rows.join(", ")));
    let oracle = root_formula(&[rat(3, 2), rat(1, 2)]);
    let b_sat = bernstein_polynomial(&m).unwrap();
    let b_init = pres.bernstein_element().bernstein_polynomial().unwrap();
    r.check(
        b_sat == oracle && b_init == oracle && oracle == x_plus(rat(1, 2)).pow(2),
        format!("B(x) = {} (saturation) = {} (initial form)", b_sat.factored_display(), b_init.factored_display()),
    );
    let jh = principal_lambdas(&m).unwrap();
    let shown: Vec<String> = jh.iter().map(fmt_rational).collect();
    r.check(jh == vec![rat(3, 2), rat(1, 2)], format!("principal J-H λ-sequence ({})", shown.join(", ")));
    r.check(is_geometric(&m).unwrap(), "geometric = true");
}

fn worked_fresco() -> AbModule {
    module_from_presentation(&FrescoPresentation::from_lambdas(vec![rat(3, 2), rat(1, 2)], N), N).unwrap()
}

fn c3_theme_agreement(r: &mut Report) {
    let f = &worked_fresco();
    let x = XiElement::term(&rat(1, 2), 0, 1, vec![int(1)], N).unwrap();
    let real = generate_theme(&x).unwrap();
    r.check(real.rank() == 2, format!("generate_theme(s^(-1/2) Log s) has rank {}", real.rank()));
    let p = HomogeneousElement::from_element(&real.relation.homogeneous_part(2), 2);
    let expected = HomogeneousElement::from_lambdas(&[rat(3, 2), rat(1, 2)]);
    r.check(p.as_ref() == Some(&expected), format!("Bernstein element {}", p.map_or("none".into(), |p| p.to_string())));
    let d = fundamental_data(&real.module).unwrap();
    r.check(d == FundamentalData::new(rat(3, 2), vec![0]).unwrap(), format!("fundamental data {d}"));
    let same_p = presentation_from_module(&real.module, None).unwrap().initial_form
        == presentation_from_module(f, None).unwrap().initial_form;
    let same_jh = principal_lambdas(&real.module).unwrap() == principal_lambdas(f).unwrap();
    r.check(same_p && same_jh, "isomorphic to the worked fresco: same Bernstein element and J-H data");
}

fn c4_exact_sequences(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(SEED + 4);
    let (mut bad, mut prefixes) = (Vec::new(), 0);
    for i in 0..50 {
        let k = rng.gen_range(2..=4);
        let pres = random_fresco(&mut rng, k);
        let m = module_from_presentation(&pres, N).unwrap();
        let seq = match principal_jh(&m) {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("#{i} {pres}: {e}"));
                continue;
            }
        };
        for j in 1..k {
            prefixes += 1;
            let gens: Vec<_> = seq.stages[..j].iter().map(|s| s.generator.clone()).collect();
            let rep = exact_sequence_check(&m, &gens).unwrap();
            let p_ok = rep.p_g.to_element(N).mul(&rep.p_h.to_element(N)) == rep.p_f.to_element(N)
                && rep.p_f == pres.bernstein_element();
            let rk_h = int((k - j) as i64);
            let b_ok = shift_arg(&rep.b_g, &rk_h).mul(&rep.b_h) == rep.b_f && rep.b_f == root_formula(pres.lambdas());
            if !(p_ok && b_ok) {
                bad.push(format!("#{i} {pres} prefix {j}"));
            }
        }
    }
    r.check(
        bad.is_empty(),
        format!("P_F = P_G·P_H and B_F(x) = B_G(x - rk H)·B_H(x) on 50 frescos, {prefixes} prefixes {bad:?}"),
    );
}

fn c5_round_trips(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(SEED + 5);
    let mut bad = Vec::new();
    for i in 0..50 {
        let k = rng.gen_range(1..=4);
        let pres = random_fresco(&mut rng, k);
        let m = module_from_presentation(&pres, N).unwrap();
        let back = presentation_from_module(&m, None).unwrap().initial_form;
        let direct = product_of_linear(pres.lambdas(), N);
        if back != pres.bernstein_element() || back.to_element(N) != direct {
            bad.push(format!("#{i} {pres}"));
        }
    }
    r.check(bad.is_empty(), format!("presentation → module → presentation keeps P_F on 50 presentations {bad:?}"));
    let roots = [int(-2), rat(-3, 2), int(-1), rat(-1, 2), rat(-1, 3), rat(1, 2)];
    let mut count = 0;
    let mut bad = 0;
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(idx) = stack.pop() {
        if !idx.is_empty() {
            count += 1;
            let bp = idx.iter().fold(Polynomial::one(), |acc, &i| acc.mul(&x_plus(-roots[i].clone())));
            let ok = HomogeneousElement::from_bernstein(&bp).and_then(|h| {
                let lambdas = h.factor()?;
                Ok(h.bernstein_polynomial()? == bp && root_formula(&lambdas) == bp)
            });
            if !matches!(ok, Ok(true)) {
                bad += 1;
            }
        }
        if idx.len() < 6 {
            let start = idx.last().copied().unwrap_or(0);
            for i in start..roots.len() {
                let mut next = idx.clone();
                next.push(i);
                stack.push(next);
            }
        }
    }
    r.check(bad == 0, format!("homogeneous ↔ polynomial on all {count} monic B, deg ≤ 6, roots in a fixed set ({bad} failures)"));
}

fn c6_change_of_variable(r: &mut Report, f: &AbModule) {
    // polynomials are exact: give them ample precision
    let z = TruncatedSeries::new(vec![int(0), int(1)], 4 * N);
    let z_z2 = TruncatedSeries::new(vec![int(0), int(1), int(1)], 4 * N);
    let two_z = TruncatedSeries::new(vec![int(0), int(2)], 4 * N);
    r.check(change_of_variable(f, &z).unwrap() == *f, "θ(z) = z is the identity");
    let preserves = |m: &AbModule| {
        let out = change_of_variable(m, &z_z2).unwrap();
        out.rank() == m.rank() && bernstein_char_poly(&out).unwrap() == bernstein_char_poly(m).unwrap()
    };
    r.check(preserves(f), "θ(z) = z + z² keeps rank and B on the worked fresco");
    let mut rng = StdRng::seed_from_u64(SEED + 6);
    let mut bad = 0;
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let m = module_from_presentation(&random_fresco(&mut rng, k), N).unwrap();
        if !preserves(&m) {
            bad += 1;
        }
    }
    r.check(bad == 0, format!("θ(z) = z + z² keeps rank and B on 20 random geometric frescos ({bad} failures)"));
    let composed = two_z.compose(&z_z2);
    let lhs = change_of_variable(&change_of_variable(f, &z_z2).unwrap(), &two_z).unwrap();
    let rhs = change_of_variable(f, &composed).unwrap();
    let p = lhs.precision().min(rhs.precision());
    r.check(
        lhs.with_precision(p) == rhs.with_precision(p),
        format!("cv(2z)∘cv(z + z²) = cv(2z + 2z²) on the worked fresco, modulo b^{p}"),
    );
}

fn c7_themes(r: &mut Report, f: &AbModule) {
    let t = is_theme(f).unwrap();
    r.check(
        t.is_theme && t.rank_one.unique && t.class == Some(rat(1, 2)),
        format!("worked fresco is a theme with a unique normal rank-1 submodule, class {}", t.class.as_ref().map_or("none".into(), fmt_rational)),
    );
    let e = e_lambda(&rat(1, 2), N);
    let t = is_theme(&e.direct_sum(&e)).unwrap();
    r.check(!t.is_theme, "E_{1/2} ⊕ E_{1/2} is not a theme");
    let h = hom_dimension(&e, &e).unwrap();
    r.check(h.dimension == 1 && h.stabilized, format!("dim Hom(E_λ, E_λ) = {} (stabilized: {})", h.dimension, h.stabilized));
    let h = hom_dimension(&f2(N), &f2(N)).unwrap();
    r.check(
        h.dimension == 2 && h.stabilized,
        format!("dim Hom(F₂, F₂) = {} (expected 2, stabilized: {})", h.dimension, h.stabilized),
    );
}

fn c8_canonical(r: &mut Report) {
    let supports: Vec<Vec<usize>> = (0..=2)
        .map(|p1| build_vw(&FundamentalData::new(rat(3, 2), vec![p1]).unwrap())[0].support.clone())
        .collect();
    r.check(
        supports == vec![vec![0], vec![0, 1], vec![0, 2]],
        format!("V₁ supports for p₁ = 0, 1, 2: {supports:?}"),
    );
    let w = build_vw(&FundamentalData::new(rat(3, 2), vec![2]).unwrap());
    let s = |c: Vec<Rational>| TruncatedSeries::new(c, N);
    let w_ok = w[0].contains(&s(vec![int(1), int(0), int(3)]))
        && !w[0].contains(&s(vec![int(1)]))
        && !w[0].contains(&s(vec![int(1), int(1), int(1)]))
        && build_vw(&FundamentalData::new(rat(3, 2), vec![0]).unwrap())[0].contains(&s(vec![int(1)]))
        && !build_vw(&FundamentalData::new(rat(3, 2), vec![1]).unwrap())[0].contains(&s(vec![int(1)]));
    r.check(w_ok, "W₁ membership: 1 only for p₁ = 0, 1 + αb with α ≠ 0 for p₁ = 1, 1 + αb² with α ≠ 0 for p₁ = 2");
    let mut rng = StdRng::seed_from_u64(SEED + 8);
    let mut bad = Vec::new();
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let lambda1 = int(k as i64 - 1) + rat(rng.gen_range(1..=4), rng.gen_range(2..=3));
        let p: Vec<usize> = (1..k).map(|_| rng.gen_range(0..=2)).collect();
        let data = FundamentalData::new(lambda1, p).unwrap();
        let units: Vec<TruncatedSeries> = build_vw(&data)
            .iter()
            .map(|v| {
                let mut c = vec![int(0); v.support.iter().max().unwrap() + 1];
                for &i in &v.support {
                    c[i] = if i == 0 { int(1) } else { rat(rng.gen_range(1..=3), rng.gen_range(1..=2)) };
                }
                TruncatedSeries::new(c, N)
            })
            .collect();
        let cf = CanonicalForm::new(data.clone(), units).unwrap();
        let ok = theme_from_canonical(&cf, N)
            .and_then(|m| Ok(is_theme(&m)?.is_theme && fundamental_data(&m)? == data));
        if !matches!(ok, Ok(true)) {
            bad.push(format!("{cf}: {ok:?}"));
        }
    }
    r.check(bad.is_empty(), format!("20 sampled canonical forms, k ≤ 3: is_theme and fundamental data round trip {bad:?}"));
}

fn c9_irregular(r: &mut Report) {
    let s = saturate(&irregular(N), None);
    let decreasing = s.valuations.windows(2).all(|w| w[1] < w[0]);
    r.check(
        matches!(s.status, SaturationStatus::NotStabilized(_)) && decreasing && s.valuations.len() >= 5,
        format!("a e₁ = e₂, a e₂ = e₁: {:?}, valuations {:?}", s.status, s.valuations),
    );
}

/// Coordinates in `Ξ ⊗ V` of `Σ_j g_j(b) a^j x`.
fn image(real: &Realization, g: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    let n = real.space.rank();
    (0..n)
        .map(|row| {
            g.iter()
                .zip(&real.images)
                .map(|(gj, img)| gj.mul(&img[row]))
                .reduce(|a, b| a.add(&b))
                .unwrap()
        })
        .collect()
}

fn c10_filtrations(r: &mut Report, real: &Realization) {
    let ranks: Vec<usize> = log_filtration(real).iter().map(|p| p.rank).collect();
    let first = &log_filtration(real)[0];
    let log_free = first.generators.iter().all(|g| {
        let y = image(real, g);
        real.space.log_rows_above(0).iter().all(|&i| y[i].with_precision(first.precision).is_zero())
    });
    r.check(ranks == vec![1, 2] && log_free, format!("ss filtration ranks {ranks:?}, rank-1 stage log-free: {log_free}"));
    let x = XiElement::term(&rat(1, 2), 0, 0, vec![int(1)], N)
        .unwrap()
        .add(&XiElement::term(&rat(2, 3), 0, 0, vec![int(1)], N).unwrap());
    let mixed = generate_theme(&x).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for class in [rat(1, 2), rat(2, 3)] {
        let piece = primitive_filtration(&mixed, &[class.clone()]);
        let outside = mixed.space.rows_outside_classes(&[class.clone()]);
        let pure = piece.generators.iter().all(|g| {
            let y = image(&mixed, g);
            outside.iter().all(|&i| y[i].with_precision(piece.precision).is_zero())
                && (0..y.len()).any(|i| !outside.contains(&i) && !y[i].is_zero())
        });
        ok &= piece.rank == 1 && pure;
        detail.push(format!("{class}: rank {}", piece.rank));
    }
    r.check(ok, format!("s^(-1/2) + s^(-1/3): primitive parts separate the classes ({})", detail.join(", ")));
}

fn main() {
    let criteria: Vec<(&str, fn(&mut Report))> = vec![
        ("commutation", c1_commutation),
        ("worked rank-2 pipeline", c2_worked_pipeline),
        ("three-way theme agreement", c3_theme_agreement),
        ("exact-sequence law", c4_exact_sequences),
        ("round trips", c5_round_trips),
        ("change of variable", |r| c6_change_of_variable(r, &worked_fresco())),
        ("theme detection and invariance", |r| c7_themes(r, &worked_fresco())),
        ("V_j/W_j and canonical forms", c8_canonical),
        ("irregularity detection", c9_irregular),
        ("filtrations", |r| {
            let x = XiElement::term(&rat(1, 2), 0, 1, vec![int(1)], N).unwrap();
            c10_filtrations(r, &generate_theme(&x).unwrap())
        }),
    ];
    println!("acceptance: precision N = {N}, seed {SEED:#x}, exact comparisons (tolerance 0), time limit 60 s each");
    let mut all = true;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let mut r = Report { lines: Vec::new() };
        let t = Instant::now();
        run(&mut r);
        let secs = t.elapsed().as_secs_f64();
        let ok = r.passed() && secs < 60.0;
        all &= ok;
        println!("{} criterion {:>2}: {name} ({secs:.1} s)", if ok { "PASS" } else { "FAIL" }, i + 1);
        for (ok, what) in &r.lines {
            println!("    {} {what}", if *ok { "ok  " } else { "FAIL" });
        }
    }
    if !all {
        std::process::exit(1);
    }
}
