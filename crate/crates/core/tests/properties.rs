use abmod::algebra::{AbElement, HomogeneousElement};
use abmod::fresco::{module_from_presentation, presentation_from_module, FrescoPresentation};
use abmod::io::{expansion_from_json, expansion_to_json, ElementJson, ModuleJson, PresentationJson, SeriesJson};
use abmod::module::{bernstein_char_poly, change_of_variable, saturate};
use abmod::scalars::{int, rat, Polynomial, Rational, TruncatedSeries};
use abmod::theme::{build_vw, FundamentalData};
use abmod::xi::XiElement;
use num_traits::Zero;
use proptest::prelude::*;

const N: usize = 12;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn series(max_deg: usize, p: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(small_rat(), 1..=max_deg + 1).prop_map(move |c| TruncatedSeries::new(c, p))
}

fn unit(p: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(small_rat(), 0..=2).prop_map(move |mut c| {
        c.insert(0, int(1));
        TruncatedSeries::new(c, p)
    })
}

fn element(p: usize) -> impl Strategy<Value = AbElement> {
    prop::collection::vec((0usize..4, 0usize..3, small_rat()), 1..5).prop_map(move |t| {
        t.into_iter()
            .fold(AbElement::zero(p), |acc, (m, d, c)| acc.add(&AbElement::monomial(c, m, d, p)))
    })
}

/// `λ_j - (k - j) ∈ (0, 2]`.
fn geometric_presentation(max_rank: usize) -> impl Strategy<Value = FrescoPresentation> {
    (1..=max_rank).prop_flat_map(|k| {
        let lambdas = prop::collection::vec((1i64..=6, 1i64..=3), k).prop_map(move |v| {
            v.into_iter()
                .enumerate()
                .map(|(j, (n, d))| int((k - j - 1) as i64) + rat(1 + (n - 1) % (2 * d), d))
                .collect::<Vec<_>>()
        });
        (lambdas, prop::collection::vec(unit(4 * N), k - 1))
            .prop_map(|(l, u)| FrescoPresentation::new(l, u).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_inverse(s in series(6, N), c in 1i64..5) {
        let u = s.add(&TruncatedSeries::constant(int(c), N)).with_precision(N);
        prop_assume!(!u.coeff(0).is_zero());
        let prod = u.mul(&u.invert().unwrap());
        prop_assert_eq!(prod, TruncatedSeries::one(N));
    }

    #[test]
    fn commutation_relation(s in series(10, N)) {
        let a = AbElement::a(N);
        let se = AbElement::from_series(&s);
        let lhs = a.mul(&se).sub(&se.mul(&a));
        prop_assert_eq!(lhs, AbElement::from_series(&s.derivative().shift(2).with_precision(N)));
    }

    #[test]
    fn product_is_associative(x in element(N), y in element(N), z in element(N)) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn right_and_left_forms_agree(x in element(N)) {
        let back = AbElement::from_right_terms(&x.to_right_terms(), N);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn homogeneous_polynomial_round_trip(roots in prop::collection::vec(small_rat(), 1..=5)) {
        let bp = roots.iter().fold(Polynomial::one(), |acc, r| acc.mul(&Polynomial::new(vec![-r.clone(), int(1)])));
        let h = HomogeneousElement::from_bernstein(&bp).unwrap();
        prop_assert_eq!(h.bernstein_polynomial().unwrap(), bp.clone());
        let lambdas = h.factor().unwrap();
        prop_assert_eq!(HomogeneousElement::from_lambdas(&lambdas), h);
    }

    #[test]
    fn presentation_round_trip(p in geometric_presentation(3)) {
        let m = module_from_presentation(&p, N).unwrap();
        let data = presentation_from_module(&m, None).unwrap();
        prop_assert_eq!(data.initial_form, p.bernstein_element());
    }

    #[test]
    fn saturation_has_a_simple_pole(p in geometric_presentation(3)) {
        let m = module_from_presentation(&p, N).unwrap();
        let s = saturate(&m, None);
        prop_assert!(s.is_saturated());
        let sat = s.saturated().unwrap();
        prop_assert!(sat.is_simple_pole());
        prop_assert_eq!(sat.rank(), m.rank());
        // b^δ Ẽ ⊆ E: the basis of Ẽ has poles of order at most δ
        let gap = s.gap as i64;
        prop_assert!(s.basis_matrix().iter().flatten().all(|x| x.is_zero() || x.valuation() >= -gap));
    }

    #[test]
    fn change_of_variable_keeps_bernstein(p in geometric_presentation(2), c2 in small_rat(), c1 in 1i64..4) {
        let m = module_from_presentation(&p, N).unwrap();
        let theta = TruncatedSeries::new(vec![int(0), int(c1), c2], 4 * N);
        let out = change_of_variable(&m, &theta).unwrap();
        prop_assert_eq!(out.rank(), m.rank());
        prop_assert_eq!(bernstein_char_poly(&out).unwrap(), bernstein_char_poly(&m).unwrap());
    }

    #[test]
    fn xi_commutation(terms in prop::collection::vec((0usize..4, 0i64..3, 0usize..3, small_rat()), 1..5)) {
        let lambdas = [rat(1, 2), rat(1, 3), rat(2, 3), int(1)];
        let x = terms.iter().fold(XiElement::zero(1, N), |acc, (l, m, j, c)| {
            acc.add(&XiElement::term(&lambdas[*l], *m, *j, vec![c.clone()], N).unwrap())
        });
        let ab = x.xi_b().xi_a();
        let ba = x.xi_a().xi_b();
        prop_assert_eq!(ab.sub(&ba), x.xi_b().xi_b());
    }

    #[test]
    fn fundamental_data_invariants(n in 1i64..6, d in 1i64..4, p in prop::collection::vec(0usize..4, 0..3)) {
        let k = p.len() + 1;
        let data = FundamentalData::new(int(k as i64 - 1) + rat(n, d), p.clone()).unwrap();
        let l = data.lambdas();
        for j in 0..k - 1 {
            prop_assert_eq!(l[j + 1].clone(), l[j].clone() + int(p[j] as i64 - 1));
        }
        for v in build_vw(&data) {
            prop_assert!(v.support.contains(&0));
            prop_assert!(v.support.contains(&v.p_j));
        }
        let json = serde_json::to_string(&data).unwrap();
        prop_assert_eq!(serde_json::from_str::<FundamentalData>(&json).unwrap(), data);
    }

    #[test]
    fn json_round_trips(s in series(6, N), x in element(N), p in geometric_presentation(3)) {
        let sj = serde_json::to_string(&SeriesJson::from_series(&s)).unwrap();
        prop_assert_eq!(serde_json::from_str::<SeriesJson>(&sj).unwrap().to_series().unwrap(), s);
        let ej = serde_json::to_string(&ElementJson::from_element(&x)).unwrap();
        prop_assert_eq!(serde_json::from_str::<ElementJson>(&ej).unwrap().to_element().unwrap(), x);
        let pj = serde_json::to_string(&PresentationJson::from_presentation(&p)).unwrap();
        let back = serde_json::from_str::<PresentationJson>(&pj).unwrap().to_presentation(4 * N).unwrap();
        prop_assert_eq!(back.lambdas(), p.lambdas());
        let m = module_from_presentation(&p, N).unwrap();
        let mj = serde_json::to_string(&ModuleJson::from_module(&m)).unwrap();
        prop_assert_eq!(serde_json::from_str::<ModuleJson>(&mj).unwrap().to_module().unwrap(), m);
    }

    #[test]
    fn expansion_json_round_trip(terms in prop::collection::vec((0usize..3, 0i64..3, 0usize..3, small_rat()), 1..5)) {
        let lambdas = [rat(1, 2), rat(1, 3), int(1)];
        let x = terms.iter().fold(XiElement::zero(1, N), |acc, (l, m, j, c)| {
            acc.add(&XiElement::term(&lambdas[*l], *m, *j, vec![c.clone()], N).unwrap())
        });
        prop_assert_eq!(expansion_from_json(&expansion_to_json(&x), N).unwrap(), x);
    }
}
