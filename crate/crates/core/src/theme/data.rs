use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fresco::{module_from_presentation, FrescoPresentation};
use crate::module::AbModule;
use crate::scalars::{fmt_rational, int, Rational, TruncatedSeries};

/// `(λ_1; p_1, ..., p_{k-1})` with `λ_{j+1} = λ_j + p_j - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalData {
    lambda1: Rational,
    p: Vec<usize>,
}

impl FundamentalData {
    pub fn new(lambda1: Rational, p: Vec<usize>) -> Result<Self> {
        let k = p.len() + 1;
        if lambda1 <= int(k as i64 - 1) {
            return Err(Error::InvalidInput(format!(
                "λ_1 = {} must exceed k - 1 = {}",
                fmt_rational(&lambda1),
                k - 1
            )));
        }
        Ok(FundamentalData { lambda1, p })
    }

    /// Data of `(a - λ_1 b) ... (a - λ_k b)`; `NotPrimitive` when some
    /// `λ_{j+1} - λ_j + 1` is not a nonnegative integer.
    pub fn from_lambdas(lambdas: &[Rational]) -> Result<Self> {
        let mut p = Vec::new();
        for w in lambdas.windows(2) {
            let d = &w[1] - &w[0] + int(1);
            if !d.is_integer() || d < Rational::zero() {
                return Err(Error::NotPrimitive(format!(
                    "λ_{{j+1}} - λ_j + 1 = {} is not a nonnegative integer",
                    fmt_rational(&d)
                )));
            }
            p.push(crate::scalars::to_i64(&d).unwrap() as usize);
        }
        Self::new(lambdas[0].clone(), p)
    }

    pub fn rank(&self) -> usize {
        self.p.len() + 1
    }

    pub fn lambda1(&self) -> &Rational {
        &self.lambda1
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn lambdas(&self) -> Vec<Rational> {
        let mut out = vec![self.lambda1.clone()];
        for &pj in &self.p {
            let next = out.last().unwrap() + int(pj as i64 - 1);
            out.push(next);
        }
        out
    }

    /// `q_j = p_j + ... + p_{j+h}` for the least `h` with sum `≥ k - j`
    /// (`j` is 1-based).
    pub fn q(&self, j: usize) -> Option<usize> {
        let need = self.rank() - j;
        let mut sum = 0;
        for &pj in &self.p[j - 1..] {
            sum += pj;
            if sum >= need {
                return Some(sum);
            }
        }
        None
    }
}

impl fmt::Display for FundamentalData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.p.iter().map(|p| p.to_string()).collect();
        write!(f, "({}; [{}])", fmt_rational(&self.lambda1), ps.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct DataJson {
    lambda1: String,
    p: Vec<usize>,
}

impl Serialize for FundamentalData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DataJson { lambda1: fmt_rational(&self.lambda1), p: self.p.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FundamentalData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DataJson::deserialize(d)?;
        let l = crate::scalars::parse_rational(&j.lambda1)
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational {}", j.lambda1)))?;
        FundamentalData::new(l, j.p).map_err(serde::de::Error::custom)
    }
}

/// The monomial support of `V_j` and the open condition defining `W_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VwSpace {
    /// 1-based index.
    pub j: usize,
    /// Exponents `i` with `b^i ∈ V_j`, increasing.
    pub support: Vec<usize>,
    pub q: Option<usize>,
    /// `W_j`: `S(0) = 1` and the coefficient of `b^{p_j}` is nonzero.
    pub p_j: usize,
}

impl VwSpace {
    pub fn contains(&self, s: &TruncatedSeries) -> bool {
        s.coeff(0).is_one()
            && !s.coeff(self.p_j).is_zero()
            && s.coeffs().iter().enumerate().all(|(i, c)| c.is_zero() || self.support.contains(&i))
    }

    /// E.g. `1 + α_1 b^2 : α_1 ≠ 0`.
    pub fn describe(&self) -> String {
        let mut s = "1".to_string();
        let mut conds = Vec::new();
        for (n, &i) in self.support.iter().filter(|&&i| i > 0).enumerate() {
            let mon = if i == 1 { "b".to_string() } else { format!("b^{i}") };
            s.push_str(&format!(" + α_{} {mon}", n + 1));
            if i == self.p_j {
                conds.push(format!("α_{} ≠ 0", n + 1));
            }
        }
        if conds.is_empty() {
            s
        } else {
            format!("{s} : {}", conds.join(", "))
        }
    }
}

/// `V_j`, `W_j` for `j = 1, ..., k-1`.
pub fn build_vw(data: &FundamentalData) -> Vec<VwSpace> {
    let k = data.rank();
    (1..k)
        .map(|j| {
            let mut support: Vec<usize> = (0..k - j).collect();
            let q = data.q(j);
            if let Some(q) = q {
                if !support.contains(&q) {
                    support.push(q);
                }
            }
            let p_j = data.p[j - 1];
            assert!(support.contains(&p_j), "b^{{p_j}} lies in V_j");
            VwSpace { j, support, q, p_j }
        })
        .collect()
}

/// Fundamental data with units `S_j ∈ W_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    pub data: FundamentalData,
    pub units: Vec<TruncatedSeries>,
}

impl CanonicalForm {
    pub fn new(data: FundamentalData, units: Vec<TruncatedSeries>) -> Result<Self> {
        if units.len() + 1 != data.rank() {
            return Err(Error::InvalidInput(format!(
                "rank {} needs {} units, got {}",
                data.rank(),
                data.rank() - 1,
                units.len()
            )));
        }
        for (w, s) in build_vw(&data).iter().zip(&units) {
            if !w.contains(s) {
                return Err(Error::InvalidInput(format!("S_{} = {s} is not in W_{} = {{{}}}", w.j, w.j, w.describe())));
            }
        }
        Ok(CanonicalForm { data, units })
    }

    pub fn presentation(&self) -> FrescoPresentation {
        FrescoPresentation::new(self.data.lambdas(), self.units.clone()).expect("valid canonical form")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.presentation())
    }
}

/// `Ã / Ã Π` for the canonical form, modulo `b^precision`.
pub fn theme_from_canonical(cf: &CanonicalForm, precision: usize) -> Result<AbModule> {
    let units: Vec<TruncatedSeries> = cf.units.iter().map(|s| s.exact_to(precision)).collect();
    let p = FrescoPresentation::new(cf.data.lambdas(), units)?;
    module_from_presentation(&p, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn data(l: Rational, p: Vec<usize>) -> FundamentalData {
        FundamentalData::new(l, p).unwrap()
    }

    #[test]
    fn vw_rank_two() {
        let v0 = build_vw(&data(rat(3, 2), vec![0]));
        assert_eq!(v0[0].support, vec![0]);
        assert_eq!(v0[0].describe(), "1");
        let v1 = build_vw(&data(rat(3, 2), vec![1]));
        assert_eq!(v1[0].support, vec![0, 1]);
        assert_eq!(v1[0].q, Some(1));
        assert_eq!(v1[0].describe(), "1 + α_1 b : α_1 ≠ 0");
        let v2 = build_vw(&data(rat(3, 2), vec![2]));
        assert_eq!(v2[0].support, vec![0, 2]);
        assert_eq!(v2[0].describe(), "1 + α_1 b^2 : α_1 ≠ 0");
    }

    #[test]
    fn vw_rank_three() {
        // p = (0, 2): q_1 = 0 + 2 ≥ 2, q_2 = 2 ≥ 1
        let v = build_vw(&data(rat(5, 2), vec![0, 2]));
        assert_eq!(v[0].support, vec![0, 1, 2]);
        assert_eq!(v[1].support, vec![0, 2]);
        // p = (1, 0): tail sums 1 < 2 and 0 < 1
        let v = build_vw(&data(rat(5, 2), vec![1, 0]));
        assert_eq!(v[0].support, vec![0, 1]);
        assert_eq!(v[0].q, None);
        assert_eq!(v[1].support, vec![0]);
    }

    #[test]
    fn lambdas_and_bounds() {
        let d = data(rat(3, 2), vec![1]);
        assert_eq!(d.lambdas(), vec![rat(3, 2), rat(3, 2)]);
        assert!(FundamentalData::new(rat(1, 2), vec![0]).is_err());
        assert_eq!(FundamentalData::from_lambdas(&[rat(3, 2), rat(1, 2)]).unwrap(), data(rat(3, 2), vec![0]));
        assert!(FundamentalData::from_lambdas(&[rat(3, 2), rat(1, 3)]).is_err());
        let j = serde_json::to_string(&d).unwrap();
        assert_eq!(j, r#"{"lambda1":"3/2","p":[1]}"#);
        assert_eq!(serde_json::from_str::<FundamentalData>(&j).unwrap(), d);
    }

    #[test]
    fn canonical_form_validation() {
        let d = data(rat(3, 2), vec![2]);
        let bad = TruncatedSeries::new(vec![int(1), int(1)], 8);
        assert!(CanonicalForm::new(d.clone(), vec![bad]).is_err());
        let good = TruncatedSeries::new(vec![int(1), int(0), int(1)], 8);
        assert!(CanonicalForm::new(d, vec![good]).is_ok());
    }
}
