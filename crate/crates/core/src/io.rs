//! JSON file formats. Rationals are strings `"p/q"`; series are
//! `{"terms": [[exponent, "p/q"], ...], "precision": N}`.

use serde::{Deserialize, Serialize};

use crate::algebra::AbElement;
use crate::error::{Error, Result};
use crate::fresco::FrescoPresentation;
use crate::module::AbModule;
use crate::scalars::{fmt_rational, parse_rational, Rational, SeriesMatrix, TruncatedSeries};
use crate::theme::{CanonicalForm, FundamentalData};
use crate::xi::XiElement;

fn rational(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::InvalidInput(format!("not a rational number: {s:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub terms: Vec<(usize, String)>,
    pub precision: usize,
}

impl SeriesJson {
    pub fn from_series(s: &TruncatedSeries) -> Self {
        let terms = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(e, c)| (e, fmt_rational(c)))
            .collect();
        SeriesJson { terms, precision: s.precision() }
    }

    pub fn to_series(&self) -> Result<TruncatedSeries> {
        let terms: Vec<(usize, Rational)> =
            self.terms.iter().map(|(e, c)| Ok((*e, rational(c)?))).collect::<Result<_>>()?;
        Ok(TruncatedSeries::from_terms(&terms, self.precision))
    }
}

/// `{rank, precision, matrix}` with `matrix[i][j]` the coefficient of `e_i` in `a e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub rank: usize,
    pub precision: usize,
    pub matrix: Vec<Vec<SeriesJson>>,
}

impl ModuleJson {
    pub fn from_module(m: &AbModule) -> Self {
        let matrix = m
            .action()
            .entries()
            .iter()
            .map(|row| row.iter().map(SeriesJson::from_series).collect())
            .collect();
        ModuleJson { rank: m.rank(), precision: m.precision(), matrix }
    }

    pub fn to_module(&self) -> Result<AbModule> {
        if self.matrix.len() != self.rank || self.matrix.iter().any(|r| r.len() != self.rank) {
            return Err(Error::InvalidInput(format!("matrix must be {0} x {0}", self.rank)));
        }
        let entries: Vec<Vec<TruncatedSeries>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| Ok(s.to_series()?.exact_to(self.precision))).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let m = SeriesMatrix::from_entries(&entries);
        AbModule::new(m.with_precision(self.precision))
    }
}

/// `{terms: [[m, d, "p/q"], ...], precision}` for `Σ c b^m a^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub terms: Vec<(usize, usize, String)>,
    pub precision: usize,
}

impl ElementJson {
    pub fn from_element(x: &AbElement) -> Self {
        ElementJson { terms: x.to_triples(), precision: x.precision() }
    }

    pub fn to_element(&self) -> Result<AbElement> {
        let t: Vec<(usize, usize, Rational)> =
            self.terms.iter().map(|(m, d, c)| Ok((*m, *d, rational(c)?))).collect::<Result<_>>()?;
        Ok(AbElement::from_left_terms(&t, self.precision))
    }
}

/// One factor of a presentation: `(a - λ b)` or `inv(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorJson {
    Linear { lambda: String },
    Inverse { inv: SeriesJson },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub factors: Vec<FactorJson>,
}

impl PresentationJson {
    pub fn from_presentation(p: &FrescoPresentation) -> Self {
        let mut factors = vec![FactorJson::Linear { lambda: fmt_rational(&p.lambdas()[0]) }];
        for (l, s) in p.lambdas()[1..].iter().zip(p.units()) {
            factors.push(FactorJson::Inverse { inv: SeriesJson::from_series(s) });
            factors.push(FactorJson::Linear { lambda: fmt_rational(l) });
        }
        PresentationJson { factors }
    }

    /// Linear factors alternate with units; a missing unit between two
    /// linear factors is `1`.
    pub fn to_presentation(&self, precision: usize) -> Result<FrescoPresentation> {
        let mut lambdas = Vec::new();
        let mut units = Vec::new();
        let mut pending: Option<TruncatedSeries> = None;
        for f in &self.factors {
            match f {
                FactorJson::Linear { lambda } => {
                    if !lambdas.is_empty() {
                        units.push(pending.take().unwrap_or_else(|| TruncatedSeries::one(precision)));
                    } else if pending.is_some() {
                        return Err(Error::InvalidInput("presentation cannot start with a unit".into()));
                    }
                    lambdas.push(rational(lambda)?);
                }
                FactorJson::Inverse { inv } => {
                    if pending.is_some() {
                        return Err(Error::InvalidInput("two units in a row".into()));
                    }
                    pending = Some(inv.to_series()?);
                }
            }
        }
        if pending.is_some() {
            return Err(Error::InvalidInput("presentation cannot end with a unit".into()));
        }
        FrescoPresentation::new(lambdas, units)
    }
}

/// `{lambda, m, j, coeff}` for `coeff · s^{λ+m-1} (Log s)^j / j!`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub lambda: String,
    pub m: i64,
    pub j: usize,
    pub coeff: Vec<String>,
}

/// Expansion file: an array of terms.
pub fn expansion_from_json(terms: &[TermJson], shift_precision: usize) -> Result<XiElement> {
    let dim = terms.first().map_or(1, |t| t.coeff.len());
    let mut x = XiElement::zero(dim, shift_precision);
    for t in terms {
        if t.coeff.len() != dim {
            return Err(Error::InvalidInput("coefficient vectors have different lengths".into()));
        }
        let coeff: Vec<Rational> = t
            .coeff
            .iter()
            .map(|c| {
                if c.contains('τ') || c.contains("tau") {
                    Err(Error::InvalidInput(format!("coefficient {c:?}: input expansions take rational coefficients")))
                } else {
                    rational(c)
                }
            })
            .collect::<Result<_>>()?;
        let l = rational(&t.lambda)?;
        let term = match XiElement::term(&l, t.m, t.j, coeff.clone(), shift_precision) {
            Ok(term) => term,
            Err(e) if l.is_integer() && num_traits::Zero::is_zero(&l) => {
                log::warn!("λ = 0 read as λ = 1 ({e})");
                XiElement::term(&Rational::from_integer(1.into()), t.m, t.j, coeff, shift_precision)?
            }
            Err(e) => return Err(e),
        };
        x = x.add(&term);
    }
    Ok(x)
}

pub fn expansion_to_json(x: &XiElement) -> Vec<TermJson> {
    x.terms()
        .map(|((l, j, m), c)| TermJson {
            lambda: fmt_rational(l),
            m: *m as i64,
            j: *j,
            coeff: c.iter().map(fmt_rational).collect(),
        })
        .collect()
}

/// `{lambda1, p, units}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalFormJson {
    pub lambda1: String,
    pub p: Vec<usize>,
    pub units: Vec<SeriesJson>,
}

impl CanonicalFormJson {
    pub fn from_form(cf: &CanonicalForm) -> Self {
        CanonicalFormJson {
            lambda1: fmt_rational(cf.data.lambda1()),
            p: cf.data.p().to_vec(),
            units: cf.units.iter().map(SeriesJson::from_series).collect(),
        }
    }

    pub fn to_form(&self) -> Result<CanonicalForm> {
        let data = FundamentalData::new(rational(&self.lambda1)?, self.p.clone())?;
        CanonicalForm::new(data, self.units.iter().map(|s| s.to_series()).collect::<Result<_>>()?)
    }
}

/// Contents of an input file, recognized by shape.
#[derive(Clone, Debug)]
pub enum InputFile {
    Module(AbModule),
    Presentation(FrescoPresentation),
    Element(AbElement),
    Expansion(Vec<TermJson>),
    Canonical(CanonicalForm),
}

/// Reads JSON (module, presentation, element, expansion, canonical form) or
/// presentation text.
pub fn read_input(text: &str, precision: usize) -> Result<InputFile> {
    let trimmed = text.trim_start();
    if !(trimmed.starts_with('{') || trimmed.starts_with('[')) {
        return match crate::algebra::parse(text.trim(), precision)? {
            crate::algebra::Parsed::Presentation(p) => Ok(InputFile::Presentation(p)),
            crate::algebra::Parsed::Element(e) => Ok(InputFile::Element(e)),
        };
    }
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("JSON: {e}")))?;
    let bad = |e: serde_json::Error| Error::InvalidInput(format!("JSON: {e}"));
    if v.is_array() {
        return Ok(InputFile::Expansion(serde_json::from_value(v).map_err(bad)?));
    }
    if v.get("matrix").is_some() {
        let m: ModuleJson = serde_json::from_value(v).map_err(bad)?;
        return Ok(InputFile::Module(m.to_module()?));
    }
    if v.get("factors").is_some() {
        let p: PresentationJson = serde_json::from_value(v).map_err(bad)?;
        return Ok(InputFile::Presentation(p.to_presentation(precision)?));
    }
    if v.get("lambda1").is_some() {
        let c: CanonicalFormJson = serde_json::from_value(v).map_err(bad)?;
        return Ok(InputFile::Canonical(c.to_form()?));
    }
    if v.get("terms").is_some() {
        let e: ElementJson = serde_json::from_value(v).map_err(bad)?;
        return Ok(InputFile::Element(e.to_element()?));
    }
    Err(Error::InvalidInput("unrecognized input file".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::f2;
    use crate::scalars::{int, rat};

    #[test]
    fn series_format() {
        let s = TruncatedSeries::new(vec![int(1), int(0), rat(-1, 2)], 5);
        let j = serde_json::to_string(&SeriesJson::from_series(&s)).unwrap();
        assert_eq!(j, r#"{"terms":[[0,"1"],[2,"-1/2"]],"precision":5}"#);
        let back: SeriesJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_series().unwrap(), s);
    }

    #[test]
    fn module_round_trip() {
        let m = f2(10);
        let j = serde_json::to_string(&ModuleJson::from_module(&m)).unwrap();
        match read_input(&j, 10).unwrap() {
            InputFile::Module(m2) => assert_eq!(m2, m),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn presentation_round_trip() {
        let p = FrescoPresentation::new(
            vec![rat(5, 2), rat(1, 2)],
            vec![TruncatedSeries::new(vec![int(1), int(0), int(1)], 12)],
        )
        .unwrap();
        let j = serde_json::to_string(&PresentationJson::from_presentation(&p)).unwrap();
        match read_input(&j, 12).unwrap() {
            InputFile::Presentation(p2) => assert_eq!(p2, p),
            other => panic!("{other:?}"),
        }
        match read_input("(a - 3/2 b)*(a - 1/2 b)", 12).unwrap() {
            InputFile::Presentation(p3) => assert_eq!(p3.lambdas(), &[rat(3, 2), rat(1, 2)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn expansion_round_trip() {
        let text = r#"[{"lambda": "1/2", "m": 0, "j": 1, "coeff": ["1"]}, {"lambda": "3/2", "m": 0, "j": 0, "coeff": ["-2/3"]}]"#;
        let terms: Vec<TermJson> = match read_input(text, 8).unwrap() {
            InputFile::Expansion(t) => t,
            other => panic!("{other:?}"),
        };
        let x = expansion_from_json(&terms, 8).unwrap();
        assert_eq!(x.terms().count(), 2);
        let again = expansion_from_json(&expansion_to_json(&x), 8).unwrap();
        assert_eq!(again, x);
        let tau = r#"[{"lambda": "1/2", "m": 0, "j": 0, "coeff": ["τ"]}]"#;
        let t: Vec<TermJson> = serde_json::from_str(tau).unwrap();
        assert!(expansion_from_json(&t, 8).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let d = FundamentalData::new(rat(3, 2), vec![2]).unwrap();
        let cf = CanonicalForm::new(d, vec![TruncatedSeries::new(vec![int(1), int(0), int(1)], 8)]).unwrap();
        let j = serde_json::to_string(&CanonicalFormJson::from_form(&cf)).unwrap();
        match read_input(&j, 8).unwrap() {
            InputFile::Canonical(c) => assert_eq!(c, cf),
            other => panic!("{other:?}"),
        }
    }
}
