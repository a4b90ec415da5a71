use std::fmt;

use num_traits::One;

use crate::algebra::{AbElement, HomogeneousElement};
use crate::error::{Error, Result};
use crate::scalars::{int, Rational, TruncatedSeries};

/// Generator `Π = (a - λ_1 b) S_1^{-1} (a - λ_2 b) ... S_{k-1}^{-1} (a - λ_k b)`.
#[derive(Clone, PartialEq, Debug)]
pub struct FrescoPresentation {
    lambdas: Vec<Rational>,
    units: Vec<TruncatedSeries>,
}

impl FrescoPresentation {
    pub fn new(lambdas: Vec<Rational>, units: Vec<TruncatedSeries>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidInput("presentation needs at least one factor".into()));
        }
        if units.len() + 1 != lambdas.len() {
            return Err(Error::InvalidInput(format!(
                "{} factors need {} unit series, got {}",
                lambdas.len(),
                lambdas.len() - 1,
                units.len()
            )));
        }
        if let Some(s) = units.iter().find(|s| !s.coeff(0).is_one()) {
            return Err(Error::InvalidInput(format!("unit {s} must have constant term 1")));
        }
        Ok(FrescoPresentation { lambdas, units })
    }

    /// All `S_j = 1`.
    pub fn from_lambdas(lambdas: Vec<Rational>, precision: usize) -> Self {
        let units = (1..lambdas.len()).map(|_| TruncatedSeries::one(precision)).collect();
        FrescoPresentation { lambdas, units }
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn units(&self) -> &[TruncatedSeries] {
        &self.units
    }

    /// `Π` in left normal form modulo `b^precision`.
    pub fn to_element(&self, precision: usize) -> Result<AbElement> {
        let mut x = AbElement::linear(&self.lambdas[0], precision);
        for (l, s) in self.lambdas[1..].iter().zip(&self.units) {
            let inv = s.exact_to(precision).invert()?;
            x = x.mul(&AbElement::from_series(&inv)).mul(&AbElement::linear(l, precision));
        }
        Ok(x)
    }

    /// `(a - λ_1 b) ... (a - λ_k b)`, the initial form of `Π`.
    pub fn bernstein_element(&self) -> HomogeneousElement {
        HomogeneousElement::from_lambdas(&self.lambdas)
    }

    /// The necessary inequality `λ_j > k - j` for geometric frescos.
    pub fn satisfies_geometric_bound(&self) -> bool {
        let k = self.rank();
        self.lambdas
            .iter()
            .enumerate()
            .all(|(i, l)| *l > int((k - i - 1) as i64))
    }
}

impl fmt::Display for FrescoPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = |l: &Rational| {
            let neg = *l < Rational::from_integer(0.into());
            let abs = if neg { -l.clone() } else { l.clone() };
            let sign = if neg { "+" } else { "-" };
            if num_traits::Zero::is_zero(&abs) {
                "a".to_string()
            } else if abs.is_one() {
                format!("(a {sign} b)")
            } else {
                format!("(a {sign} {} b)", crate::scalars::fmt_rational(&abs))
            }
        };
        write!(f, "{}", lin(&self.lambdas[0]))?;
        for (l, s) in self.lambdas[1..].iter().zip(&self.units) {
            if !(s.coeffs().len() == 1 && s.coeff(0).is_one()) {
                let body = s.to_pretty("b");
                let body = body.rsplit_once(" + O(").map_or(body.as_str(), |(x, _)| x);
                write!(f, " * inv({body})")?;
            }
            write!(f, " * {}", lin(l))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_element;
    use crate::scalars::rat;

    #[test]
    fn expansion_matches_parser() {
        let p = FrescoPresentation::new(
            vec![rat(3, 2), rat(1, 2)],
            vec![TruncatedSeries::new(vec![int(1), int(1)], 8)],
        )
        .unwrap();
        let text = p.to_string();
        assert_eq!(text, "(a - 3/2 b) * inv(1 + b) * (a - 1/2 b)");
        assert_eq!(p.to_element(8).unwrap(), parse_element(&text, 8).unwrap());
    }

    #[test]
    fn geometric_bound() {
        assert!(FrescoPresentation::from_lambdas(vec![rat(3, 2), rat(1, 2)], 4).satisfies_geometric_bound());
        assert!(!FrescoPresentation::from_lambdas(vec![rat(1, 2), rat(1, 2)], 4).satisfies_geometric_bound());
    }
}
