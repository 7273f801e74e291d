use serde::Serialize;

use super::{FuzzyError, MembershipFunction};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Term<F> {
    pub name: String,
    pub membership: MembershipFunction<F>,
}

/// A named universe of discourse with an ordered list of linguistic terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable<F> {
    name: String,
    lo: F,
    hi: F,
    unit: Option<String>,
    terms: Vec<Term<F>>,
}

impl<F: Scalar> LinguisticVariable<F> {
    pub fn new(name: impl Into<String>, lo: F, hi: F) -> Result<Self, FuzzyError> {
        let name = name.into();
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FuzzyError::InvalidUniverse {
                variable: name,
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        Ok(Self {
            name,
            lo,
            hi,
            unit: None,
            terms: Vec::new(),
        })
    }

    pub fn with_unit(mut self, unit: impl Into<String>) -> Self {
        self.unit = Some(unit.into());
        self
    }

    /// Appends a term. Names must be unique and the support must lie inside
    /// the universe.
    pub fn with_term(
        mut self,
        name: impl Into<String>,
        membership: MembershipFunction<F>,
    ) -> Result<Self, FuzzyError> {
        self.push_term(name.into(), membership)?;
        Ok(self)
    }

    pub fn push_term(
        &mut self,
        name: String,
        membership: MembershipFunction<F>,
    ) -> Result<(), FuzzyError> {
        if self.term(&name).is_some() {
            return Err(FuzzyError::DuplicateTerm {
                variable: self.name.clone(),
                term: name,
            });
        }
        let (a, d) = membership.support();
        if a < self.lo || d > self.hi {
            return Err(FuzzyError::SupportOutsideUniverse {
                variable: self.name.clone(),
                term: name,
            });
        }
        self.terms.push(Term { name, membership });
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (F, F) {
        (self.lo, self.hi)
    }

    pub fn unit(&self) -> Option<&str> {
        self.unit.as_deref()
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn term(&self, name: &str) -> Option<&Term<F>> {
        self.terms.iter().find(|t| t.name == name)
    }

    pub fn contains(&self, x: F) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn clamp(&self, x: F) -> F {
        x.max(self.lo).min(self.hi)
    }

    /// Same universe bounds as `other`.
    pub fn same_universe(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }

    /// `n` uniformly spaced points over the universe, endpoints included.
    pub fn sample_points(&self, n: usize) -> Vec<F> {
        assert!(n >= 2, "need at least two sample points");
        let span = self.hi - self.lo;
        let last = F::from_usize_lossy(n - 1);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.hi
                } else {
                    self.lo + span * F::from_usize_lossy(i) / last
                }
            })
            .collect()
    }

    /// First point among `samples` uniform samples where no term has a
    /// positive degree, if any.
    pub fn coverage_gap(&self, samples: usize) -> Option<F> {
        self.sample_points(samples).into_iter().find(|&x| {
            self.terms
                .iter()
                .all(|t| t.membership.degree(x) <= F::zero())
        })
    }
}

/// Degrees of one crisp value in every term of a variable, in term order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fuzzified<F> {
    pub variable: String,
    pub degrees: Vec<(String, F)>,
}

impl<F: Scalar> Fuzzified<F> {
    pub fn degree(&self, term: &str) -> Option<F> {
        self.degrees
            .iter()
            .find(|(name, _)| name == term)
            .map(|&(_, d)| d)
    }

    /// Term with the highest degree; the earliest term wins ties.
    pub fn dominant_term(&self) -> Option<&str> {
        let mut best: Option<(&str, F)> = None;
        for (name, d) in &self.degrees {
            if best.is_none_or(|(_, bd)| *d > bd) {
                best = Some((name, *d));
            }
        }
        best.map(|(name, _)| name)
    }
}

pub fn fuzzify<F: Scalar>(var: &LinguisticVariable<F>, x: F) -> Result<Fuzzified<F>, FuzzyError> {
    if !var.contains(x) {
        return Err(FuzzyError::OutOfUniverse {
            variable: var.name.clone(),
            value: x.as_f64(),
            lo: var.lo.as_f64(),
            hi: var.hi.as_f64(),
        });
    }
    Ok(Fuzzified {
        variable: var.name.clone(),
        degrees: var
            .terms
            .iter()
            .map(|t| (t.name.clone(), t.membership.degree(x)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temperature() -> LinguisticVariable<f64> {
        LinguisticVariable::new("temperature", 0.0, 100.0)
            .unwrap()
            .with_term("low", MembershipFunction::trapezoid(0.0, 0.0, 18.5, 20.0).unwrap())
            .unwrap()
            .with_term("medium", MembershipFunction::triangle(18.5, 20.0, 21.5).unwrap())
            .unwrap()
            .with_term("high", MembershipFunction::triangle(20.0, 21.5, 23.0).unwrap())
            .unwrap()
            .with_term("v.high", MembershipFunction::trapezoid(21.5, 23.0, 100.0, 100.0).unwrap())
            .unwrap()
    }

    #[test]
    fn fuzzify_at_medium_core() {
        let f = fuzzify(&temperature(), 20.0).unwrap();
        let got: Vec<f64> = f.degrees.iter().map(|&(_, d)| d).collect();
        assert_eq!(got, vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(f.dominant_term(), Some("medium"));
    }

    #[test]
    fn fuzzify_rejects_out_of_universe() {
        let err = fuzzify(&temperature(), 150.0).unwrap_err();
        assert!(matches!(err, FuzzyError::OutOfUniverse { value, .. } if value == 150.0));
        assert!(fuzzify(&temperature(), f64::NAN).is_err());
    }

    #[test]
    fn duplicate_and_outside_terms_rejected() {
        let v = temperature();
        let dup = v
            .clone()
            .with_term("low", MembershipFunction::triangle(0.0, 1.0, 2.0).unwrap());
        assert!(matches!(dup, Err(FuzzyError::DuplicateTerm { .. })));
        let outside = v.with_term("scorching", MembershipFunction::triangle(90.0, 100.0, 110.0).unwrap());
        assert!(matches!(outside, Err(FuzzyError::SupportOutsideUniverse { .. })));
    }

    #[test]
    fn empty_universe_rejected() {
        assert!(LinguisticVariable::<f64>::new("x", 1.0, 1.0).is_err());
        assert!(LinguisticVariable::<f64>::new("x", 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn sample_points_hit_both_endpoints() {
        let pts = temperature().sample_points(1001);
        assert_eq!(pts.len(), 1001);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[1000], 100.0);
        assert!((pts[500] - 50.0).abs() < 1e-12);
        assert!(temperature().coverage_gap(1000).is_none());
    }
}
