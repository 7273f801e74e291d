use std::fmt;

use serde::Serialize;

use super::{Fuzzified, FuzzyError};
use crate::scalar::Scalar;

/// `<variable> is <term>`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Clause {
    pub variable: String,
    pub term: String,
}

impl Clause {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Self {
            variable: variable.into(),
            term: term.into(),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} is {}", self.variable, self.term)
    }
}

/// Conjunctive if-then rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FuzzyRule {
    pub antecedents: Vec<Clause>,
    pub consequent: Clause,
}

impl FuzzyRule {
    pub fn new(antecedents: Vec<Clause>, consequent: Clause) -> Self {
        Self {
            antecedents,
            consequent,
        }
    }
}

impl fmt::Display for FuzzyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("if ")?;
        for (i, clause) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{clause}")?;
        }
        write!(f, " then {}", self.consequent)
    }
}

/// Firing strength of `rule`: the minimum antecedent degree. A rule without
/// antecedents fires fully.
pub fn rule_activation<F: Scalar>(
    rule: &FuzzyRule,
    fuzzified: &[Fuzzified<F>],
) -> Result<F, FuzzyError> {
    rule.antecedents.iter().try_fold(F::one(), |acc, clause| {
        let input = fuzzified
            .iter()
            .find(|f| f.variable == clause.variable)
            .ok_or_else(|| FuzzyError::UnknownVariable(clause.variable.clone()))?;
        let degree = input
            .degree(&clause.term)
            .ok_or_else(|| FuzzyError::UnknownTerm {
                variable: clause.variable.clone(),
                term: clause.term.clone(),
            })?;
        Ok(acc.min(degree))
    })
}
