//! Mamdani inference: fuzzification, min/max rule evaluation and centroid
//! defuzzification over a fixed sample grid.

mod inference;
mod membership;
mod rule;
mod variable;

pub use inference::{
    defuzzify_centroid, AggregatedOutput, Evaluation, FuzzySubsystem, DEFAULT_RESOLUTION,
};
pub use membership::{MembershipFunction, ShapeKind};
pub use rule::{rule_activation, Clause, FuzzyRule};
pub use variable::{fuzzify, Fuzzified, LinguisticVariable, Term};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("value {value} is outside the universe [{lo}, {hi}] of variable `{variable}`")]
    OutOfUniverse {
        variable: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("variable `{variable}` has no term `{term}`")]
    UnknownTerm { variable: String, term: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no crisp value supplied for input `{0}`")]
    MissingInput(String),
    #[error("no rule fired for output `{0}`")]
    NoRuleFired(String),
    #[error("breakpoints {0:?} are not non-decreasing")]
    NonMonotoneBreakpoints(Vec<f64>),
    #[error("breakpoints must be finite, got {0:?}")]
    NonFiniteBreakpoint(Vec<f64>),
    #[error("support of term `{term}` lies outside the universe of `{variable}`")]
    SupportOutsideUniverse { variable: String, term: String },
    #[error("term `{term}` is declared twice on variable `{variable}`")]
    DuplicateTerm { variable: String, term: String },
    #[error("universe [{lo}, {hi}] of `{variable}` is empty or not finite")]
    InvalidUniverse { variable: String, lo: f64, hi: f64 },
    #[error("input `{0}` is declared twice")]
    DuplicateInput(String),
    #[error("sample resolution must be at least 2, got {0}")]
    InvalidResolution(usize),
}
