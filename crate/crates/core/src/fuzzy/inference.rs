use std::collections::HashSet;

use serde::Serialize;

use super::{fuzzify, rule_activation, Fuzzified, FuzzyError, FuzzyRule, LinguisticVariable};
use crate::scalar::Scalar;

/// Sample count of the output grid used for aggregation and centroid.
pub const DEFAULT_RESOLUTION: usize = 1001;

/// Aggregated (pre-defuzzification) output fuzzy set, sampled on a uniform
/// grid that includes both universe endpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedOutput<F> {
    pub variable: String,
    pub samples: Vec<(F, F)>,
}

impl<F: Scalar> AggregatedOutput<F> {
    pub fn degrees(&self) -> impl Iterator<Item = F> + '_ {
        self.samples.iter().map(|&(_, d)| d)
    }

    pub fn is_empty_set(&self) -> bool {
        self.degrees().all(|d| d <= F::zero())
    }

    pub fn height(&self) -> F {
        self.degrees().fold(F::zero(), F::max)
    }
}

/// Centre of gravity of the sampled set, summed in ascending-x order.
pub fn defuzzify_centroid<F: Scalar>(agg: &AggregatedOutput<F>) -> Result<F, FuzzyError> {
    let mut weighted = F::zero();
    let mut mass = F::zero();
    for &(x, mu) in &agg.samples {
        weighted = weighted + x * mu;
        mass = mass + mu;
    }
    if mass <= F::zero() {
        return Err(FuzzyError::NoRuleFired(agg.variable.clone()));
    }
    let (first, last) = match (agg.samples.first(), agg.samples.last()) {
        (Some(&(a, _)), Some(&(b, _))) => (a, b),
        _ => return Err(FuzzyError::NoRuleFired(agg.variable.clone())),
    };
    Ok((weighted / mass).max(first).min(last))
}

/// Intermediate results of one inference pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation<F> {
    pub fuzzified: Vec<Fuzzified<F>>,
    /// One activation per rule, in rule-bank order.
    pub activations: Vec<F>,
    pub aggregate: AggregatedOutput<F>,
}

/// A Mamdani subsystem: input variables, one output variable and a rule bank.
///
/// AND and implication are `min`, aggregation is `max`.
#[derive(Debug, Clone)]
pub struct FuzzySubsystem<F> {
    name: String,
    inputs: Vec<LinguisticVariable<F>>,
    output: LinguisticVariable<F>,
    rules: Vec<FuzzyRule>,
    grid: Vec<F>,
    // consequent membership sampled on `grid`, one row per rule
    consequents: Vec<Vec<F>>,
}

impl<F: Scalar> FuzzySubsystem<F> {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<LinguisticVariable<F>>,
        output: LinguisticVariable<F>,
        rules: Vec<FuzzyRule>,
    ) -> Result<Self, FuzzyError> {
        Self::with_resolution(name, inputs, output, rules, DEFAULT_RESOLUTION)
    }

    pub fn with_resolution(
        name: impl Into<String>,
        inputs: Vec<LinguisticVariable<F>>,
        output: LinguisticVariable<F>,
        rules: Vec<FuzzyRule>,
        resolution: usize,
    ) -> Result<Self, FuzzyError> {
        if resolution < 2 {
            return Err(FuzzyError::InvalidResolution(resolution));
        }
        let mut seen = HashSet::new();
        for var in inputs.iter().chain(std::iter::once(&output)) {
            if !seen.insert(var.name()) {
                return Err(FuzzyError::DuplicateInput(var.name().to_string()));
            }
        }
        for rule in &rules {
            for clause in &rule.antecedents {
                let var = inputs
                    .iter()
                    .find(|v| v.name() == clause.variable)
                    .ok_or_else(|| FuzzyError::UnknownVariable(clause.variable.clone()))?;
                check_term(var, &clause.term)?;
            }
            if rule.consequent.variable != output.name() {
                return Err(FuzzyError::UnknownVariable(rule.consequent.variable.clone()));
            }
            check_term(&output, &rule.consequent.term)?;
        }

        let grid = output.sample_points(resolution);
        let consequents = rules
            .iter()
            .map(|rule| {
                let mf = &output
                    .term(&rule.consequent.term)
                    .expect("consequent checked above")
                    .membership;
                grid.iter().map(|&x| mf.degree(x)).collect()
            })
            .collect();

        Ok(Self {
            name: name.into(),
            inputs,
            output,
            rules,
            grid,
            consequents,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[LinguisticVariable<F>] {
        &self.inputs
    }

    pub fn input(&self, name: &str) -> Option<&LinguisticVariable<F>> {
        self.inputs.iter().find(|v| v.name() == name)
    }

    pub fn output(&self) -> &LinguisticVariable<F> {
        &self.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn resolution(&self) -> usize {
        self.grid.len()
    }

    /// Number of input-term combinations (`product of term counts`).
    pub fn grid_size(&self) -> usize {
        self.inputs.iter().map(|v| v.terms().len()).product()
    }

    /// Input-term combinations that no rule covers. Each cell lists one term
    /// name per input, in input order.
    pub fn uncovered_cells(&self) -> Vec<Vec<String>> {
        let mut missing = Vec::new();
        let counts: Vec<usize> = self.inputs.iter().map(|v| v.terms().len()).collect();
        if counts.contains(&0) {
            return missing;
        }
        let mut index = vec![0usize; counts.len()];
        loop {
            let cell: Vec<&str> = index
                .iter()
                .zip(&self.inputs)
                .map(|(&i, v)| v.terms()[i].name.as_str())
                .collect();
            let covered = self.rules.iter().any(|rule| {
                rule.antecedents.iter().all(|c| {
                    self.inputs
                        .iter()
                        .position(|v| v.name() == c.variable)
                        .is_some_and(|pos| cell[pos] == c.term)
                })
            });
            if !covered {
                missing.push(cell.iter().map(|s| s.to_string()).collect());
            }
            // odometer increment
            let mut k = counts.len();
            loop {
                if k == 0 {
                    return missing;
                }
                k -= 1;
                index[k] += 1;
                if index[k] < counts[k] {
                    break;
                }
                index[k] = 0;
            }
        }
    }

    pub fn is_grid_complete(&self) -> bool {
        self.uncovered_cells().is_empty()
    }

    /// Fuzzifies the crisp inputs, fires every rule and aggregates the
    /// clipped consequents.
    pub fn evaluate(&self, crisp: &[(&str, F)]) -> Result<Evaluation<F>, FuzzyError> {
        let fuzzified = self
            .inputs
            .iter()
            .map(|var| {
                let x = crisp
                    .iter()
                    .find(|(name, _)| *name == var.name())
                    .map(|&(_, x)| x)
                    .ok_or_else(|| FuzzyError::MissingInput(var.name().to_string()))?;
                fuzzify(var, x)
            })
            .collect::<Result<Vec<_>, _>>()?;

        let activations = self
            .rules
            .iter()
            .map(|rule| rule_activation(rule, &fuzzified))
            .collect::<Result<Vec<_>, _>>()?;

        let mut degrees = vec![F::zero(); self.grid.len()];
        for (activation, consequent) in activations.iter().zip(&self.consequents) {
            if *activation <= F::zero() {
                continue;
            }
            for (agg, &mu) in degrees.iter_mut().zip(consequent) {
                *agg = agg.max(mu.min(*activation));
            }
        }
        let aggregate = AggregatedOutput {
            variable: self.output.name().to_string(),
            samples: self.grid.iter().copied().zip(degrees).collect(),
        };

        Ok(Evaluation {
            fuzzified,
            activations,
            aggregate,
        })
    }

    pub fn infer(&self, crisp: &[(&str, F)]) -> Result<AggregatedOutput<F>, FuzzyError> {
        self.evaluate(crisp).map(|e| e.aggregate)
    }

    /// `infer` followed by centroid defuzzification.
    pub fn infer_crisp(&self, crisp: &[(&str, F)]) -> Result<F, FuzzyError> {
        defuzzify_centroid(&self.infer(crisp)?)
    }
}

fn check_term<F: Scalar>(var: &LinguisticVariable<F>, term: &str) -> Result<(), FuzzyError> {
    match var.term(term) {
        Some(_) => Ok(()),
        None => Err(FuzzyError::UnknownTerm {
            variable: var.name().to_string(),
            term: term.to_string(),
        }),
    }
}
