//! Composition of fuzzy subsystems into a DAG whose final node produces the
//! sending-decision score.

mod decision;
mod manifest;

pub use decision::{decide, Label, TiePolicy, DEFAULT_THRESHOLD};
pub use manifest::{LoadError, Manifest};

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::fuzzy::{defuzzify_centroid, FuzzyError, FuzzySubsystem};
use crate::scalar::Scalar;

/// External input names of the standard two-phase topology.
pub const EXT_TEMPERATURE: &str = "temperature";
pub const EXT_HUMIDITY: &str = "humidity";
pub const EXT_ENERGY: &str = "energy";
pub const EXT_TIME: &str = "time";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CascadeError {
    #[error("node `{0}` is declared twice")]
    DuplicateNode(String),
    #[error("external input `{0}` is declared twice")]
    DuplicateExternal(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{node}` has no input `{variable}`")]
    UnknownInput { node: String, variable: String },
    #[error("cannot wire `{producer}` into `{consumer}.{variable}`: {reason}")]
    WiringMismatch {
        producer: String,
        consumer: String,
        variable: String,
        reason: String,
    },
    #[error("input `{node}.{variable}` is not fed by any external or wire")]
    Unfed { node: String, variable: String },
    #[error("input `{node}.{variable}` is fed more than once")]
    MultiplyFed { node: String, variable: String },
    #[error("wiring contains a cycle through `{0}`")]
    Cycle(String),
    #[error("no decision node declared")]
    MissingDecision,
    #[error("threshold {0} is not finite")]
    InvalidThreshold(f64),
    #[error("unknown external input `{0}`")]
    UnknownExternal(String),
    #[error("no value supplied for external input `{0}`")]
    MissingExternal(String),
    #[error("node `{node}`: {source}")]
    Node {
        node: String,
        #[source]
        source: FuzzyError,
    },
}

impl CascadeError {
    /// The underlying fuzzy error, when evaluation of a node failed.
    pub fn fuzzy(&self) -> Option<&FuzzyError> {
        match self {
            CascadeError::Node { source, .. } => Some(source),
            _ => None,
        }
    }

    pub fn is_no_rule_fired(&self) -> bool {
        matches!(self.fuzzy(), Some(FuzzyError::NoRuleFired(_)))
    }
}

#[derive(Debug, Clone)]
pub struct Node<F> {
    pub name: String,
    pub subsystem: FuzzySubsystem<F>,
}

/// Binds an external input name to a node input variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExternalBinding {
    pub name: String,
    pub node: String,
    pub variable: String,
}

/// Feeds the crisp output of `producer` into `consumer.variable`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wire {
    pub producer: String,
    pub consumer: String,
    pub variable: String,
}

#[derive(Debug, Clone)]
pub struct CascadeBuilder<F> {
    nodes: Vec<Node<F>>,
    externals: Vec<ExternalBinding>,
    wires: Vec<Wire>,
    decision: Option<String>,
    threshold: F,
    tie: TiePolicy,
}

impl<F: Scalar> Default for CascadeBuilder<F> {
    fn default() -> Self {
        Self {
            nodes: Vec::new(),
            externals: Vec::new(),
            wires: Vec::new(),
            decision: None,
            threshold: F::lit(DEFAULT_THRESHOLD),
            tie: TiePolicy::Send,
        }
    }
}

impl<F: Scalar> CascadeBuilder<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, name: impl Into<String>, subsystem: FuzzySubsystem<F>) -> Self {
        self.nodes.push(Node {
            name: name.into(),
            subsystem,
        });
        self
    }

    pub fn external(
        mut self,
        name: impl Into<String>,
        node: impl Into<String>,
        variable: impl Into<String>,
    ) -> Self {
        self.externals.push(ExternalBinding {
            name: name.into(),
            node: node.into(),
            variable: variable.into(),
        });
        self
    }

    pub fn wire(
        mut self,
        producer: impl Into<String>,
        consumer: impl Into<String>,
        variable: impl Into<String>,
    ) -> Self {
        self.wires.push(Wire {
            producer: producer.into(),
            consumer: consumer.into(),
            variable: variable.into(),
        });
        self
    }

    pub fn decision(mut self, node: impl Into<String>, threshold: F, tie: TiePolicy) -> Self {
        self.decision = Some(node.into());
        self.threshold = threshold;
        self.tie = tie;
        self
    }

    pub fn build(self) -> Result<Cascade<F>, CascadeError> {
        let mut names = HashSet::new();
        for node in &self.nodes {
            if !names.insert(node.name.as_str()) {
                return Err(CascadeError::DuplicateNode(node.name.clone()));
            }
        }
        let index: HashMap<&str, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.as_str(), i))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| CascadeError::UnknownNode(name.to_string()))
        };
        let input_of = |node: usize, variable: &str| {
            self.nodes[node]
                .subsystem
                .input(variable)
                .ok_or_else(|| CascadeError::UnknownInput {
                    node: self.nodes[node].name.clone(),
                    variable: variable.to_string(),
                })
        };

        let mut feeds: HashMap<(usize, &str), usize> = HashMap::new();
        let mut ext_names = HashSet::new();
        for ext in &self.externals {
            if !ext_names.insert(ext.name.as_str()) {
                return Err(CascadeError::DuplicateExternal(ext.name.clone()));
            }
            let node = lookup(&ext.node)?;
            input_of(node, &ext.variable)?;
            *feeds.entry((node, ext.variable.as_str())).or_default() += 1;
        }

        let mut edges = vec![Vec::new(); self.nodes.len()];
        for wire in &self.wires {
            let producer = lookup(&wire.producer)?;
            let consumer = lookup(&wire.consumer)?;
            let target = input_of(consumer, &wire.variable)?;
            let produced = self.nodes[producer].subsystem.output();
            let mismatch = |reason: String| CascadeError::WiringMismatch {
                producer: wire.producer.clone(),
                consumer: wire.consumer.clone(),
                variable: wire.variable.clone(),
                reason,
            };
            if produced.name() != target.name() {
                return Err(mismatch(format!(
                    "producer output is named `{}`",
                    produced.name()
                )));
            }
            if !produced.same_universe(target) {
                let (plo, phi) = produced.universe();
                let (clo, chi) = target.universe();
                return Err(mismatch(format!(
                    "universe [{plo}, {phi}] does not match [{clo}, {chi}]"
                )));
            }
            *feeds.entry((consumer, wire.variable.as_str())).or_default() += 1;
            edges[producer].push(consumer);
        }

        for (i, node) in self.nodes.iter().enumerate() {
            for var in node.subsystem.inputs() {
                match feeds.get(&(i, var.name())).copied().unwrap_or(0) {
                    1 => {}
                    0 => {
                        return Err(CascadeError::Unfed {
                            node: node.name.clone(),
                            variable: var.name().to_string(),
                        })
                    }
                    _ => {
                        return Err(CascadeError::MultiplyFed {
                            node: node.name.clone(),
                            variable: var.name().to_string(),
                        })
                    }
                }
            }
        }

        let decision = lookup(self.decision.as_deref().ok_or(CascadeError::MissingDecision)?)?;
        if !self.threshold.is_finite() {
            return Err(CascadeError::InvalidThreshold(self.threshold.as_f64()));
        }

        // Kahn's algorithm, picking the earliest declared ready node each step
        let mut indegree = vec![0usize; self.nodes.len()];
        for targets in &edges {
            for &t in targets {
                indegree[t] += 1;
            }
        }
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut done = vec![false; self.nodes.len()];
        while order.len() < self.nodes.len() {
            let Some(next) = (0..self.nodes.len()).find(|&i| !done[i] && indegree[i] == 0) else {
                let stuck = (0..self.nodes.len()).find(|&i| !done[i]).unwrap_or(0);
                return Err(CascadeError::Cycle(self.nodes[stuck].name.clone()));
            };
            done[next] = true;
            order.push(next);
            for &t in &edges[next] {
                indegree[t] -= 1;
            }
        }

        Ok(Cascade {
            nodes: self.nodes,
            order,
            externals: self.externals,
            wires: self.wires,
            decision,
            threshold: self.threshold,
            tie: self.tie,
        })
    }
}

/// Immutable, validated cascade of fuzzy subsystems.
#[derive(Debug, Clone)]
pub struct Cascade<F> {
    nodes: Vec<Node<F>>,
    order: Vec<usize>,
    externals: Vec<ExternalBinding>,
    wires: Vec<Wire>,
    decision: usize,
    threshold: F,
    tie: TiePolicy,
}

/// Builds the standard two-phase topology: `fs1` and `fs2` each take two
/// external readings, `fs3` combines their outputs into the decision score.
///
/// The first and second inputs of `fs1` receive temperature and humidity,
/// those of `fs2` receive appliance energy and time of day.
pub fn build_cascade<F: Scalar>(
    fs1: FuzzySubsystem<F>,
    fs2: FuzzySubsystem<F>,
    fs3: FuzzySubsystem<F>,
) -> Result<Cascade<F>, CascadeError> {
    let input = |fs: &FuzzySubsystem<F>, i: usize| {
        fs.inputs()
            .get(i)
            .map(|v| v.name().to_string())
            .ok_or_else(|| CascadeError::Unfed {
                node: fs.name().to_string(),
                variable: format!("#{}", i + 1),
            })
    };
    let (t, h) = (input(&fs1, 0)?, input(&fs1, 1)?);
    let (e, tod) = (input(&fs2, 0)?, input(&fs2, 1)?);
    let fs1_out = fs1.output().name().to_string();
    let fs2_out = fs2.output().name().to_string();
    CascadeBuilder::new()
        .node("fs1", fs1)
        .node("fs2", fs2)
        .node("fs3", fs3)
        .external(EXT_TEMPERATURE, "fs1", t)
        .external(EXT_HUMIDITY, "fs1", h)
        .external(EXT_ENERGY, "fs2", e)
        .external(EXT_TIME, "fs2", tod)
        .wire("fs1", "fs3", fs1_out)
        .wire("fs2", "fs3", fs2_out)
        .decision("fs3", F::lit(DEFAULT_THRESHOLD), TiePolicy::Send)
        .build()
}

/// One telemetry tuple in the units of the standard topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reading<F> {
    /// °C
    pub temperature: F,
    /// relative humidity as a fraction in [0, 1]
    pub humidity: F,
    /// Wh in the reading interval
    pub energy: F,
    /// fractional hours in [0, 24]
    pub time: F,
}

impl<F: Scalar> Reading<F> {
    pub fn externals(&self) -> [(&'static str, F); 4] {
        [
            (EXT_TEMPERATURE, self.temperature),
            (EXT_HUMIDITY, self.humidity),
            (EXT_ENERGY, self.energy),
            (EXT_TIME, self.time),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiredRule<F> {
    pub index: usize,
    pub rule: String,
    pub activation: F,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeTrace<F> {
    pub node: String,
    pub inputs: Vec<(String, F)>,
    pub output: String,
    pub crisp: F,
    /// Rules with positive activation, in rule-bank order.
    pub fired: Vec<FiredRule<F>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionTrace<F> {
    pub externals: Vec<(String, F)>,
    /// Nodes in evaluation order; the last one is the decision node.
    pub nodes: Vec<NodeTrace<F>>,
    pub score: F,
    pub threshold: F,
    pub label: Label,
}

impl<F: Scalar> DecisionTrace<F> {
    pub fn node(&self, name: &str) -> Option<&NodeTrace<F>> {
        self.nodes.iter().find(|n| n.node == name)
    }

    /// Crisp value produced for the variable `output`.
    pub fn crisp(&self, output: &str) -> Option<F> {
        self.nodes.iter().find(|n| n.output == output).map(|n| n.crisp)
    }
}

impl<F: Scalar> Cascade<F> {
    pub fn nodes(&self) -> impl Iterator<Item = &Node<F>> {
        self.order.iter().map(|&i| &self.nodes[i])
    }

    pub fn node(&self, name: &str) -> Option<&Node<F>> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn externals(&self) -> &[ExternalBinding] {
        &self.externals
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn decision_node(&self) -> &Node<F> {
        &self.nodes[self.decision]
    }

    pub fn threshold(&self) -> F {
        self.threshold
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie
    }

    pub fn with_threshold(mut self, threshold: F) -> Result<Self, CascadeError> {
        if !threshold.is_finite() {
            return Err(CascadeError::InvalidThreshold(threshold.as_f64()));
        }
        self.threshold = threshold;
        Ok(self)
    }

    pub fn with_tie_policy(mut self, tie: TiePolicy) -> Self {
        self.tie = tie;
        self
    }

    /// Output variable names of every non-decision node, in evaluation order.
    pub fn intermediate_outputs(&self) -> Vec<&str> {
        self.order
            .iter()
            .filter(|&&i| i != self.decision)
            .map(|&i| self.nodes[i].subsystem.output().name())
            .collect()
    }

    fn binding_variable(&self, ext: &ExternalBinding) -> &crate::fuzzy::LinguisticVariable<F> {
        self.node(&ext.node)
            .and_then(|n| n.subsystem.input(&ext.variable))
            .expect("bindings checked at build time")
    }

    /// Clamps each external value into the universe of the input it feeds.
    /// Returns the clamped values and the names of the inputs that moved.
    pub fn clamp_externals(&self, externals: &[(&str, F)]) -> (Vec<(String, F)>, Vec<String>) {
        let mut moved = Vec::new();
        let clamped = externals
            .iter()
            .map(|&(name, x)| {
                let y = self
                    .externals
                    .iter()
                    .find(|e| e.name == name)
                    .map_or(x, |e| self.binding_variable(e).clamp(x));
                if y != x {
                    moved.push(name.to_string());
                }
                (name.to_string(), y)
            })
            .collect();
        (clamped, moved)
    }

    /// Evaluates every node in topological order and labels the final score.
    pub fn evaluate(&self, externals: &[(&str, F)]) -> Result<DecisionTrace<F>, CascadeError> {
        for (name, _) in externals {
            if !self.externals.iter().any(|e| e.name == *name) {
                return Err(CascadeError::UnknownExternal(name.to_string()));
            }
        }
        let mut echoed = Vec::with_capacity(self.externals.len());
        for ext in &self.externals {
            let value = externals
                .iter()
                .find(|(n, _)| *n == ext.name)
                .map(|&(_, x)| x)
                .ok_or_else(|| CascadeError::MissingExternal(ext.name.clone()))?;
            echoed.push((ext.name.clone(), value));
        }

        let mut crisp: Vec<Option<F>> = vec![None; self.nodes.len()];
        let mut traces = Vec::with_capacity(self.nodes.len());
        for &i in &self.order {
            let node = &self.nodes[i];
            let inputs: Vec<(String, F)> = node
                .subsystem
                .inputs()
                .iter()
                .map(|var| {
                    let value = self
                        .externals
                        .iter()
                        .zip(&echoed)
                        .find(|(e, _)| e.node == node.name && e.variable == var.name())
                        .map(|(_, &(_, x))| x)
                        .or_else(|| {
                            self.wires
                                .iter()
                                .find(|w| w.consumer == node.name && w.variable == var.name())
                                .and_then(|w| {
                                    let p = self.nodes.iter().position(|n| n.name == w.producer)?;
                                    crisp[p]
                                })
                        })
                        .expect("every input is fed exactly once and producers run first");
                    (var.name().to_string(), value)
                })
                .collect();
            let refs: Vec<(&str, F)> = inputs.iter().map(|(n, x)| (n.as_str(), *x)).collect();
            let wrap = |source| CascadeError::Node {
                node: node.name.clone(),
                source,
            };
            let eval = node.subsystem.evaluate(&refs).map_err(wrap)?;
            let value = defuzzify_centroid(&eval.aggregate).map_err(wrap)?;
            crisp[i] = Some(value);
            let fired = eval
                .activations
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > F::zero())
                .map(|(index, &activation)| FiredRule {
                    index,
                    rule: node.subsystem.rules()[index].to_string(),
                    activation,
                })
                .collect();
            traces.push(NodeTrace {
                node: node.name.clone(),
                inputs,
                output: node.subsystem.output().name().to_string(),
                crisp: value,
                fired,
            });
        }

        let score = crisp[self.decision].expect("decision node evaluated");
        // keep the decision node last in the trace
        if let Some(pos) = traces.iter().position(|t| t.node == self.nodes[self.decision].name) {
            let last = traces.remove(pos);
            traces.push(last);
        }
        Ok(DecisionTrace {
            externals: echoed,
            nodes: traces,
            score,
            threshold: self.threshold,
            label: decide(score, self.threshold, self.tie),
        })
    }

    pub fn evaluate_reading(&self, reading: &Reading<F>) -> Result<DecisionTrace<F>, CascadeError> {
        self.evaluate(&reading.externals())
    }
}
