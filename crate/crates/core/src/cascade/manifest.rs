//! Line-oriented key/value manifest describing a cascade:
//!
//! ```text
//! node fs1 = fs1_apparent_temperature.fis.txt
//! external temperature = fs1.temperature
//! wire fs1 -> fs3.apparent_temperature
//! decision = fs3
//! threshold = 50
//! tie = send
//! ```
//!
//! Definition paths are relative to the manifest's directory.

use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{Cascade, CascadeBuilder, CascadeError, ExternalBinding, TiePolicy, Wire, DEFAULT_THRESHOLD};
use crate::dsl::{self, Diagnostic};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("{path}: {} error(s) in definition", diagnostics.iter().filter(|d| d.is_error()).count())]
    Definition {
        path: PathBuf,
        diagnostics: Vec<Diagnostic>,
    },
    #[error(transparent)]
    Cascade(#[from] CascadeError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub nodes: Vec<(String, PathBuf)>,
    pub externals: Vec<ExternalBinding>,
    pub wires: Vec<Wire>,
    pub decision: String,
    pub threshold: f64,
    pub tie: TiePolicy,
}

fn split_target(target: &str) -> Option<(&str, &str)> {
    let (node, var) = target.split_once('.')?;
    (!node.is_empty() && !var.is_empty()).then_some((node, var))
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        let mut nodes = Vec::new();
        let mut externals = Vec::new();
        let mut wires = Vec::new();
        let mut decision = None;
        let mut threshold = DEFAULT_THRESHOLD;
        let mut tie = TiePolicy::Send;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| LoadError::Manifest { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, rest) = content
                .split_once(char::is_whitespace)
                .map(|(k, r)| (k, r.trim()))
                .unwrap_or((content, ""));
            match key.to_ascii_lowercase().as_str() {
                "node" => {
                    let (name, path) = rest
                        .split_once('=')
                        .ok_or_else(|| err("expected `node <name> = <path>`".into()))?;
                    nodes.push((name.trim().to_string(), PathBuf::from(path.trim())));
                }
                "external" => {
                    let (name, target) = rest
                        .split_once('=')
                        .ok_or_else(|| err("expected `external <name> = <node>.<input>`".into()))?;
                    let (node, variable) = split_target(target.trim())
                        .ok_or_else(|| err(format!("bad target `{}`", target.trim())))?;
                    externals.push(ExternalBinding {
                        name: name.trim().to_string(),
                        node: node.to_string(),
                        variable: variable.to_string(),
                    });
                }
                "wire" => {
                    let (producer, target) = rest
                        .split_once("->")
                        .ok_or_else(|| err("expected `wire <node> -> <node>.<input>`".into()))?;
                    let (consumer, variable) = split_target(target.trim())
                        .ok_or_else(|| err(format!("bad target `{}`", target.trim())))?;
                    wires.push(Wire {
                        producer: producer.trim().to_string(),
                        consumer: consumer.to_string(),
                        variable: variable.to_string(),
                    });
                }
                _ => {
                    let (key, value) = content
                        .split_once('=')
                        .map(|(k, v)| (k.trim(), v.trim()))
                        .ok_or_else(|| err(format!("unrecognised line `{content}`")))?;
                    match key.to_ascii_lowercase().as_str() {
                        "decision" => decision = Some(value.to_string()),
                        "threshold" => {
                            threshold = value
                                .parse::<f64>()
                                .ok()
                                .filter(|t| t.is_finite())
                                .ok_or_else(|| err(format!("bad threshold `{value}`")))?
                        }
                        "tie" => tie = value.parse().map_err(err)?,
                        other => return Err(err(format!("unknown key `{other}`"))),
                    }
                }
            }
        }

        let decision = decision.ok_or(LoadError::Manifest {
            line: text.lines().count().max(1),
            message: "missing `decision = <node>`".into(),
        })?;
        Ok(Self {
            nodes,
            externals,
            wires,
            decision,
            threshold,
            tie,
        })
    }

    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The manifest shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(crate::bundled::MANIFEST).expect("bundled manifest parses")
    }

    /// Builds the cascade, obtaining each definition's text from `source`.
    pub fn build_with<F, S>(&self, mut source: S) -> Result<Cascade<F>, LoadError>
    where
        F: Scalar,
        S: FnMut(&str, &Path) -> Result<String, LoadError>,
    {
        let mut builder = CascadeBuilder::new();
        for (name, path) in &self.nodes {
            let text = source(name, path)?;
            let validated = dsl::compile::<F>(&text).map_err(|diagnostics| LoadError::Definition {
                path: path.clone(),
                diagnostics,
            })?;
            builder = builder.node(name, validated.subsystem);
        }
        for ext in &self.externals {
            builder = builder.external(&ext.name, &ext.node, &ext.variable);
        }
        for wire in &self.wires {
            builder = builder.wire(&wire.producer, &wire.consumer, &wire.variable);
        }
        let threshold = F::from_f64(self.threshold).unwrap_or_else(F::nan);
        Ok(builder
            .decision(&self.decision, threshold, self.tie)
            .build()?)
    }

    /// Builds the cascade reading definitions relative to `base`.
    pub fn build_from_dir<F: Scalar>(&self, base: &Path) -> Result<Cascade<F>, LoadError> {
        self.build_with(|_, path| {
            let full = base.join(path);
            std::fs::read_to_string(&full).map_err(|source| LoadError::Io { path: full, source })
        })
    }

    /// Builds the cascade from the definitions embedded in the crate.
    pub fn build_bundled<F: Scalar>(&self) -> Result<Cascade<F>, LoadError> {
        self.build_with(|_, path| {
            path.to_str()
                .and_then(crate::bundled::definition)
                .map(str::to_string)
                .ok_or_else(|| LoadError::Io {
                    path: path.to_path_buf(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a bundled definition"),
                })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_manifest_parses() {
        let m = Manifest::bundled();
        assert_eq!(m.nodes.len(), 3);
        assert_eq!(m.externals.len(), 4);
        assert_eq!(m.wires.len(), 2);
        assert_eq!(m.decision, "fs3");
        assert_eq!(m.threshold, 50.0);
        assert_eq!(m.tie, TiePolicy::Send);
    }

    #[test]
    fn reports_line_of_bad_entries() {
        let err = Manifest::parse("decision = fs3\nwire fs1 fs3.x\n").unwrap_err();
        assert!(matches!(err, LoadError::Manifest { line: 2, .. }));
        let err = Manifest::parse("threshold = fifty\ndecision = x\n").unwrap_err();
        assert!(matches!(err, LoadError::Manifest { line: 1, .. }));
        assert!(Manifest::parse("node a = a.fis.txt\n").is_err());
    }
}
