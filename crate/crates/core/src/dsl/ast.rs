use std::fmt;

use serde::Serialize;

use crate::fuzzy::ShapeKind;

/// Position of a syntax node: 1-based line and column (in characters) plus
/// length in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1);
        Self {
            line,
            column,
            length,
        }
    }

    /// Zero-width span at the start of the document.
    pub fn start() -> Self {
        Self::new(1, 1, 0)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagnosticCode {
    Syntax,
    MissingSystem,
    DuplicateSystem,
    DuplicateVariable,
    DuplicateTerm,
    UnknownVariable,
    UnknownTerm,
    NonMonotoneBreakpoints,
    SupportOutsideUniverse,
    InvalidUniverse,
    MissingOutput,
    MultipleOutputs,
    MissingInput,
    IncompleteRuleGrid,
    DuplicateRule,
    CoverageGap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(code: DiagnosticCode, span: SourceSpan, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn warning(code: DiagnosticCode, span: SourceSpan, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {}: {}", self.span, sev, self.message)
    }
}

/// Identifier together with where it was written.
#[derive(Debug, Clone, Serialize)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            name: name.into(),
            span,
        }
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Input,
    Output,
}

impl Role {
    pub fn keyword(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Output => "output",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermDecl {
    pub name: Ident,
    pub shape: ShapeKind,
    pub points: Vec<f64>,
    pub points_span: SourceSpan,
    pub span: SourceSpan,
}

impl PartialEq for TermDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.shape == other.shape && self.points == other.points
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VariableDecl {
    pub role: Role,
    pub name: Ident,
    pub lo: f64,
    pub hi: f64,
    pub unit: Option<String>,
    pub terms: Vec<TermDecl>,
    pub span: SourceSpan,
}

impl PartialEq for VariableDecl {
    fn eq(&self, other: &Self) -> bool {
        self.role == other.role
            && self.name == other.name
            && self.lo == other.lo
            && self.hi == other.hi
            && self.unit == other.unit
            && self.terms == other.terms
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseDecl {
    pub variable: Ident,
    pub term: Ident,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleDecl {
    pub antecedents: Vec<ClauseDecl>,
    pub consequent: ClauseDecl,
    pub span: SourceSpan,
}

impl PartialEq for RuleDecl {
    fn eq(&self, other: &Self) -> bool {
        self.antecedents == other.antecedents && self.consequent == other.consequent
    }
}

/// Syntax tree of one definition file. Equality is structural: spans are
/// ignored, and variables compare in canonical order (inputs before
/// outputs, otherwise as declared).
#[derive(Debug, Clone, Serialize)]
pub struct FisDocument {
    pub system: Ident,
    pub variables: Vec<VariableDecl>,
    pub rules: Vec<RuleDecl>,
}

impl FisDocument {
    pub fn inputs(&self) -> impl Iterator<Item = &VariableDecl> {
        self.variables.iter().filter(|v| v.role == Role::Input)
    }

    pub fn outputs(&self) -> impl Iterator<Item = &VariableDecl> {
        self.variables.iter().filter(|v| v.role == Role::Output)
    }

    pub fn variable(&self, name: &str) -> Option<&VariableDecl> {
        self.variables.iter().find(|v| v.name.name == name)
    }

    /// Variables in canonical order.
    pub fn canonical_variables(&self) -> Vec<&VariableDecl> {
        self.inputs().chain(self.outputs()).collect()
    }
}

impl PartialEq for FisDocument {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system
            && self.canonical_variables() == other.canonical_variables()
            && self.rules == other.rules
    }
}
