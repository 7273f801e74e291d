//! Text format for fuzzy subsystem definitions (`.fis.txt`).

mod ast;
mod parser;
mod serialize;
mod validate;

pub use ast::{
    ClauseDecl, Diagnostic, DiagnosticCode, FisDocument, Ident, Role, RuleDecl, Severity,
    SourceSpan, TermDecl, VariableDecl,
};
pub use parser::parse;
pub use serialize::serialize;
pub use validate::{validate, Validated};

use crate::scalar::Scalar;

/// File extension of definition files.
pub const FIS_EXTENSION: &str = ".fis.txt";

/// Parses and validates in one step.
pub fn compile<F: Scalar>(text: &str) -> Result<Validated<F>, Vec<Diagnostic>> {
    validate(&parse(text)?)
}
