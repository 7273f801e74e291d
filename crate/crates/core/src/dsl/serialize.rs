use std::fmt::Write;

use super::ast::FisDocument;

/// Renders `doc` in canonical form: lowercase keywords, inputs before
/// outputs, two-space term indentation, one blank line between blocks, LF
/// line endings and shortest round-trip decimals. Comments are not kept.
pub fn serialize(doc: &FisDocument) -> String {
    let mut out = String::new();
    writeln!(out, "system {}", doc.system.name).unwrap();
    for var in doc.canonical_variables() {
        out.push('\n');
        write!(
            out,
            "{} {} universe {} {}",
            var.role.keyword(),
            var.name.name,
            var.lo,
            var.hi
        )
        .unwrap();
        if let Some(unit) = &var.unit {
            write!(out, " unit {unit}").unwrap();
        }
        out.push('\n');
        for term in &var.terms {
            write!(out, "  term {} {}", term.name.name, term.shape.keyword()).unwrap();
            for p in &term.points {
                write!(out, " {p}").unwrap();
            }
            out.push('\n');
        }
    }
    if !doc.rules.is_empty() {
        out.push('\n');
    }
    for rule in &doc.rules {
        out.push_str("rule if ");
        for (i, c) in rule.antecedents.iter().enumerate() {
            if i > 0 {
                out.push_str(" and ");
            }
            write!(out, "{} is {}", c.variable.name, c.term.name).unwrap();
        }
        writeln!(
            out,
            " then {} is {}",
            rule.consequent.variable.name, rule.consequent.term.name
        )
        .unwrap();
    }
    out
}
