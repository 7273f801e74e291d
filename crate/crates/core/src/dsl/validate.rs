use std::collections::{HashMap, HashSet};

use super::ast::{Diagnostic, DiagnosticCode, FisDocument, Role, VariableDecl};
use crate::fuzzy::{
    Clause, FuzzyError, FuzzyRule, FuzzySubsystem, LinguisticVariable, MembershipFunction,
};
use crate::scalar::Scalar;

/// Samples per variable for the coverage-gap warning.
const COVERAGE_SAMPLES: usize = 1000;

/// A subsystem that passed validation, plus any warnings raised on the way.
#[derive(Debug, Clone)]
pub struct Validated<F> {
    pub subsystem: FuzzySubsystem<F>,
    pub warnings: Vec<Diagnostic>,
}

/// Resolves every reference in `doc` and builds the subsystem.
///
/// Errors are returned together with any warnings found before giving up.
pub fn validate<F: Scalar>(doc: &FisDocument) -> Result<Validated<F>, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut seen_vars = HashSet::new();
    for var in &doc.variables {
        if !seen_vars.insert(var.name.name.as_str()) {
            diags.push(Diagnostic::error(
                DiagnosticCode::DuplicateVariable,
                var.name.span,
                format!("variable `{}` is declared twice", var.name.name),
            ));
        }
    }

    let mut built: HashMap<&str, LinguisticVariable<F>> = HashMap::new();
    for var in &doc.variables {
        if let Some(v) = build_variable::<F>(var, &mut diags) {
            built.entry(var.name.name.as_str()).or_insert(v);
        }
    }

    let outputs: Vec<&VariableDecl> = doc.outputs().collect();
    match outputs.as_slice() {
        [] => diags.push(Diagnostic::error(
            DiagnosticCode::MissingOutput,
            doc.system.span,
            "no `output` variable declared",
        )),
        [_] => {}
        [_, extra, ..] => diags.push(Diagnostic::error(
            DiagnosticCode::MultipleOutputs,
            extra.name.span,
            "only one `output` variable is supported per system",
        )),
    }
    if doc.inputs().next().is_none() {
        diags.push(Diagnostic::error(
            DiagnosticCode::MissingInput,
            doc.system.span,
            "no `input` variable declared",
        ));
    }

    let mut seen_rules: HashMap<Vec<(&str, &str)>, usize> = HashMap::new();
    for rule in &doc.rules {
        for clause in &rule.antecedents {
            match doc.variable(&clause.variable.name) {
                Some(v) if v.role == Role::Input => check_term(v, clause, &mut diags),
                Some(_) => diags.push(Diagnostic::error(
                    DiagnosticCode::UnknownVariable,
                    clause.variable.span,
                    format!(
                        "`{}` is an output and cannot appear in a rule condition",
                        clause.variable.name
                    ),
                )),
                None => diags.push(unknown_variable(&clause.variable.name, clause.variable.span)),
            }
        }
        let cons = &rule.consequent;
        match doc.variable(&cons.variable.name) {
            Some(v) if v.role == Role::Output => check_term(v, cons, &mut diags),
            Some(_) => diags.push(Diagnostic::error(
                DiagnosticCode::UnknownVariable,
                cons.variable.span,
                format!(
                    "`{}` is an input and cannot be a rule conclusion",
                    cons.variable.name
                ),
            )),
            None => diags.push(unknown_variable(&cons.variable.name, cons.variable.span)),
        }

        let mut key: Vec<(&str, &str)> = rule
            .antecedents
            .iter()
            .map(|c| (c.variable.name.as_str(), c.term.name.as_str()))
            .collect();
        key.sort_unstable();
        if let Some(first_line) = seen_rules.insert(key, rule.span.line) {
            diags.push(Diagnostic::warning(
                DiagnosticCode::DuplicateRule,
                rule.span,
                format!("rule repeats the condition of the rule on line {first_line}"),
            ));
        }
    }

    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }

    let inputs: Vec<LinguisticVariable<F>> = doc
        .inputs()
        .map(|v| built[v.name.name.as_str()].clone())
        .collect();
    let output_decl = outputs[0];
    let output = built[output_decl.name.name.as_str()].clone();
    let rules = doc
        .rules
        .iter()
        .map(|r| {
            FuzzyRule::new(
                r.antecedents
                    .iter()
                    .map(|c| Clause::new(&c.variable.name, &c.term.name))
                    .collect(),
                Clause::new(&r.consequent.variable.name, &r.consequent.term.name),
            )
        })
        .collect();

    let subsystem = match FuzzySubsystem::new(&doc.system.name, inputs, output, rules) {
        Ok(s) => s,
        Err(e) => {
            diags.push(Diagnostic::error(
                DiagnosticCode::Syntax,
                doc.system.span,
                e.to_string(),
            ));
            return Err(diags);
        }
    };

    let missing = subsystem.uncovered_cells();
    if !missing.is_empty() {
        let example = missing[0].join(" x ");
        diags.push(Diagnostic::warning(
            DiagnosticCode::IncompleteRuleGrid,
            doc.system.span,
            format!(
                "rule bank covers {} of {} input combinations (first missing: {example})",
                subsystem.grid_size() - missing.len(),
                subsystem.grid_size()
            ),
        ));
    }
    for (decl, var) in doc
        .canonical_variables()
        .into_iter()
        .zip(subsystem.inputs().iter().chain(std::iter::once(subsystem.output())))
    {
        if let Some(x) = var.coverage_gap(COVERAGE_SAMPLES) {
            diags.push(Diagnostic::warning(
                DiagnosticCode::CoverageGap,
                decl.span,
                format!("no term of `{}` covers the value {x}", var.name()),
            ));
        }
    }

    Ok(Validated {
        subsystem,
        warnings: diags,
    })
}

fn unknown_variable(name: &str, span: super::SourceSpan) -> Diagnostic {
    Diagnostic::error(
        DiagnosticCode::UnknownVariable,
        span,
        format!("unknown variable `{name}`"),
    )
}

fn check_term(var: &VariableDecl, clause: &super::ast::ClauseDecl, diags: &mut Vec<Diagnostic>) {
    if !var.terms.iter().any(|t| t.name.name == clause.term.name) {
        diags.push(Diagnostic::error(
            DiagnosticCode::UnknownTerm,
            clause.term.span,
            format!(
                "variable `{}` has no term `{}`",
                var.name.name, clause.term.name
            ),
        ));
    }
}

fn build_variable<F: Scalar>(
    decl: &VariableDecl,
    diags: &mut Vec<Diagnostic>,
) -> Option<LinguisticVariable<F>> {
    let mut var = match LinguisticVariable::new(&decl.name.name, F::lit(decl.lo), F::lit(decl.hi)) {
        Ok(v) => v,
        Err(e) => {
            diags.push(Diagnostic::error(
                DiagnosticCode::InvalidUniverse,
                decl.span,
                e.to_string(),
            ));
            return None;
        }
    };
    if let Some(unit) = &decl.unit {
        var = var.with_unit(unit);
    }
    let mut ok = true;
    for term in &decl.terms {
        let points: Vec<F> = term.points.iter().map(|&p| F::lit(p)).collect();
        let pushed = MembershipFunction::from_points(term.shape, &points)
            .and_then(|mf| var.push_term(term.name.name.clone(), mf));
        let (code, span) = match pushed {
            Ok(()) => continue,
            Err(FuzzyError::DuplicateTerm { .. }) => {
                (DiagnosticCode::DuplicateTerm, term.name.span)
            }
            Err(FuzzyError::SupportOutsideUniverse { .. }) => {
                (DiagnosticCode::SupportOutsideUniverse, term.points_span)
            }
            Err(_) => (DiagnosticCode::NonMonotoneBreakpoints, term.points_span),
        };
        let message = match code {
            DiagnosticCode::DuplicateTerm => format!(
                "term `{}` is declared twice on `{}`",
                term.name.name, decl.name.name
            ),
            DiagnosticCode::SupportOutsideUniverse => format!(
                "support of `{}` is not inside the universe [{}, {}]",
                term.name.name, decl.lo, decl.hi
            ),
            _ => format!(
                "breakpoints of `{}` must be non-decreasing",
                term.name.name
            ),
        };
        diags.push(Diagnostic::error(code, span, message));
        ok = false;
    }
    ok.then_some(var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    const BASE: &str = "\
system s
input x universe 0 10
  term lo trapezoid 0 0 4 6
  term hi trapezoid 4 6 10 10
output y universe 0 100
  term a triangle 0 25 50
  term b triangle 50 75 100
rule if x is lo then y is a
rule if x is hi then y is b
";

    fn check(text: &str) -> Result<Validated<f64>, Vec<Diagnostic>> {
        validate(&parse(text).expect("parses"))
    }

    #[test]
    fn clean_document_validates() {
        let v = check(BASE).unwrap();
        assert_eq!(v.subsystem.rules().len(), 2);
        // `a` and `b` only touch at 50, where both are zero
        assert_eq!(v.warnings.len(), 1);
        assert_eq!(v.warnings[0].code, DiagnosticCode::CoverageGap);
        assert_eq!(v.warnings[0].span.line, 5);
    }

    #[test]
    fn unknown_term_has_span() {
        let text = BASE.replace("rule if x is hi then y is b", "rule if x is blazing then y is b");
        let diags = check(&text).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagnosticCode::UnknownTerm);
        assert_eq!((diags[0].span.line, diags[0].span.column, diags[0].span.length), (9, 14, 7));
    }

    #[test]
    fn non_monotone_triangle() {
        let text = BASE.replace("term a triangle 0 25 50", "term a triangle 5 3 7");
        let diags = check(&text).unwrap_err();
        assert_eq!(diags[0].code, DiagnosticCode::NonMonotoneBreakpoints);
        assert_eq!(diags[0].span.line, 6);
    }

    #[test]
    fn support_outside_universe_and_duplicates() {
        let text = BASE.replace("term b triangle 50 75 100", "term a triangle 50 75 100");
        let codes: Vec<_> = check(&text).unwrap_err().iter().map(|d| d.code).collect();
        // the duplicate also leaves rule 2 pointing at a missing term
        assert_eq!(codes, vec![DiagnosticCode::DuplicateTerm, DiagnosticCode::UnknownTerm]);
        let text = BASE.replace("term b triangle 50 75 100", "term b triangle 50 75 120");
        let diags = check(&text).unwrap_err();
        assert_eq!(diags[0].code, DiagnosticCode::SupportOutsideUniverse);
    }

    #[test]
    fn unknown_variable_and_role_misuse() {
        let text = BASE.replace("rule if x is lo then y is a", "rule if z is lo then y is a");
        assert_eq!(check(&text).unwrap_err()[0].code, DiagnosticCode::UnknownVariable);
        let text = BASE.replace("rule if x is lo then y is a", "rule if y is a then y is a");
        assert_eq!(check(&text).unwrap_err()[0].code, DiagnosticCode::UnknownVariable);
    }

    #[test]
    fn incomplete_grid_is_a_warning() {
        let text = BASE.replace("rule if x is hi then y is b\n", "");
        let v = check(&text).unwrap();
        assert!(v.warnings.iter().any(|w| w.code == DiagnosticCode::IncompleteRuleGrid && !w.is_error()));
    }

    #[test]
    fn structural_errors() {
        let no_output = "system s\ninput x universe 0 1\n  term a triangle 0 0.5 1\n";
        assert_eq!(check(no_output).unwrap_err()[0].code, DiagnosticCode::MissingOutput);
        let bad_universe = BASE.replace("universe 0 10", "universe 10 0");
        assert!(check(&bad_universe).unwrap_err().iter().any(|d| d.code == DiagnosticCode::InvalidUniverse));
    }
}
