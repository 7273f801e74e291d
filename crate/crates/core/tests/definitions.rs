use fuzzgate_core::bundled;
use fuzzgate_core::dsl::{compile, parse, serialize, DiagnosticCode, Role};

#[test]
fn bundled_files_validate_without_diagnostics() {
    let expected = [(2, 16, 16), (2, 20, 20), (2, 16, 16)];
    for ((name, text), (inputs, rules, grid)) in bundled::definitions().into_iter().zip(expected) {
        let v = compile::<f64>(text).unwrap_or_else(|d| panic!("{name}: {d:?}"));
        assert!(v.warnings.is_empty(), "{name}: {:?}", v.warnings);
        assert_eq!(v.subsystem.inputs().len(), inputs, "{name}");
        assert_eq!(v.subsystem.rules().len(), rules, "{name}");
        assert_eq!(v.subsystem.grid_size(), grid, "{name}");
        assert!(v.subsystem.is_grid_complete(), "{name}");
    }
}

#[test]
fn fs1_document_shape() {
    let doc = parse(bundled::FS1).unwrap();
    assert_eq!(doc.inputs().count(), 2);
    assert_eq!(doc.outputs().count(), 1);
    assert_eq!(doc.rules.len(), 16);
    let hum = doc.variable("humidity").unwrap();
    assert_eq!(hum.role, Role::Input);
    let names: Vec<_> = hum.terms.iter().map(|t| t.name.name.as_str()).collect();
    assert_eq!(names, ["dry", "comfortable", "humid", "stiki"]);
}

#[test]
fn bundled_files_round_trip() {
    for (name, text) in bundled::definitions() {
        let doc = parse(text).unwrap();
        let once = serialize(&doc);
        let again = parse(&once).unwrap();
        assert_eq!(again, doc, "{name}");
        assert_eq!(serialize(&again), once, "{name}");
    }
}

#[test]
fn time_universe_ends_at_24() {
    let v = compile::<f64>(bundled::FS2).unwrap();
    let time = v.subsystem.input("time_of_read").unwrap();
    assert_eq!(time.universe(), (0.0, 24.0));
    let last = time.terms().last().unwrap();
    assert_eq!(last.membership.support().1, 24.0);
}

#[test]
fn seven_variables_cover_their_universes() {
    for (_, text) in bundled::definitions() {
        let s = compile::<f64>(text).unwrap().subsystem;
        for var in s.inputs().iter().chain(std::iter::once(s.output())) {
            assert_eq!(var.coverage_gap(1000), None, "{}", var.name());
        }
    }
}

#[test]
fn unknown_term_is_reported_with_span() {
    let text = bundled::FS1.replace(
        "temperature is v.high and humidity is dry",
        "temperature is blazing and humidity is dry",
    );
    let diags = compile::<f64>(&text).unwrap_err();
    let errors: Vec<_> = diags.iter().filter(|d| d.is_error()).collect();
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0].code, DiagnosticCode::UnknownTerm);
    let line = text.lines().nth(errors[0].span.line - 1).unwrap();
    let col = errors[0].span.column - 1;
    assert_eq!(&line[col..col + errors[0].span.length], "blazing");
}

#[test]
fn misspelled_rule_keyword_is_one_syntax_error() {
    let diags = parse("system s\ninput x universe 0 1\n  term a triangle 0 0.5 1\nrulez if x is a then x is a\n")
        .unwrap_err();
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].code, DiagnosticCode::Syntax);
    assert_eq!((diags[0].span.line, diags[0].span.column), (4, 1));
}

#[test]
fn non_monotone_triangle() {
    let diags = compile::<f64>(
        "system s\ninput x universe 0 10\n  term a triangle 5 3 7\noutput y universe 0 1\n  term b triangle 0 0.5 1\n",
    )
    .unwrap_err();
    assert!(diags.iter().any(|d| d.code == DiagnosticCode::NonMonotoneBreakpoints));
}

#[test]
fn smallest_document() {
    let doc = parse("system tiny\ninput x universe 0 1\n  term a triangle 0 0.5 1\n").unwrap();
    assert_eq!(doc.variables.len(), 1);
    assert!(doc.rules.is_empty());
}

#[test]
fn diagnostics_stay_inside_the_text() {
    let samples = [
        "",
        "system",
        "system s\nterm a triangle 1 2",
        "system s\ninput x universe 5 1\n  term a trapezoid 0 1 2\n",
        "system s\nrule if then\n",
        "system s\ninput x universe 0 1 unit\n\trule if x is a",
    ];
    for text in samples {
        let diags = parse(text).err().unwrap_or_default();
        let lines: Vec<&str> = text.split('\n').collect();
        for d in diags {
            let line = lines.get(d.span.line.max(1) - 1).copied().unwrap_or("");
            assert!(d.span.line <= lines.len().max(1), "{text:?}: {d}");
            assert!(d.span.column - 1 + d.span.length <= line.chars().count() + 1, "{text:?}: {d}");
        }
    }
}
