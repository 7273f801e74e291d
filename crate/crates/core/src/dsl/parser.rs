//! Line-oriented parser for `.fis.txt` definition files.
//!
//! ```text
//! system <name>
//! input|output <var> universe <lo> <hi> [unit <label>]
//!   term <name> triangle <a> <b> <c>
//!   term <name> trapezoid <a> <b> <c> <d>
//! rule if <var> is <term> [and <var> is <term>]... then <var> is <term>
//! ```
//!
//! Keywords are case-insensitive, `#` starts a comment, CRLF is accepted.
//! Each line is parsed independently so one bad line yields one diagnostic
//! and parsing carries on.

use super::ast::{
    ClauseDecl, Diagnostic, DiagnosticCode, FisDocument, Ident, Role, RuleDecl, SourceSpan,
    TermDecl, VariableDecl,
};
use crate::fuzzy::ShapeKind;

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    span: SourceSpan,
}

impl Token<'_> {
    fn is_keyword(&self, kw: &str) -> bool {
        self.text.eq_ignore_ascii_case(kw)
    }
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None; // (byte offset, column)
    let mut column = 0;
    for (offset, ch) in line.char_indices() {
        column += 1;
        if ch == '#' {
            break;
        }
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((offset, column)),
            (true, Some((s, col))) => {
                let text = &line[s..offset];
                tokens.push(Token {
                    text,
                    span: SourceSpan::new(line_no, col, column - col),
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((s, col)) = start {
        let end = line
            .char_indices()
            .find(|&(i, c)| i >= s && (c == '#' || c.is_whitespace()))
            .map_or(line.len(), |(i, _)| i);
        let text = &line[s..end];
        tokens.push(Token {
            text,
            span: SourceSpan::new(line_no, col, text.chars().count()),
        });
    }
    tokens
}

/// Span covering `tokens` from the first to the last.
fn cover(tokens: &[Token<'_>]) -> SourceSpan {
    let first = tokens[0].span;
    let last = tokens[tokens.len() - 1].span;
    SourceSpan::new(
        first.line,
        first.column,
        last.column + last.length - first.column,
    )
}

/// Zero-width span just past the last token, for "expected more" errors.
fn after(tokens: &[Token<'_>]) -> SourceSpan {
    let last = tokens[tokens.len() - 1].span;
    SourceSpan::new(last.line, last.column + last.length, 0)
}

fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

fn is_decimal(text: &str) -> bool {
    let body = text.strip_prefix(['+', '-']).unwrap_or(text);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    match frac {
        None => !int.is_empty() && digits(int),
        Some(f) => digits(int) && digits(f) && !(int.is_empty() && f.is_empty()),
    }
}

type LineResult<T> = Result<T, Diagnostic>;

fn syntax(span: SourceSpan, message: impl Into<String>) -> Diagnostic {
    Diagnostic::error(DiagnosticCode::Syntax, span, message)
}

struct LineParser<'t, 'a> {
    tokens: &'t [Token<'a>],
    pos: usize,
}

impl<'t, 'a> LineParser<'t, 'a> {
    fn new(tokens: &'t [Token<'a>]) -> Self {
        Self { tokens, pos: 1 }
    }

    fn next(&mut self, what: &str) -> LineResult<Token<'a>> {
        match self.tokens.get(self.pos) {
            Some(tok) => {
                self.pos += 1;
                Ok(*tok)
            }
            None => Err(syntax(
                after(self.tokens),
                format!("unexpected end of line, expected {what}"),
            )),
        }
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn keyword(&mut self, kw: &str) -> LineResult<Token<'a>> {
        let tok = self.next(&format!("`{kw}`"))?;
        if tok.is_keyword(kw) {
            Ok(tok)
        } else {
            Err(syntax(
                tok.span,
                format!("unexpected token `{}`, expected `{kw}`", tok.text),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> LineResult<Ident> {
        let tok = self.next(what)?;
        if is_identifier(tok.text) {
            Ok(Ident::new(tok.text, tok.span))
        } else {
            Err(syntax(
                tok.span,
                format!("`{}` is not a valid {what}", tok.text),
            ))
        }
    }

    fn number(&mut self, what: &str) -> LineResult<(f64, SourceSpan)> {
        let tok = self.next(what)?;
        if !is_decimal(tok.text) {
            return Err(syntax(
                tok.span,
                format!("expected {what} as a decimal number, found `{}`", tok.text),
            ));
        }
        match tok.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok((v, tok.span)),
            _ => Err(syntax(tok.span, format!("number `{}` is out of range", tok.text))),
        }
    }

    fn finish(&self) -> LineResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(tok) => Err(syntax(
                tok.span,
                format!("unexpected trailing token `{}`", tok.text),
            )),
        }
    }

    fn clause(&mut self) -> LineResult<ClauseDecl> {
        let variable = self.ident("variable name")?;
        self.keyword("is")?;
        let term = self.ident("term name")?;
        Ok(ClauseDecl { variable, term })
    }
}

fn parse_variable(tokens: &[Token<'_>], role: Role) -> LineResult<VariableDecl> {
    let mut p = LineParser::new(tokens);
    let name = p.ident("variable name")?;
    p.keyword("universe")?;
    let (lo, _) = p.number("universe lower bound")?;
    let (hi, _) = p.number("universe upper bound")?;
    let unit = match p.peek() {
        Some(tok) if tok.is_keyword("unit") => {
            p.pos += 1;
            Some(p.next("unit label")?.text.to_string())
        }
        _ => None,
    };
    p.finish()?;
    Ok(VariableDecl {
        role,
        name,
        lo,
        hi,
        unit,
        terms: Vec::new(),
        span: cover(tokens),
    })
}

fn parse_term(tokens: &[Token<'_>]) -> LineResult<TermDecl> {
    let mut p = LineParser::new(tokens);
    let name = p.ident("term name")?;
    let shape_tok = p.next("`triangle` or `trapezoid`")?;
    let shape = if shape_tok.is_keyword("triangle") {
        ShapeKind::Triangle
    } else if shape_tok.is_keyword("trapezoid") {
        ShapeKind::Trapezoid
    } else {
        return Err(syntax(
            shape_tok.span,
            format!(
                "unknown shape `{}`, expected `triangle` or `trapezoid`",
                shape_tok.text
            ),
        ));
    };
    let first = p.pos;
    let mut points = Vec::with_capacity(shape.arity());
    for i in 0..shape.arity() {
        points.push(p.number(&format!("breakpoint {}", i + 1))?.0);
    }
    p.finish()?;
    Ok(TermDecl {
        name,
        shape,
        points,
        points_span: cover(&tokens[first..]),
        span: cover(tokens),
    })
}

fn parse_rule(tokens: &[Token<'_>]) -> LineResult<RuleDecl> {
    let mut p = LineParser::new(tokens);
    p.keyword("if")?;
    let mut antecedents = vec![p.clause()?];
    loop {
        let tok = p.next("`and` or `then`")?;
        if tok.is_keyword("and") {
            antecedents.push(p.clause()?);
        } else if tok.is_keyword("then") {
            break;
        } else {
            return Err(syntax(
                tok.span,
                format!("unexpected token `{}`, expected `and` or `then`", tok.text),
            ));
        }
    }
    let consequent = p.clause()?;
    p.finish()?;
    Ok(RuleDecl {
        antecedents,
        consequent,
        span: cover(tokens),
    })
}

/// Parses a definition file. On failure every syntax error found is
/// returned, each with its line and column.
pub fn parse(text: &str) -> Result<FisDocument, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut system: Option<Ident> = None;
    let mut variables: Vec<VariableDecl> = Vec::new();
    let mut rules = Vec::new();
    // Some(true): inside a well-formed variable block; Some(false): inside a
    // block whose header failed, so its terms are skipped quietly.
    let mut block: Option<bool> = None;

    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = tokenize(line, idx + 1);
        let Some(head) = tokens.first() else { continue };

        if head.is_keyword("system") {
            block = None;
            let mut p = LineParser::new(&tokens);
            let parsed = p.ident("system name").and_then(|id| p.finish().map(|_| id));
            match parsed {
                Ok(id) if system.is_some() => diags.push(Diagnostic::error(
                    DiagnosticCode::DuplicateSystem,
                    id.span,
                    "duplicate `system` declaration",
                )),
                Ok(id) => system = Some(id),
                Err(d) => diags.push(d),
            }
        } else if head.is_keyword("input") || head.is_keyword("output") {
            let role = if head.is_keyword("input") {
                Role::Input
            } else {
                Role::Output
            };
            match parse_variable(&tokens, role) {
                Ok(var) => {
                    variables.push(var);
                    block = Some(true);
                }
                Err(d) => {
                    diags.push(d);
                    block = Some(false);
                }
            }
        } else if head.is_keyword("term") {
            match block {
                Some(true) => match parse_term(&tokens) {
                    Ok(term) => variables
                        .last_mut()
                        .expect("block implies a variable")
                        .terms
                        .push(term),
                    Err(d) => diags.push(d),
                },
                Some(false) => {}
                None => diags.push(syntax(
                    head.span,
                    "`term` must follow an `input` or `output` declaration",
                )),
            }
        } else if head.is_keyword("rule") {
            block = None;
            match parse_rule(&tokens) {
                Ok(rule) => rules.push(rule),
                Err(d) => diags.push(d),
            }
        } else {
            diags.push(syntax(
                head.span,
                format!(
                    "unexpected token `{}`, expected `system`, `input`, `output`, `term` or `rule`",
                    head.text
                ),
            ));
        }
    }

    if system.is_none() {
        diags.push(Diagnostic::error(
            DiagnosticCode::MissingSystem,
            SourceSpan::start(),
            "missing `system <name>` declaration",
        ));
    }
    match system {
        Some(system) if diags.is_empty() => Ok(FisDocument {
            system,
            variables,
            rules,
        }),
        _ => Err(diags),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "system tiny\ninput x universe 0 1\n  term mid triangle 0 0.5 1\n";

    #[test]
    fn minimal_document() {
        let doc = parse(MINIMAL).unwrap();
        assert_eq!(doc.system.name, "tiny");
        assert_eq!(doc.variables.len(), 1);
        assert_eq!(doc.variables[0].terms[0].points, vec![0.0, 0.5, 1.0]);
        assert!(doc.rules.is_empty());
    }

    #[test]
    fn misspelled_rule_keyword() {
        let text = "system s\ninput x universe 0 1\n  term a triangle 0 0.5 1\nrul if x is a then x is a\n";
        let diags = parse(text).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].span.line, 4);
        assert_eq!(diags[0].span.column, 1);
        assert_eq!(diags[0].span.length, 3);
    }

    #[test]
    fn keywords_are_case_insensitive_and_crlf_accepted() {
        let text = "SYSTEM s\r\nInput x Universe 0 10 UNIT m\r\n Term a TRIANGLE 0 5 10 # peak\r\nRULE IF x IS a THEN x IS a\r\n";
        let doc = parse(text).unwrap();
        assert_eq!(doc.variables[0].unit.as_deref(), Some("m"));
        assert_eq!(doc.rules.len(), 1);
    }

    #[test]
    fn reports_several_errors() {
        let text = "system s\ninput x universe 0\nterm a triangle 0 1\nfoo\nrule if x is a then\n";
        let diags = parse(text).unwrap_err();
        let lines: Vec<usize> = diags.iter().map(|d| d.span.line).collect();
        // the orphan term on line 3 belongs to the broken block and is skipped
        assert_eq!(lines, vec![2, 4, 5]);
    }

    #[test]
    fn term_outside_block() {
        let diags = parse("system s\nterm a triangle 0 1 2\n").unwrap_err();
        assert_eq!(diags[0].span.line, 2);
    }

    #[test]
    fn missing_system() {
        let diags = parse("input x universe 0 1\n").unwrap_err();
        assert_eq!(diags[0].code, DiagnosticCode::MissingSystem);
        assert_eq!(diags[0].span, SourceSpan::start());
    }

    #[test]
    fn number_forms() {
        assert!(is_decimal("20.50"));
        assert!(is_decimal("-3"));
        assert!(is_decimal(".5"));
        assert!(is_decimal("5."));
        assert!(!is_decimal("1e3"));
        assert!(!is_decimal("."));
        assert!(!is_decimal("0x10"));
        assert!(!is_decimal("inf"));
        let huge = format!("system s\ninput x universe 0 {}\n", "9".repeat(400));
        assert!(parse(&huge).is_err());
    }

    #[test]
    fn multibyte_columns_count_characters() {
        let diags = parse("system s\ninput x universe 0 1 unit °C extra\n").unwrap_err();
        assert_eq!(diags[0].span.column, 30);
        assert_eq!(diags[0].span.length, 5);
    }
}
