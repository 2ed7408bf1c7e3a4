//! Plain-text LP format.
//!
//! ```text
//! # comment until end of line
//! max: 3 x + 2 y;
//! c1: x + y <= 4;
//! c2: x <= 2;
//! ```
//!
//! The first statement is `max:` or `min:` (any case) followed by a linear
//! expression. Every later statement is `NAME: <expr> (<=|>=|=) NUMBER;`.
//! A term is `[coeff] ['*'] ident`; the coefficient defaults to 1. Numbers
//! are decimals with an optional exponent and must be separated from a
//! following identifier by whitespace or `*`. Variables are implicitly
//! nonnegative and are numbered in order of first appearance.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{build_model, Constraint, LpModel, Relation, Sense};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Colon,
    Semi,
    Plus,
    Minus,
    Star,
    Rel(Relation),
    BadRel(String),
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, buf: &mut String, pred: impl Fn(char) -> bool) {
        while let Some(&c) = self.chars.peek() {
            if !pred(c) {
                break;
            }
            buf.push(c);
            self.bump();
        }
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn number(&mut self, line: usize, column: usize) -> Result<Tok, ParseError> {
        let mut s = String::new();
        self.take_while(&mut s, |c| c.is_ascii_digit());
        if self.chars.peek() == Some(&'.') {
            s.push('.');
            self.bump();
            self.take_while(&mut s, |c| c.is_ascii_digit());
        }
        if matches!(self.chars.peek(), Some('e' | 'E')) {
            s.push('e');
            self.bump();
            if let Some(&c @ ('+' | '-')) = self.chars.peek() {
                s.push(c);
                self.bump();
            }
            self.take_while(&mut s, |c| c.is_ascii_digit());
        }
        // Swallow whatever is glued on so the message shows the whole token.
        let clean_len = s.len();
        self.take_while(&mut s, |c| is_ident_char(c) || c == '.');
        let malformed = || self.error(line, column, format!("malformed number `{s}`"));
        if s.len() != clean_len {
            return Err(malformed());
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Tok::Number(v)),
            _ => Err(malformed()),
        }
    }

    fn next_token(&mut self) -> Result<Spanned, ParseError> {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let Some(&c) = self.chars.peek() else {
            return Ok(Spanned {
                tok: Tok::Eof,
                line,
                column,
            });
        };
        let tok = match c {
            ':' | ';' | '+' | '-' | '*' => {
                self.bump();
                match c {
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    _ => Tok::Star,
                }
            }
            '<' | '>' | '=' | '!' => {
                let mut s = String::new();
                self.take_while(&mut s, |c| matches!(c, '<' | '>' | '=' | '!'));
                match s.as_str() {
                    "<=" => Tok::Rel(Relation::Le),
                    ">=" => Tok::Rel(Relation::Ge),
                    "=" => Tok::Rel(Relation::Eq),
                    _ => Tok::BadRel(s),
                }
            }
            c if c.is_ascii_digit() || c == '.' => self.number(line, column)?,
            c if is_ident_start(c) => {
                let mut s = String::new();
                self.take_while(&mut s, is_ident_char);
                Tok::Ident(s)
            }
            other => return Err(self.error(line, column, format!("unexpected character `{other}`"))),
        };
        Ok(Spanned { tok, line, column })
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Number(v) => format!("number `{v}`"),
        Tok::Colon => "`:`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Rel(r) => format!("`{r}`"),
        Tok::BadRel(s) => format!("`{s}`"),
        Tok::Eof => "end of input".into(),
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    var_index: HashMap<String, usize>,
    var_names: Vec<String>,
}

type Terms = Vec<(usize, f64)>;

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, message: impl Into<String>) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let at = self.peek();
        match &at.tok {
            Tok::BadRel(s) => self.error_at(at, format!("unknown relation `{s}`")),
            tok => self.error_at(at, format!("expected {expected}, found {}", describe(tok))),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn variable(&mut self, name: String) -> usize {
        *self.var_index.entry(name.clone()).or_insert_with(|| {
            self.var_names.push(name);
            self.var_names.len() - 1
        })
    }

    /// `[sign] term {(+|-) term}`; stops before `;` or a relation.
    fn expression(&mut self) -> Result<Terms, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek().tok {
                Tok::Plus => {
                    self.advance();
                    1.0
                }
                Tok::Minus => {
                    self.advance();
                    -1.0
                }
                _ if first => 1.0,
                _ => return Ok(terms),
            };
            first = false;
            let coeff = match self.peek().tok {
                Tok::Number(v) => {
                    self.advance();
                    if self.peek().tok == Tok::Star {
                        self.advance();
                    }
                    v
                }
                _ => 1.0,
            };
            match self.peek().tok.clone() {
                Tok::Ident(name) => {
                    self.advance();
                    let j = self.variable(name);
                    terms.push((j, sign * coeff));
                }
                _ => return Err(self.unexpected("a variable name")),
            }
        }
    }

    fn objective(&mut self) -> Result<(Sense, Terms), ParseError> {
        let head = self.advance();
        let sense = match &head.tok {
            Tok::Ident(s) if s.eq_ignore_ascii_case("max") || s.eq_ignore_ascii_case("maximize") => Sense::Maximize,
            Tok::Ident(s) if s.eq_ignore_ascii_case("min") || s.eq_ignore_ascii_case("minimize") => Sense::Minimize,
            tok => {
                return Err(self.error_at(&head, format!("expected `max:` or `min:`, found {}", describe(tok))));
            }
        };
        self.expect(Tok::Colon, "`:`")?;
        if self.peek().tok == Tok::Semi {
            return Err(self.error_at(self.peek(), "empty objective"));
        }
        let terms = self.expression()?;
        self.expect(Tok::Semi, "`+`, `-` or `;`")?;
        Ok((sense, terms))
    }

    fn constraint(&mut self) -> Result<(String, Terms, Relation, f64), ParseError> {
        let head = self.advance();
        let Tok::Ident(name) = head.tok.clone() else {
            self.pos -= 1;
            return Err(self.unexpected("a constraint name"));
        };
        self.expect(Tok::Colon, "`:` after the constraint name")?;
        let terms = self.expression()?;
        let relation = match self.peek().tok {
            Tok::Rel(r) => {
                self.advance();
                r
            }
            _ => return Err(self.unexpected("`<=`, `>=` or `=`")),
        };
        let sign = match self.peek().tok {
            Tok::Minus => {
                self.advance();
                -1.0
            }
            Tok::Plus => {
                self.advance();
                1.0
            }
            _ => 1.0,
        };
        let rhs = match self.peek().tok {
            Tok::Number(v) => {
                self.advance();
                sign * v
            }
            _ => return Err(self.unexpected("a right-hand side number")),
        };
        self.expect(Tok::Semi, "`;`")?;
        Ok((name, terms, relation, rhs))
    }
}

fn dense(terms: &Terms, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for &(j, a) in terms {
        v[j] += a;
    }
    v
}

pub fn parse_lp_text(text: &str) -> Result<LpModel, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let end = t.tok == Tok::Eof;
        tokens.push(t);
        if end {
            break;
        }
    }

    let mut p = Parser {
        tokens,
        pos: 0,
        var_index: HashMap::new(),
        var_names: Vec::new(),
    };
    let (sense, objective) = p.objective()?;

    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    while p.peek().tok != Tok::Eof {
        let at = p.peek().clone();
        let row = p.constraint()?;
        if !seen.insert(row.0.clone()) {
            return Err(p.error_at(&at, format!("duplicate constraint name `{}`", row.0)));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(p.error_at(p.peek(), "model has no constraints"));
    }

    let n = p.var_names.len();
    let constraints = rows
        .into_iter()
        .map(|(name, terms, rel, rhs)| Constraint::new(name, dense(&terms, n), rel, rhs))
        .collect();
    let eof = p.peek().clone();
    build_model(sense, p.var_names, dense(&objective, n), constraints).map_err(|e| ParseError {
        line: eof.line,
        column: eof.column,
        message: e.to_string(),
    })
}

/// Shortest decimal that parses back to exactly `v`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn write_terms(out: &mut String, names: &[String], coeffs: &[f64], keep_zeros: bool) {
    let mut first = true;
    for (name, &a) in names.iter().zip(coeffs) {
        if a == 0.0 && !keep_zeros {
            continue;
        }
        let negative = a.is_sign_negative();
        let sign = match (first, negative) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        let mag = a.abs();
        if mag == 1.0 {
            let _ = write!(out, "{sign}{name}");
        } else {
            let _ = write!(out, "{sign}{} {name}", format_number(mag));
        }
        first = false;
    }
    if first {
        let _ = write!(out, "0 {}", names[0]);
    }
}

/// Serializes a model so that [`parse_lp_text`] reproduces it exactly. The
/// objective lists every variable, zeros included, which fixes the variable
/// order. Names must be valid identifiers.
pub fn write_lp_text(model: &LpModel) -> String {
    let names = model.variable_names();
    let mut out = String::new();
    out.push_str(match model.sense() {
        Sense::Maximize => "max: ",
        Sense::Minimize => "min: ",
    });
    write_terms(&mut out, names, model.objective(), true);
    out.push_str(";\n");
    for c in model.constraints() {
        let _ = write!(out, "{}: ", c.name);
        write_terms(&mut out, names, &c.coefficients, false);
        let _ = writeln!(out, " {} {};", c.relation, format_number(c.rhs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ParseError {
        parse_lp_text(text).expect_err("input should be rejected")
    }

    #[test]
    fn single_variable() {
        let m = parse_lp_text("max: x;\nc1: x <= 1;").unwrap();
        assert_eq!(m.num_variables(), 1);
        assert_eq!(m.num_constraints(), 1);
        assert_eq!(m.constraints()[0].relation, Relation::Le);
        assert_eq!(m.constraints()[0].rhs, 1.0);
    }

    #[test]
    fn toy() {
        let m = parse_lp_text("max: 3 x + 2 y;\nc1: x + y <= 4;\nc2: x <= 2;").unwrap();
        assert_eq!(m.variable_names(), &["x".to_string(), "y".to_string()]);
        assert_eq!(m.objective().as_slice(), &[3.0, 2.0]);
        assert_eq!(m.constraints()[0].coefficients.as_slice(), &[1.0, 1.0]);
        assert_eq!(m.constraints()[1].coefficients.as_slice(), &[1.0, 0.0]);
        assert_eq!(m.constraints()[1].name, "c2");
    }

    #[test]
    fn syntax_variants() {
        let text = "# header\nMIN: -2*a + b # trailing\n  - 0.5e1 c;\nr: a + a - b >= -3;\ns: z = 1.5;\n";
        let m = parse_lp_text(text).unwrap();
        assert_eq!(m.sense(), Sense::Minimize);
        assert_eq!(m.variable_names(), &["a", "b", "c", "z"]);
        assert_eq!(m.objective().as_slice(), &[-2.0, 1.0, -5.0, 0.0]);
        // negative rhs is normalized by flipping the row
        assert_eq!(m.constraints()[0].coefficients.as_slice(), &[-2.0, 1.0, 0.0, 0.0]);
        assert_eq!(m.constraints()[0].relation, Relation::Le);
        assert_eq!(m.constraints()[0].rhs, 3.0);
        assert_eq!(m.constraints()[1].relation, Relation::Eq);
    }

    #[test]
    fn rejects_unknown_relation() {
        let e = err("max: x;\nc1: x < 1;");
        assert_eq!((e.line, e.column), (2, 7));
        assert!(e.message.contains("unknown relation `<`"), "{e}");
        assert!(err("max: x;\nc1: x => 1;").message.contains("unknown relation"));
    }

    #[test]
    fn rejects_malformed_numbers() {
        let e = err("max: 1.2.3 x;\nc: x <= 1;");
        assert_eq!((e.line, e.column), (1, 6));
        assert!(e.message.contains("malformed number"), "{e}");
        assert!(err("max: x;\nc: x <= 1e;").message.contains("malformed"));
        assert!(err("max: 3x;\nc: x <= 1;").message.contains("malformed"));
        assert!(err("max: x;\nc: x <= 1e999;").message.contains("malformed"));
    }

    #[test]
    fn rejects_empty_objective() {
        let e = err("max: ;\nc: x <= 1;");
        assert!(e.message.contains("empty objective"), "{e}");
    }

    #[test]
    fn rejects_duplicate_names() {
        let e = err("max: x;\nc: x <= 1;\nc: x >= 0;");
        assert_eq!(e.line, 3);
        assert!(e.message.contains("duplicate constraint name `c`"), "{e}");
    }

    #[test]
    fn rejects_structural_errors() {
        assert!(err("max: x;").message.contains("no constraints"));
        assert!(err("x: x <= 1;").message.contains("max:"));
        assert!(err("max: x\nc: x <= 1;").message.contains("expected"));
        assert!(err("max: x;\nc: x <= 1").message.contains("`;`"));
        assert!(err("max: x;\nc: x + 2 <= 1;").message.contains("variable name"));
        assert!(err("max: x;\nc: x <= y;").message.contains("right-hand side"));
        assert!(err("max: x;\nc: x <= 1; $").message.contains("unexpected character"));
    }

    #[test]
    fn number_formatting_round_trips() {
        for v in [0.0, 1.0, 0.1, 1.0 / 3.0, 1_823_806.45, 1e-7, 2.5e20, -7.25, 5.52175] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_number(1e-7), "1e-7");
        assert_eq!(format_number(765_056.25), "765056.25");
    }

    #[test]
    fn writer_output() {
        let m = parse_lp_text("min: 3 x - y + 0 z;\nc1: x - 2.5 y <= 4;\nc2: 0 x = 0;").unwrap();
        let text = write_lp_text(&m);
        assert_eq!(text, "min: 3 x - y + 0 z;\nc1: x - 2.5 y <= 4;\nc2: 0 x = 0;\n");
        assert_eq!(parse_lp_text(&text).unwrap(), m);
    }
}
