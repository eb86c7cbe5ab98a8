//! Recursive-descent parser for specification files.
//!
//! ```text
//! # comment
//! var v in [0, 20]
//! var a in [-5, 5]
//! spec G[0,100] (v > 5 || a > 0)
//! ```
//!
//! Every comparison is normalized to `f > 0`: `e1 > e2` becomes `e1 - e2`, `e1 < e2` becomes
//! `e2 - e1`, non-strict comparisons are treated like strict ones, `|e| < c` expands to
//! `c - e > 0 && c + e > 0` and chained comparisons `a < b < c` expand to a conjunction.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::ast::{Expr, Formula, TimeInterval, VariableDeclarations};

/// A parsed specification file.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile<S> {
    pub formula: Formula<S>,
    pub decls: VariableDeclarations<S>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Pipe,
    AndAnd,
    OrOr,
    Bang,
    Arrow,
    Gt,
    Ge,
    Lt,
    Le,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Pipe => "|",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Bang => "!",
            Tok::Arrow => "->",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            _ => "?",
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let next = chars.get(i + 1).copied();
        let mut advance = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '!' => Some(Tok::Bang),
            '-' if next == Some('>') => {
                advance = 2;
                Some(Tok::Arrow)
            }
            '-' => Some(Tok::Minus),
            '&' if next == Some('&') => {
                advance = 2;
                Some(Tok::AndAnd)
            }
            '|' if next == Some('|') => {
                advance = 2;
                Some(Tok::OrOr)
            }
            '|' => Some(Tok::Pipe),
            '>' | '<' => {
                let strict = next != Some('=');
                if !strict {
                    advance = 2;
                }
                Some(match (c, strict) {
                    ('>', true) => Tok::Gt,
                    ('>', false) => Tok::Ge,
                    ('<', true) => Tok::Lt,
                    _ => Tok::Le,
                })
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                    j += 1;
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                advance = j - start;
                Some(Tok::Num(chars[start..j].iter().collect()))
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                advance = j - start;
                Some(Tok::Ident(chars[start..j].iter().collect()))
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        if let Some(tok) = tok {
            out.push(Spanned {
                tok,
                line: l0,
                col: c0,
            });
        }
        i += advance;
        col += advance;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Failure annotated with how far the parser got, so alternatives can keep the deepest error.
struct Failure {
    pos: usize,
    err: Error,
}

type PResult<T> = std::result::Result<T, Failure>;

struct Parser<'a, S> {
    toks: Vec<Spanned>,
    pos: usize,
    decls: &'a VariableDeclarations<S>,
}

/// One side of a comparison.
enum Side<S> {
    Plain(Expr<S>),
    Abs(Expr<S>),
}

#[derive(Clone, Copy, PartialEq)]
enum Cmp {
    Greater,
    Less,
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn new(toks: Vec<Spanned>, decls: &'a VariableDeclarations<S>) -> Self {
        Self {
            toks,
            pos: 0,
            decls,
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let sp = &self.toks[self.pos];
        Err(Failure {
            pos: self.pos,
            err: Error::Syntax {
                line: sp.line,
                col: sp.col,
                msg: msg.into(),
            },
        })
    }

    fn fail_with<T>(&self, err: Error) -> PResult<T> {
        Err(Failure { pos: self.pos, err })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!(
                "expected `{}`, found {}",
                tok.symbol(),
                self.peek().describe()
            ))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected `{kw}`, found {}", self.peek().describe()))
        }
    }

    fn number(&mut self, text: &str) -> PResult<S> {
        match text.parse::<S>() {
            Ok(v) => Ok(v),
            Err(_) => self.fail(format!("malformed number `{text}`")),
        }
    }

    /// Signed number or `inf`, used in declarations.
    fn signed_number(&mut self) -> PResult<S> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let v = match self.peek().clone() {
            Tok::Num(text) => {
                let v = self.number(&text)?;
                self.bump();
                v
            }
            Tok::Ident(s) if s == "inf" => {
                self.bump();
                S::infinity()
            }
            other => return self.fail(format!("expected a number, found {}", other.describe())),
        };
        Ok(if negative { -v } else { v })
    }

    fn file(&mut self) -> PResult<SpecFile<S>> {
        let mut decls = VariableDeclarations::new();
        while self.is_keyword("var") {
            self.bump();
            let name = match self.bump() {
                Tok::Ident(name) => name,
                other => {
                    self.pos -= 1;
                    return self.fail(format!(
                        "expected a variable name, found {}",
                        other.describe()
                    ));
                }
            };
            self.expect_keyword("in")?;
            self.expect(Tok::LBracket)?;
            let min = self.signed_number()?;
            self.expect(Tok::Comma)?;
            let max = self.signed_number()?;
            self.expect(Tok::RBracket)?;
            if let Err(e) = decls.declare(name, min, max) {
                return self.fail_with(e);
            }
        }
        self.expect_keyword("spec")?;
        let formula = {
            let mut inner = Parser::new(self.toks.clone(), &decls);
            inner.pos = self.pos;
            let f = inner.formula()?;
            self.pos = inner.pos;
            f
        };
        if *self.peek() != Tok::Eof {
            return self.fail(format!(
                "unexpected {} after formula",
                self.peek().describe()
            ));
        }
        Ok(SpecFile { formula, decls })
    }

    fn formula(&mut self) -> PResult<Formula<S>> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula<S>> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula<S>> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal_keyword(&self) -> Option<char> {
        match self.peek() {
            Tok::Ident(s) if (s == "G" || s == "F") && *self.peek_at(1) == Tok::LBracket => {
                s.chars().next()
            }
            _ => None,
        }
    }

    fn unary(&mut self) -> PResult<Formula<S>> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(op) = self.temporal_keyword() {
            self.bump();
            let interval = self.interval()?;
            let body = self.unary()?;
            return Ok(if op == 'G' {
                Formula::always(interval, body)
            } else {
                Formula::eventually(interval, body)
            });
        }
        if *self.peek() == Tok::LParen {
            let start = self.pos;
            let as_predicate = self.predicate();
            let pred_err = match as_predicate {
                Ok(f) => return Ok(f),
                Err(e) => e,
            };
            self.pos = start;
            return match self.parenthesized() {
                Ok(f) => Ok(f),
                Err(e) if e.pos >= pred_err.pos => Err(e),
                Err(_) => Err(pred_err),
            };
        }
        self.predicate()
    }

    fn parenthesized(&mut self) -> PResult<Formula<S>> {
        self.expect(Tok::LParen)?;
        let lhs = self.formula()?;
        if matches!(self.peek(), Tok::Ident(s) if s == "U") && *self.peek_at(1) == Tok::LBracket {
            self.bump();
            let interval = self.interval()?;
            let rhs = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(Formula::until(interval, lhs, rhs));
        }
        self.expect(Tok::RParen)?;
        Ok(lhs)
    }

    fn time_point(&mut self) -> PResult<Option<S>> {
        match self.peek().clone() {
            Tok::Num(text) => {
                let v = self.number(&text)?;
                self.bump();
                Ok(Some(v))
            }
            Tok::Ident(s) if s == "inf" => {
                self.bump();
                Ok(None)
            }
            Tok::Minus => {
                self.bump();
                let text = match self.peek() {
                    Tok::Num(t) => t.clone(),
                    _ => return self.fail("expected a time value"),
                };
                let v = self.number(&text)?;
                self.fail_with(Error::NegativeEndpoint(format!("-{v}")))
            }
            other => self.fail(format!("expected a time value, found {}", other.describe())),
        }
    }

    fn interval(&mut self) -> PResult<TimeInterval<S>> {
        self.expect(Tok::LBracket)?;
        let at = self.pos;
        let lower = match self.time_point()? {
            Some(v) => v,
            None => {
                self.pos = at;
                return self.fail("interval lower bound must be finite");
            }
        };
        self.expect(Tok::Comma)?;
        let upper = self.time_point()?;
        self.expect(Tok::RBracket)?;
        match TimeInterval::new(lower, upper) {
            Ok(i) => Ok(i),
            Err(e) => {
                self.pos = at;
                self.fail_with(e)
            }
        }
    }

    fn comparison(&mut self) -> Option<Cmp> {
        let cmp = match self.peek() {
            Tok::Gt | Tok::Ge => Cmp::Greater,
            Tok::Lt | Tok::Le => Cmp::Less,
            _ => return None,
        };
        self.bump();
        Some(cmp)
    }

    fn predicate(&mut self) -> PResult<Formula<S>> {
        if self.is_keyword("true") {
            self.bump();
            return Ok(Formula::True);
        }
        let first = self.side()?;
        let Some(op) = self.comparison() else {
            return self.fail(format!(
                "expected a comparison operator, found {}",
                self.peek().describe()
            ));
        };
        let at = self.pos;
        let second = self.side()?;
        if let Some(op2) = self.comparison() {
            let third = self.side()?;
            let mid = match &second {
                Side::Plain(e) => Side::Plain(e.clone()),
                Side::Abs(e) => Side::Abs(e.clone()),
            };
            let a = self.compare(first, op, mid, at)?;
            let b = self.compare(second, op2, third, at)?;
            return Ok(Formula::and(a, b));
        }
        self.compare(first, op, second, at)
    }

    fn compare(&self, lhs: Side<S>, op: Cmp, rhs: Side<S>, at: usize) -> PResult<Formula<S>> {
        // normalize to `big > small`
        let (big, small) = match op {
            Cmp::Greater => (lhs, rhs),
            Cmp::Less => (rhs, lhs),
        };
        match (big, small) {
            (Side::Plain(b), Side::Plain(s)) => Ok(Formula::atom(Expr::difference(b, s))),
            // c > |e|  <=>  c - e > 0 && c + e > 0
            (Side::Plain(c), Side::Abs(e)) => Ok(Formula::and(
                Formula::atom(Expr::difference(c.clone(), e.clone())),
                Formula::atom(Expr::add(c, e)),
            )),
            // |e| > c  <=>  e - c > 0 || -e - c > 0
            (Side::Abs(e), Side::Plain(c)) => Ok(Formula::or(
                Formula::atom(Expr::difference(e.clone(), c.clone())),
                Formula::atom(Expr::difference(Expr::neg(e), c)),
            )),
            (Side::Abs(_), Side::Abs(_)) => {
                let sp = &self.toks[at];
                Err(Failure {
                    pos: at,
                    err: Error::Syntax {
                        line: sp.line,
                        col: sp.col,
                        msg: "comparison between two absolute values is not supported".into(),
                    },
                })
            }
        }
    }

    fn side(&mut self) -> PResult<Side<S>> {
        if *self.peek() == Tok::Pipe {
            self.bump();
            let e = self.expr()?;
            self.expect(Tok::Pipe)?;
            return Ok(Side::Abs(e));
        }
        Ok(Side::Plain(self.expr()?))
    }

    fn expr(&mut self) -> PResult<Expr<S>> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<Expr<S>> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> PResult<Expr<S>> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::neg(self.factor()?))
            }
            Tok::Num(text) => {
                let v = self.number(&text)?;
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::Ident(name) => {
                if !self.decls.contains(&name) {
                    let sp = &self.toks[self.pos];
                    return self.fail_with(Error::UndeclaredVariable {
                        name,
                        line: sp.line,
                        col: sp.col,
                    });
                }
                self.bump();
                Ok(Expr::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => self.fail(format!(
                "expected an expression, found {}",
                other.describe()
            )),
        }
    }
}

/// Parses a full specification file (declarations followed by `spec <formula>`).
pub fn parse_spec<S: Scalar>(src: &str) -> Result<SpecFile<S>> {
    let toks = lex(src)?;
    let empty = VariableDeclarations::new();
    let mut p = Parser::new(toks, &empty);
    p.file().map_err(|f| f.err)
}

/// Parses a bare formula against existing declarations.
pub fn parse_formula<S: Scalar>(src: &str, decls: &VariableDeclarations<S>) -> Result<Formula<S>> {
    let toks = lex(src)?;
    let mut p = Parser::new(toks, decls);
    let f = p.formula().map_err(|f| f.err)?;
    if *p.peek() != Tok::Eof {
        return Err(p
            .fail::<()>(format!("unexpected {} after formula", p.peek().describe()))
            .unwrap_err()
            .err);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decls() -> VariableDeclarations<f64> {
        VariableDeclarations::new()
            .with("v", 0.0, 20.0)
            .unwrap()
            .with("a", -5.0, 5.0)
            .unwrap()
            .with("x", -10.0, 10.0)
            .unwrap()
    }

    fn iv(l: f64, u: f64) -> TimeInterval<f64> {
        TimeInterval::bounded(l, u).unwrap()
    }

    #[test]
    fn running_example_spec() {
        let f = parse_formula("G[0,100] (v > 5 || a > 0)", &decls()).unwrap();
        let expected = Formula::always(
            iv(0.0, 100.0),
            Formula::or(
                Formula::atom(Expr::sub(Expr::var("v"), Expr::Const(5.0))),
                Formula::atom(Expr::var("a")),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn true_literal() {
        assert_eq!(parse_formula("true", &decls()).unwrap(), Formula::True);
    }

    #[test]
    fn liveness_and_unbounded_safety() {
        let f = parse_formula("F[0,10] (x >= 1) && G[0,inf] (x < 2)", &decls()).unwrap();
        let expected = Formula::and(
            Formula::eventually(
                iv(0.0, 10.0),
                Formula::atom(Expr::sub(Expr::var("x"), Expr::Const(1.0))),
            ),
            Formula::always(
                TimeInterval::unbounded(0.0).unwrap(),
                Formula::atom(Expr::sub(Expr::Const(2.0), Expr::var("x"))),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn absolute_value_desugars_to_two_sided_bound() {
        let f = parse_formula("|x| < 0.5", &decls()).unwrap();
        let expected = Formula::and(
            Formula::atom(Expr::sub(Expr::Const(0.5), Expr::var("x"))),
            Formula::atom(Expr::add(Expr::Const(0.5), Expr::var("x"))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn chained_comparison() {
        let f = parse_formula("0.8 < v < 2", &decls()).unwrap();
        let expected = Formula::and(
            Formula::atom(Expr::sub(Expr::var("v"), Expr::Const(0.8))),
            Formula::atom(Expr::sub(Expr::Const(2.0), Expr::var("v"))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parenthesized_arithmetic_is_not_a_formula() {
        let f = parse_formula("(v + a) * 2 > 3", &decls()).unwrap();
        let expected = Formula::atom(Expr::sub(
            Expr::mul(Expr::add(Expr::var("v"), Expr::var("a")), Expr::Const(2.0)),
            Expr::Const(3.0),
        ));
        assert_eq!(f, expected);
    }

    #[test]
    fn until_and_implication() {
        let f = parse_formula("(v > 1 U[0,5] a > 0) -> !x > 0", &decls()).unwrap();
        match f {
            Formula::Implies(lhs, rhs) => {
                assert!(matches!(*lhs, Formula::Until(..)));
                assert!(matches!(*rhs, Formula::Not(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spec_file_with_comments() {
        let src = "# running example\nvar v in [0, 20]\nvar a in [-5, 5]   # accel\n\nspec G[0,100] (v > 5 || a > 0)\n";
        let spec = parse_spec::<f64>(src).unwrap();
        assert_eq!(spec.decls.names(), &["v".to_string(), "a".to_string()]);
        assert_eq!(spec.decls.get("a"), Some((-5.0, 5.0)));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_spec::<f64>("var v in [0, 1]\nspec G[0,1] (v > )").unwrap_err();
        match err {
            Error::Syntax { line, col, .. } => assert_eq!((line, col), (2, 18)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undeclared_variable() {
        let err = parse_spec::<f64>("var v in [0, 1]\nspec G[0,1] (w > 0)").unwrap_err();
        match err {
            Error::UndeclaredVariable { name, line, col } => {
                assert_eq!(name, "w");
                assert_eq!((line, col), (2, 14));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inverted_interval() {
        let err = parse_formula("G[5,1] v > 0", &decls()).unwrap_err();
        assert!(matches!(err, Error::InvertedInterval { .. }), "{err:?}");
    }

    #[test]
    fn negative_endpoint() {
        let err = parse_formula("F[-1,3] v > 0", &decls()).unwrap_err();
        assert!(matches!(err, Error::NegativeEndpoint(_)), "{err:?}");
    }

    #[test]
    fn trailing_garbage() {
        assert!(parse_formula("v > 0 )", &decls()).is_err());
        assert!(parse_spec::<f64>("var v in [0, 1]").is_err());
    }

    #[test]
    fn print_then_parse_is_identity() {
        for src in [
            "G[0,100] (v > 5 || a > 0)",
            "F[0,10] (x >= 1) && G[0,inf] (x < 2)",
            "!(v > 1 && a < -2) -> (x > 0 U[1,2.5] G[0,1] |x| < 3)",
            "v - (a - x) > 2 * (x / (a + 1))",
            "-(-v) > -3",
        ] {
            let f = parse_formula(src, &decls()).unwrap();
            let printed = f.to_string();
            let again = parse_formula(&printed, &decls()).unwrap();
            assert_eq!(f, again, "{src} printed as {printed}");
        }
    }
}
