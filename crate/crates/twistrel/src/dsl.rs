//! Parser for twist-word expressions and relation scripts.
//!
//! Grammar (ASCII only, whitespace insignificant):
//!
//! ```text
//! expr    := postfix ('*' postfix)*          composition, left-assoc
//! postfix := primary ('\'' | '^' INT)*       postfix inverse and power
//! primary := NAME | '(' expr ')'
//! NAME    := [A-Za-z][A-Za-z0-9_]*
//! INT     := '-'? [0-9]+
//! ```
//!
//! Composition follows the engine convention: in `f * g` the rightmost
//! factor is applied first. `x'` is sugar for `x^-1`; exponent 0 is legal
//! and denotes the identity mapping class. Names resolve against a
//! surface's curve table at bind time, not parse time.
//!
//! Relation scripts are line-based: `surface <name>` sets the context,
//! `let <id> = <expr>` abbreviates, `assert <expr> == <expr> [engine=<e>]`
//! states a relation, `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("empty input")]
    Empty,
    #[error("line {line}: assert before any surface directive")]
    AssertBeforeSurface { line: usize },
    #[error("line {line}: duplicate let binding `{name}`")]
    DuplicateLet { line: usize, name: String },
    #[error("line {line}: unknown engine tag `{tag}`")]
    UnknownEngine { line: usize, tag: String },
}

/// Abstract syntax of a twist word.
#[derive(Debug, Clone)]
pub enum TwistExpr {
    /// A named twist; carries its source position when parsed.
    Twist(String, Option<Pos>),
    /// n-ary composition (flattened, length >= 2), rightmost applied first.
    Compose(Vec<TwistExpr>),
    /// Integer power, exponent != 1.
    Power(Box<TwistExpr>, i64),
}

impl PartialEq for TwistExpr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (TwistExpr::Twist(a, _), TwistExpr::Twist(b, _)) => a == b,
            (TwistExpr::Compose(a), TwistExpr::Compose(b)) => a == b,
            (TwistExpr::Power(a, n), TwistExpr::Power(b, m)) => n == m && a == b,
            _ => false,
        }
    }
}
impl Eq for TwistExpr {}

impl TwistExpr {
    pub fn twist(name: &str) -> Self {
        TwistExpr::Twist(name.to_string(), None)
    }

    /// Composition smart constructor: flattens nested compositions.
    pub fn compose(parts: Vec<TwistExpr>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                TwistExpr::Compose(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            TwistExpr::Compose(flat)
        }
    }

    /// Power smart constructor: `e^1` collapses to `e`.
    pub fn power(base: TwistExpr, exp: i64) -> Self {
        if exp == 1 {
            base
        } else {
            TwistExpr::Power(Box::new(base), exp)
        }
    }

    /// Names in source order.
    pub fn names(&self) -> Vec<(&str, Option<Pos>)> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<(&'a str, Option<Pos>)>) {
        match self {
            TwistExpr::Twist(n, p) => out.push((n, *p)),
            TwistExpr::Compose(parts) => parts.iter().for_each(|e| e.collect_names(out)),
            TwistExpr::Power(b, _) => b.collect_names(out),
        }
    }

    /// Substitute let-bindings for names.
    pub fn expand_lets(&self, lets: &BTreeMap<String, TwistExpr>) -> TwistExpr {
        match self {
            TwistExpr::Twist(n, p) => match lets.get(n) {
                Some(e) => e.clone(),
                None => TwistExpr::Twist(n.clone(), *p),
            },
            TwistExpr::Compose(parts) => {
                TwistExpr::compose(parts.iter().map(|e| e.expand_lets(lets)).collect())
            }
            TwistExpr::Power(b, n) => TwistExpr::power(b.expand_lets(lets), *n),
        }
    }
}

/// Canonical printing; `parse_expr(format_expr(e))` is structurally `e`.
pub fn format_expr(e: &TwistExpr) -> String {
    fn atom(e: &TwistExpr, out: &mut String) {
        match e {
            TwistExpr::Twist(n, _) => out.push_str(n),
            TwistExpr::Compose(_) => {
                out.push('(');
                out.push_str(&format_expr(e));
                out.push(')');
            }
            TwistExpr::Power(b, n) => {
                atom(b, out);
                if *n == -1 {
                    out.push('\'');
                } else {
                    out.push('^');
                    out.push_str(&n.to_string());
                }
            }
        }
    }
    match e {
        TwistExpr::Compose(parts) => {
            let mut out = String::new();
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" * ");
                }
                atom(p, &mut out);
            }
            out
        }
        other => {
            let mut out = String::new();
            atom(other, &mut out);
            out
        }
    }
}

impl fmt::Display for TwistExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_expr(self))
    }
}

/// Which verification engines a statement requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Engine {
    Homology,
    Exact,
    Both,
}

impl Engine {
    pub fn parse(tag: &str) -> Option<Engine> {
        match tag {
            "homology" => Some(Engine::Homology),
            "exact" => Some(Engine::Exact),
            "both" => Some(Engine::Both),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Homology => "homology",
            Engine::Exact => "exact",
            Engine::Both => "both",
        }
    }
}

/// A parsed equality of two twist words over a named surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationStatement {
    pub surface: String,
    pub lhs: TwistExpr,
    pub rhs: TwistExpr,
    pub engine: Engine,
}

impl fmt::Display for RelationStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} == {}",
            self.surface,
            format_expr(&self.lhs),
            format_expr(&self.rhs)
        )
    }
}

// ---------------------------------------------------------------------------
// expression parser
// ---------------------------------------------------------------------------

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize, col: usize) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line,
            col,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c == b'\n' {
                self.line += 1;
                self.col = 1;
                self.pos += 1;
            } else if c.is_ascii_whitespace() {
                self.col += 1;
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
            self.col += 1;
        }
        c
    }

    fn parse_expr(&mut self) -> Result<TwistExpr, ParseError> {
        let mut parts = vec![self.parse_postfix()?];
        while self.peek() == Some(b'*') {
            self.bump();
            parts.push(self.parse_postfix()?);
        }
        Ok(TwistExpr::compose(parts))
    }

    fn parse_postfix(&mut self) -> Result<TwistExpr, ParseError> {
        let mut e = self.parse_primary()?;
        loop {
            match self.peek() {
                Some(b'\'') => {
                    self.bump();
                    e = TwistExpr::power(e, -1);
                }
                Some(b'^') => {
                    self.bump();
                    let n = self.parse_int()?;
                    e = TwistExpr::power(e, n);
                }
                _ => break,
            }
        }
        Ok(e)
    }

    fn parse_primary(&mut self) -> Result<TwistExpr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let e = self.parse_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.bump();
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let pos = Pos {
                    line: self.line,
                    col: self.col,
                };
                let start = self.pos;
                while let Some(&c) = self.src.get(self.pos) {
                    if c.is_ascii_alphanumeric() || c == b'_' {
                        self.pos += 1;
                        self.col += 1;
                    } else {
                        break;
                    }
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| self.err("invalid utf-8 in name"))?;
                Ok(TwistExpr::Twist(name.to_string(), Some(pos)))
            }
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            self.col += 1;
        }
        let digits_start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                self.pos += 1;
                self.col += 1;
            } else {
                break;
            }
        }
        if self.pos == digits_start {
            return Err(self.err("expected integer exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| self.err("exponent out of range"))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parse a single twist expression.
pub fn parse_expr(text: &str) -> Result<TwistExpr, ParseError> {
    parse_expr_at(text, 1, 1)
}

fn parse_expr_at(text: &str, line: usize, col: usize) -> Result<TwistExpr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut lx = Lexer::new(text, line, col);
    let e = lx.parse_expr()?;
    if !lx.at_end() {
        return Err(lx.err("trailing input after expression"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// relation scripts
// ---------------------------------------------------------------------------

/// One script directive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    Surface(String),
    Let(String, TwistExpr),
    Assert {
        lhs: TwistExpr,
        rhs: TwistExpr,
        engine: Option<Engine>,
        line: usize,
    },
}

/// A parsed and validated relation script.
#[derive(Debug, Clone)]
pub struct Script {
    pub directives: Vec<Directive>,
}

impl Script {
    /// Resolved statements: surface context applied, lets expanded; the
    /// engine defaults to `both`.
    pub fn statements(&self) -> Vec<RelationStatement> {
        let mut surface = String::new();
        let mut lets: BTreeMap<String, TwistExpr> = BTreeMap::new();
        let mut out = Vec::new();
        for d in &self.directives {
            match d {
                Directive::Surface(s) => surface = s.clone(),
                Directive::Let(name, e) => {
                    let expanded = e.expand_lets(&lets);
                    lets.insert(name.clone(), expanded);
                }
                Directive::Assert {
                    lhs, rhs, engine, ..
                } => out.push(RelationStatement {
                    surface: surface.clone(),
                    lhs: lhs.expand_lets(&lets),
                    rhs: rhs.expand_lets(&lets),
                    engine: engine.unwrap_or(Engine::Both),
                }),
            }
        }
        out
    }
}

/// Parse a relation script; directive-level errors (assert before surface,
/// duplicate let, unknown engine tag) are caught here.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut directives = Vec::new();
    let mut have_surface = false;
    let mut let_names: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let uncommented = match raw.find('#') {
            Some(h) => &raw[..h],
            None => raw,
        };
        let line = uncommented.trim();
        // 0-based offset of the trimmed directive within the raw line
        let base = uncommented.len() - uncommented.trim_start().len();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("surface ") {
            let name = rest.trim();
            if name.is_empty() || !is_name(name) {
                return Err(ParseError::Syntax {
                    line: line_no,
                    col: 9,
                    msg: "expected surface name".into(),
                });
            }
            have_surface = true;
            directives.push(Directive::Surface(name.to_string()));
        } else if let Some(rest) = line.strip_prefix("let ") {
            let (name, expr_text) = rest.split_once('=').ok_or(ParseError::Syntax {
                line: line_no,
                col: 1,
                msg: "expected `let <id> = <expr>`".into(),
            })?;
            let name = name.trim();
            if !is_name(name) {
                return Err(ParseError::Syntax {
                    line: line_no,
                    col: 5,
                    msg: format!("invalid let name `{name}`"),
                });
            }
            if let_names.iter().any(|n| n == name) {
                return Err(ParseError::DuplicateLet {
                    line: line_no,
                    name: name.to_string(),
                });
            }
            let_names.push(name.to_string());
            let eq_pos = line.find('=').unwrap();
            let e = parse_expr_at(expr_text, line_no, base + eq_pos + 2)?;
            directives.push(Directive::Let(name.to_string(), e));
        } else if let Some(rest) = line.strip_prefix("assert ") {
            if !have_surface {
                return Err(ParseError::AssertBeforeSurface { line: line_no });
            }
            let (body, engine) = match rest.rfind("engine=") {
                Some(idx) => {
                    let tag = rest[idx + 7..].trim();
                    let engine = Engine::parse(tag).ok_or(ParseError::UnknownEngine {
                        line: line_no,
                        tag: tag.to_string(),
                    })?;
                    (&rest[..idx], Some(engine))
                }
                None => (rest, None),
            };
            let (l, r) = body.split_once("==").ok_or(ParseError::Syntax {
                line: line_no,
                col: 1,
                msg: "expected `assert <expr> == <expr>`".into(),
            })?;
            // columns: "assert " is 7 bytes into the trimmed line
            let lhs = parse_expr_at(l, line_no, base + 8)?;
            let rhs = parse_expr_at(r, line_no, base + 8 + l.len() + 2)?;
            directives.push(Directive::Assert {
                lhs,
                rhs,
                engine,
                line: line_no,
            });
        } else {
            return Err(ParseError::Syntax {
                line: line_no,
                col: 1,
                msg: format!(
                    "unknown directive `{}`",
                    line.split_whitespace().next().unwrap_or("")
                ),
            });
        }
    }
    if directives.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(Script { directives })
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
