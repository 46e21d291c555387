//! Lexer and parser for the script language. Statements are separated by
//! newlines or semicolons, `#` starts a comment, and manifold
//! expressions form a prefix mini-language.

use crate::manifold::ManifoldExpr;
use crate::ring::CoefficientRing;
use crate::script::{steps, ArgValue, BaseDecl, Script, StepDecl};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex_statement(text: &str, line: usize, col_offset: usize) -> Result<Vec<Spanned>, ParseError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = col_offset + i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric()
                    || bytes[i] == '_'
                    || (bytes[i] == '-'
                        && i + 1 < bytes.len()
                        && bytes[i + 1].is_ascii_alphabetic()))
            {
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(bytes[start..i].iter().collect()),
                line,
                col,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit())
        {
            let start = i;
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = bytes[start..i].iter().collect();
            let value = text.parse().map_err(|_| ParseError {
                line,
                col,
                message: format!("invalid integer `{text}`"),
            })?;
            out.push(Spanned {
                tok: Tok::Int(value),
                line,
                col,
            });
            continue;
        }
        if "=[](),:".contains(c) {
            out.push(Spanned {
                tok: Tok::Sym(c),
                line,
                col,
            });
            i += 1;
            continue;
        }
        return Err(ParseError {
            line,
            col,
            message: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|s| (s.line, s.col))
            .unwrap_or((self.line, 1));
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Sym(s), ..
            }) if s == c => Ok(()),
            _ => Err(self.err(format!("expected `{c}`"))),
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(s), ..
            }) => Ok(s),
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn expect_int(&mut self) -> Result<i64, ParseError> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Int(v), ..
            }) => Ok(v),
            _ => Err(self.err("expected an integer")),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// A manifold expression possibly containing disc factors, which only
/// base summands may use (and must cancel against the target dimension).
enum RawManifold {
    Expr(ManifoldExpr),
    Disc(usize),
    Product(Box<RawManifold>, Box<RawManifold>),
}

fn parse_raw_manifold(c: &mut Cursor) -> Result<RawManifold, ParseError> {
    let name = c.expect_ident()?;
    match name.as_str() {
        "point" => Ok(RawManifold::Expr(ManifoldExpr::Point)),
        "product" | "connsum" => {
            c.expect_sym('(')?;
            let a = parse_raw_manifold(c)?;
            c.expect_sym(',')?;
            let b = parse_raw_manifold(c)?;
            c.expect_sym(')')?;
            if name == "product" {
                Ok(RawManifold::Product(Box::new(a), Box::new(b)))
            } else {
                let a = resolve_plain(a, c)?;
                let b = resolve_plain(b, c)?;
                Ok(RawManifold::Expr(ManifoldExpr::conn_sum(a, b)))
            }
        }
        "bundle" => {
            c.expect_sym('(')?;
            let kp = c.expect_int()?;
            c.expect_sym(',')?;
            let k = c.expect_int()?;
            c.expect_sym(',')?;
            let e = c.expect_int()?;
            c.expect_sym(')')?;
            if kp < 1 || k < 1 {
                return Err(c.err("bundle dimensions must be positive"));
            }
            Ok(RawManifold::Expr(ManifoldExpr::SphereBundle {
                base: kp as usize,
                fiber: k as usize,
                euler: e,
            }))
        }
        other => {
            if let Some(d) = parse_dim_suffix(other, 'S') {
                // optional "as collar" applies to discs only
                return Ok(RawManifold::Expr(ManifoldExpr::Sphere(d)));
            }
            if let Some(d) = parse_dim_suffix(other, 'D') {
                // swallow the optional "as collar" annotation
                if matches!(c.peek(), Some(Tok::Ident(w)) if w == "as") {
                    c.next();
                    let w = c.expect_ident()?;
                    if w != "collar" {
                        return Err(c.err("expected `collar` after `as`"));
                    }
                }
                return Ok(RawManifold::Disc(d));
            }
            Err(c.err(format!("unknown manifold expression `{other}`")))
        }
    }
}

fn parse_dim_suffix(word: &str, prefix: char) -> Option<usize> {
    let rest = word.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn resolve_plain(raw: RawManifold, c: &Cursor) -> Result<ManifoldExpr, ParseError> {
    match raw {
        RawManifold::Expr(e) => Ok(e),
        RawManifold::Disc(_) => Err(c.err("disc factors may only appear in base summands")),
        RawManifold::Product(a, b) => Ok(ManifoldExpr::product(
            resolve_plain(*a, c)?,
            resolve_plain(*b, c)?,
        )),
    }
}

/// Resolves a base summand: at most one disc factor, which must restore
/// the ambient dimension n.
fn resolve_base_summand(
    raw: RawManifold,
    n: usize,
    c: &Cursor,
) -> Result<ManifoldExpr, ParseError> {
    match raw {
        RawManifold::Product(a, b) => match (*a, *b) {
            (RawManifold::Disc(k), rest) | (rest, RawManifold::Disc(k)) => {
                let m = resolve_plain(rest, c)?;
                if m.dimension() + k != n {
                    return Err(c.err(format!(
                        "collar disc D{k} does not complete {m} to dimension {n}"
                    )));
                }
                Ok(m)
            }
            (a, b) => Ok(ManifoldExpr::product(
                resolve_plain(a, c)?,
                resolve_plain(b, c)?,
            )),
        },
        other => resolve_plain(other, c),
    }
}

fn parse_value(c: &mut Cursor) -> Result<ArgValue, ParseError> {
    match c.peek() {
        Some(Tok::Int(_)) => Ok(ArgValue::Int(c.expect_int()?)),
        Some(Tok::Sym('[')) => {
            c.next();
            // empty list defaults to an integer list
            if matches!(c.peek(), Some(Tok::Sym(']'))) {
                c.next();
                return Ok(ArgValue::IntList(Vec::new()));
            }
            if matches!(c.peek(), Some(Tok::Int(_))) {
                let mut items = vec![c.expect_int()?];
                while matches!(c.peek(), Some(Tok::Sym(','))) {
                    c.next();
                    items.push(c.expect_int()?);
                }
                c.expect_sym(']')?;
                Ok(ArgValue::IntList(items))
            } else {
                let mut items = Vec::new();
                loop {
                    let raw = parse_raw_manifold(c)?;
                    items.push(resolve_plain(raw, c)?);
                    match c.next() {
                        Some(Spanned {
                            tok: Tok::Sym(','), ..
                        }) => continue,
                        Some(Spanned {
                            tok: Tok::Sym(']'), ..
                        }) => break,
                        _ => return Err(c.err("expected `,` or `]`")),
                    }
                }
                Ok(ArgValue::ManifoldList(items))
            }
        }
        Some(Tok::Ident(w)) => match w.as_str() {
            "true" => {
                c.next();
                Ok(ArgValue::Bool(true))
            }
            "false" => {
                c.next();
                Ok(ArgValue::Bool(false))
            }
            w if w == "point"
                || w == "product"
                || w == "connsum"
                || w == "bundle"
                || parse_dim_suffix(w, 'S').is_some() =>
            {
                let raw = parse_raw_manifold(c)?;
                Ok(ArgValue::Manifold(resolve_plain(raw, c)?))
            }
            _ => Ok(ArgValue::Ident(c.expect_ident()?)),
        },
        _ => Err(c.err("expected a value")),
    }
}

fn parse_args(c: &mut Cursor) -> Result<Vec<(String, ArgValue)>, ParseError> {
    let mut args = Vec::new();
    while !c.done() {
        let key = c.expect_ident()?;
        c.expect_sym('=')?;
        let value = parse_value(c)?;
        if args.iter().any(|(k, _)| *k == key) {
            return Err(c.err(format!("duplicate argument `{key}`")));
        }
        args.push((key, value));
    }
    Ok(args)
}

/// Parses one manifold expression from text.
pub fn parse_manifold(text: &str) -> Result<ManifoldExpr, ParseError> {
    let toks = lex_statement(text, 1, 0)?;
    let mut c = Cursor {
        toks,
        pos: 0,
        line: 1,
    };
    let raw = parse_raw_manifold(&mut c)?;
    let m = resolve_plain(raw, &c)?;
    if !c.done() {
        return Err(c.err("trailing input after manifold expression"));
    }
    Ok(m)
}

pub fn parse(text: &str) -> Result<Script, ParseError> {
    let mut coeff: Option<CoefficientRing> = None;
    let mut base: Option<BaseDecl> = None;
    let mut step_list: Vec<StepDecl> = Vec::new();
    let mut names: BTreeSet<String> = BTreeSet::new();

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let without_comment = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let mut col = 0usize;
        for stmt in without_comment.split(';') {
            let toks = lex_statement(stmt, line_no, col)?;
            col += stmt.len() + 1;
            if toks.is_empty() {
                continue;
            }
            let mut c = Cursor {
                toks,
                pos: 0,
                line: line_no,
            };
            let head = c.expect_ident()?;
            match head.as_str() {
                "coeff" => {
                    if coeff.is_some() {
                        return Err(c.err("duplicate coeff declaration"));
                    }
                    let name = c.expect_ident()?;
                    let ring = match name.as_str() {
                        "Z" => CoefficientRing::Integers,
                        "Q" => CoefficientRing::Rationals,
                        "Zmod" => {
                            c.expect_sym(':')?;
                            let m = c.expect_int()?;
                            CoefficientRing::integers_mod(m).map_err(|e| c.err(e.to_string()))?
                        }
                        other => return Err(c.err(format!("unknown coefficient ring `{other}`"))),
                    };
                    if !c.done() {
                        return Err(c.err("trailing input after coeff"));
                    }
                    coeff = Some(ring);
                }
                "base" => {
                    if base.is_some() {
                        return Err(c.err("a script has exactly one base"));
                    }
                    if !step_list.is_empty() {
                        return Err(c.err("the base must precede all steps"));
                    }
                    let kind = c.expect_ident()?;
                    match kind.as_str() {
                        "sg" => {
                            let mut n: Option<usize> = None;
                            let mut summands: Option<Vec<ManifoldExpr>> = None;
                            while !c.done() {
                                match c.peek() {
                                    Some(Tok::Sym('[')) => {
                                        let nn = n.ok_or_else(|| {
                                            c.err("n=... must precede the summand list")
                                        })?;
                                        c.next();
                                        let mut items = Vec::new();
                                        if !matches!(c.peek(), Some(Tok::Sym(']'))) {
                                            loop {
                                                let raw = parse_raw_manifold(&mut c)?;
                                                items.push(resolve_base_summand(raw, nn, &c)?);
                                                match c.next() {
                                                    Some(Spanned {
                                                        tok: Tok::Sym(','), ..
                                                    }) => continue,
                                                    Some(Spanned {
                                                        tok: Tok::Sym(']'), ..
                                                    }) => break,
                                                    _ => return Err(c.err("expected `,` or `]`")),
                                                }
                                            }
                                        } else {
                                            c.next();
                                        }
                                        summands = Some(items);
                                    }
                                    _ => {
                                        let key = c.expect_ident()?;
                                        c.expect_sym('=')?;
                                        if key != "n" {
                                            return Err(
                                                c.err(format!("unknown base argument `{key}`"))
                                            );
                                        }
                                        let v = c.expect_int()?;
                                        if v < 1 {
                                            return Err(c.err("n must be at least 1"));
                                        }
                                        n = Some(v as usize);
                                    }
                                }
                            }
                            let n = n.ok_or_else(|| c.err("base sg needs n=..."))?;
                            base = Some(BaseDecl::SpecialGeneric {
                                n,
                                summands: summands.unwrap_or_default(),
                            });
                        }
                        "disc" | "cs" => {
                            let args = parse_args(&mut c)?;
                            let get = |name: &str| -> Option<i64> {
                                args.iter().find(|(k, _)| k == name).and_then(|(_, v)| {
                                    if let ArgValue::Int(i) = v {
                                        Some(*i)
                                    } else {
                                        None
                                    }
                                })
                            };
                            let n = get("n").ok_or_else(|| c.err("base needs n=..."))?;
                            if n < 1 {
                                return Err(c.err("n must be at least 1"));
                            }
                            if kind == "disc" {
                                if args.len() != 1 {
                                    return Err(c.err("base disc takes only n=..."));
                                }
                                base = Some(BaseDecl::Disc { n: n as usize });
                            } else {
                                let l = get("l").ok_or_else(|| c.err("base cs needs l=..."))?;
                                if l < 0 || args.len() != 2 {
                                    return Err(c.err("base cs takes l=... n=..."));
                                }
                                base = Some(BaseDecl::ConcentricSpheres {
                                    l: l as usize,
                                    n: n as usize,
                                });
                            }
                        }
                        other => return Err(c.err(format!("unknown base kind `{other}`"))),
                    }
                }
                "step" => {
                    if base.is_none() {
                        return Err(c.err("steps must follow the base declaration"));
                    }
                    let kind_name = c.expect_ident()?;
                    let Some(kind) = steps::lookup(&kind_name) else {
                        return Err(c.err(format!("unknown step kind `{kind_name}`")));
                    };
                    let args = parse_args(&mut c)?;
                    // normalize to the canonical argument order so the
                    // abstract script is independent of the input order
                    let order = kind.arg_order();
                    let mut sorted = Vec::with_capacity(args.len());
                    for &key in order {
                        if let Some(pair) = args.iter().find(|(k, _)| k == key) {
                            sorted.push(pair.clone());
                        }
                    }
                    for pair in &args {
                        if !order.contains(&pair.0.as_str()) {
                            sorted.push(pair.clone());
                        }
                    }
                    let decl = StepDecl {
                        kind: kind_name,
                        args: sorted,
                    };
                    kind.check(&decl).map_err(|m| c.err(m))?;
                    if let Some(other) = decl.ident("other") {
                        if other != "disc" && !names.contains(other) {
                            return Err(c.err(format!("step references undefined name `{other}`")));
                        }
                    }
                    if let Some(name) = decl.ident("name") {
                        names.insert(name.to_string());
                    }
                    step_list.push(decl);
                }
                other => return Err(c.err(format!("unknown statement `{other}`"))),
            }
        }
    }
    let base = base.ok_or(ParseError {
        line: text.lines().count().max(1),
        col: 1,
        message: "missing base declaration".into(),
    })?;
    Ok(Script {
        coeff: coeff.unwrap_or(CoefficientRing::Integers),
        base,
        steps: step_list,
    })
}
