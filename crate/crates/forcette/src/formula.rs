//! The forcing language: abstract syntax, parser, printer, substitution,
//! and bounded formula enumeration.
//!
//! Grammar, loosest to tightest: `<->`, `->` (right-associative), `|`,
//! `&`, then `~` and the quantifiers, then atoms `t = t` / `t in t` and
//! parenthesized formulas. A quantifier's scope extends as far right as
//! possible, so `forall x. A & B` binds `A & B`. An identifier is a
//! variable when bound by an enclosing quantifier and otherwise must be a
//! declared name constant; binding shadows declarations.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A term of the forcing language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn ident(&self) -> &str {
        match self {
            Term::Var(s) | Term::Const(s) => s,
        }
    }
}

/// A formula of the forcing language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Mem(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }
    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }
    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    /// Free variables, in sorted order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            };
            match f {
                Formula::Eq(a, b) | Formula::Mem(a, b) => {
                    term(a, bound, out);
                    term(b, bound, out);
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Implies(l, r)
                | Formula::Iff(l, r) => {
                    go(l, bound, out);
                    go(r, bound, out);
                }
                Formula::Forall(v, g) | Formula::Exists(v, g) => {
                    bound.push(v.clone());
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Connective nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Mem(..) => 0,
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => 1 + g.depth(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", to_text(self))
    }
}

/// Capture-avoiding substitution of the constant `c` for free occurrences
/// of the variable `v`. Constants cannot be captured, and quantifiers
/// binding `v` shield their body.
pub fn substitute(f: &Formula, v: &str, c: &str) -> Formula {
    let term = |t: &Term| match t {
        Term::Var(x) if x == v => Term::Const(c.to_string()),
        other => other.clone(),
    };
    match f {
        Formula::Eq(a, b) => Formula::Eq(term(a), term(b)),
        Formula::Mem(a, b) => Formula::Mem(term(a), term(b)),
        Formula::Not(g) => Formula::not(substitute(g, v, c)),
        Formula::And(l, r) => Formula::and(substitute(l, v, c), substitute(r, v, c)),
        Formula::Or(l, r) => Formula::or(substitute(l, v, c), substitute(r, v, c)),
        Formula::Implies(l, r) => Formula::implies(substitute(l, v, c), substitute(r, v, c)),
        Formula::Iff(l, r) => Formula::iff(substitute(l, v, c), substitute(r, v, c)),
        Formula::Forall(x, _) if x == v => f.clone(),
        Formula::Exists(x, _) if x == v => f.clone(),
        Formula::Forall(x, g) => Formula::forall(x, substitute(g, v, c)),
        Formula::Exists(x, g) => Formula::exists(x, substitute(g, v, c)),
    }
}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Eq,
    In,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Forall,
    Exists,
    Dot,
}

#[derive(Clone, Debug)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let here = (line, col);
        let mut push = |tok: Tok, n: usize| {
            out.push(Lexed { tok, line: here.0, col: here.1 });
            n
        };
        let advance = match c {
            '\n' => {
                line += 1;
                col = 0;
                1
            }
            c if c.is_whitespace() => 1,
            '(' => push(Tok::LParen, 1),
            ')' => push(Tok::RParen, 1),
            '=' => push(Tok::Eq, 1),
            '~' => push(Tok::Not, 1),
            '&' => push(Tok::And, 1),
            '|' => push(Tok::Or, 1),
            '.' => push(Tok::Dot, 1),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Implies, 2),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Iff, 3)
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match word.as_str() {
                    "in" => Tok::In,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word),
                };
                push(tok, j - start)
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        i += advance;
        col += advance;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    is_const: &'a dyn Fn(&str) -> bool,
    scope: Vec<String>,
    end_line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|l| (l.line, l.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|l| l.tok.clone());
        self.pos += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut acc = self.imp()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let rhs = self.imp()?;
            acc = Formula::iff(acc, rhs);
        }
        Ok(acc)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.imp()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut acc = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let var = match self.bump() {
                    Some(Tok::Ident(v)) => v,
                    _ => return Err(self.err("expected a variable after the quantifier")),
                };
                self.expect(Tok::Dot, "`.` after the bound variable")?;
                self.scope.push(var.clone());
                let body = self.formula()?;
                self.scope.pop();
                Ok(if universal {
                    Formula::forall(&var, body)
                } else {
                    Formula::exists(&var, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        let lhs = self.term()?;
        match self.bump() {
            Some(Tok::Eq) => Ok(Formula::Eq(lhs, self.term()?)),
            Some(Tok::In) => Ok(Formula::Mem(lhs, self.term()?)),
            _ => {
                self.pos -= 1;
                Err(self.err("expected `=` or `in`"))
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let (line, col) = self.here();
        match self.bump() {
            Some(Tok::Ident(id)) => {
                if self.scope.iter().rev().any(|v| v == &id) {
                    Ok(Term::Var(id))
                } else if (self.is_const)(&id) {
                    Ok(Term::Const(id))
                } else {
                    Err(Error::UnknownIdentifier(format!("{id} at {line}:{col}")))
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected an identifier"))
            }
        }
    }
}

/// Parse a formula. `is_const` decides whether an unbound identifier is a
/// declared name constant; anything else is an unknown-identifier error.
pub fn parse(src: &str, is_const: &dyn Fn(&str) -> bool) -> Result<Formula> {
    let toks = lex(src)?;
    let end_line = src.lines().count().max(1);
    let end_col = src.lines().last().map(|l| l.len() + 1).unwrap_or(1);
    let mut p = Parser {
        toks,
        pos: 0,
        is_const,
        scope: Vec::new(),
        end_line,
        end_col,
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after formula"));
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// printer
// ---------------------------------------------------------------------------

/// Render with minimal parentheses; `parse(to_text(f))` returns `f`.
pub fn to_text(f: &Formula) -> String {
    go(f, 0, true)
}

/// `min_level` is the loosest level allowed bare at this position, and
/// `rightmost` says whether the printed text extends to the end of the
/// enclosing scope, which is what lets a quantifier print without parens.
fn go(f: &Formula, min_level: u8, rightmost: bool) -> String {
    match f {
        Formula::Eq(a, b) => format!("{} = {}", a.ident(), b.ident()),
        Formula::Mem(a, b) => format!("{} in {}", a.ident(), b.ident()),
        Formula::Iff(l, r) => {
            let body = format!("{} <-> {}", go(l, 1, false), go(r, 2, rightmost));
            if min_level > 1 {
                format!("({body})")
            } else {
                body
            }
        }
        Formula::Implies(l, r) => {
            let body = format!("{} -> {}", go(l, 3, false), go(r, 2, rightmost));
            if min_level > 2 {
                format!("({body})")
            } else {
                body
            }
        }
        Formula::Or(l, r) => {
            let body = format!("{} | {}", go(l, 3, false), go(r, 4, rightmost));
            if min_level > 3 {
                format!("({body})")
            } else {
                body
            }
        }
        Formula::And(l, r) => {
            let body = format!("{} & {}", go(l, 4, false), go(r, 5, rightmost));
            if min_level > 4 {
                format!("({body})")
            } else {
                body
            }
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::Not(_) | Formula::Forall(..) | Formula::Exists(..) => {
                format!("~{}", go(g, 5, rightmost))
            }
            _ => format!("~({})", go_top(g)),
        },
        Formula::Forall(v, g) => {
            let body = format!("forall {v}. {}", go_top(g));
            if rightmost && min_level <= 5 {
                body
            } else {
                format!("({body})")
            }
        }
        Formula::Exists(v, g) => {
            let body = format!("exists {v}. {}", go_top(g));
            if rightmost && min_level <= 5 {
                body
            } else {
                format!("({body})")
            }
        }
    }
}

fn go_top(f: &Formula) -> String {
    go(f, 0, true)
}

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

/// Which connectives a bounded enumeration closes under.
#[derive(Clone, Copy, Debug)]
pub struct Connectives {
    pub not: bool,
    pub and: bool,
    pub or: bool,
    pub implies: bool,
    pub iff: bool,
    pub forall: bool,
    pub exists: bool,
}

impl Connectives {
    pub fn all() -> Self {
        Connectives {
            not: true,
            and: true,
            or: true,
            implies: true,
            iff: true,
            forall: true,
            exists: true,
        }
    }

    pub fn propositional() -> Self {
        Connectives {
            forall: false,
            exists: false,
            ..Connectives::all()
        }
    }

    pub fn not_only() -> Self {
        Connectives {
            not: true,
            and: false,
            or: false,
            implies: false,
            iff: false,
            forall: false,
            exists: false,
        }
    }
}

/// All formulas over the given atoms closed under the selected connectives
/// up to `depth`, deduplicated, in construction order. Quantifiers wrap a
/// formula once per free variable. Errors when the count exceeds `cap`.
///
/// Each round only combines pairs involving the previous round's additions:
/// anything else was already produced, so no hashing or membership test is
/// needed and every output is built exactly once.
pub fn enumerate_formulas(
    atoms: &[Formula],
    depth: usize,
    conn: Connectives,
    cap: usize,
) -> Result<Vec<Formula>> {
    let mut out: Vec<Formula> = Vec::new();
    for a in atoms {
        if out.iter().all(|f| f != a) {
            out.push(a.clone());
        }
    }
    let mut new_begin = 0usize;
    for _ in 0..depth {
        let level_end = out.len();
        if conn.not {
            for i in new_begin..level_end {
                let f = out[i].clone();
                out.push(Formula::not(f));
            }
        }
        let binaries: [(bool, fn(Formula, Formula) -> Formula); 4] = [
            (conn.and, Formula::and),
            (conn.or, Formula::or),
            (conn.implies, Formula::implies),
            (conn.iff, Formula::iff),
        ];
        for (enabled, mk) in binaries {
            if !enabled {
                continue;
            }
            for i in 0..level_end {
                for j in 0..level_end {
                    if i >= new_begin || j >= new_begin {
                        let (f, g) = (out[i].clone(), out[j].clone());
                        out.push(mk(f, g));
                    }
                }
            }
        }
        if conn.forall || conn.exists {
            for i in new_begin..level_end {
                for v in out[i].free_vars() {
                    if conn.forall {
                        let f = out[i].clone();
                        out.push(Formula::forall(&v, f));
                    }
                    if conn.exists {
                        let f = out[i].clone();
                        out.push(Formula::exists(&v, f));
                    }
                }
            }
        }
        if out.len() > cap {
            return Err(Error::CapExceeded(format!(
                "formula enumeration exceeds cap {cap}"
            )));
        }
        new_begin = level_end;
    }
    Ok(out)
}

/// Closed-form count for a quantifier-free enumeration with `a` atoms and
/// `b` binary connectives: `T(0) = a`, `T(d+1) = a + T(d) + b T(d)^2`.
pub fn propositional_count(atoms: usize, binaries: usize, depth: usize) -> usize {
    let mut t = atoms;
    for _ in 0..depth {
        t = atoms + t + binaries * t * t;
    }
    t
}
