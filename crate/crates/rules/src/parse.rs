//! Recursive-descent parser for the `.odr` rule language.
//!
//! ```text
//! rulefile := { rule }
//! rule     := body "->" head ";"
//! body     := atom { "," atom }
//! head     := atom { "," atom }
//! atom     := IDENT "(" term { "," term } ")"
//! term     := "?" IDENT | IDENT | NUMBER | '"' chars '"'
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeSet;

use crate::builtin::{self, Builtin};
use crate::error::RuleError;
use crate::term::{Atom, Number, Rule, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Num(f64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Arrow,
    Semi,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> RuleError {
    RuleError::Syntax { line, column, message: message.into() }
}

fn lex(src: &str) -> Result<(Vec<Spanned>, (usize, usize)), RuleError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = simple {
            bump!();
            out.push(Spanned { tok, line: l0, column: c0 });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            bump!();
            bump!();
            out.push(Spanned { tok: Tok::Arrow, line: l0, column: c0 });
            continue;
        }
        if c == '?' {
            bump!();
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            if start == i || chars[start].is_ascii_digit() {
                return Err(syntax(l0, c0, "expected variable name after '?'"));
            }
            let name: String = chars[start..i].iter().collect();
            out.push(Spanned { tok: Tok::Var(name), line: l0, column: c0 });
            continue;
        }
        if c == '"' {
            bump!();
            let start = i;
            while i < chars.len() && chars[i] != '"' {
                bump!();
            }
            if i >= chars.len() {
                return Err(syntax(l0, c0, "unterminated string"));
            }
            let s: String = chars[start..i].iter().collect();
            bump!();
            out.push(Spanned { tok: Tok::Str(s), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            bump!();
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            if i < chars.len() && chars[i] == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                bump!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump!();
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = (i, line, col);
                bump!();
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    bump!();
                }
                if i < chars.len() && chars[i].is_ascii_digit() {
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        bump!();
                    }
                } else {
                    (i, line, col) = save;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text.parse().map_err(|_| syntax(l0, c0, format!("invalid number '{text}'")))?;
            out.push(Spanned { tok: Tok::Num(value), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Spanned { tok: Tok::Ident(s), line: l0, column: c0 });
            continue;
        }
        return Err(syntax(l0, c0, format!("unexpected character '{c}'")));
    }
    Ok((out, (line, col)))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn new(src: &str) -> Result<Self, RuleError> {
        let (toks, eof) = lex(src)?;
        Ok(Parser { toks, pos: 0, eof })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.column)).unwrap_or(self.eof)
    }

    fn error(&self, message: impl Into<String>) -> RuleError {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), RuleError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn atom(&mut self) -> Result<Atom, RuleError> {
        let predicate = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(self.error("expected predicate name")),
        };
        self.pos += 1;
        self.expect(Tok::LParen, "'('")?;
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        self.expect(Tok::RParen, "')' or ','")?;
        Ok(Atom { predicate, terms })
    }

    fn term(&mut self) -> Result<Term, RuleError> {
        let t = match self.peek() {
            Some(Tok::Var(v)) => Term::Var(v.clone()),
            Some(Tok::Ident(s)) | Some(Tok::Str(s)) => Term::Sym(s.clone()),
            Some(Tok::Num(n)) => Term::Num(Number::new(*n)),
            _ => return Err(self.error("expected term")),
        };
        self.pos += 1;
        Ok(t)
    }

    fn conjunction(&mut self) -> Result<Vec<Atom>, RuleError> {
        let mut atoms = vec![self.atom()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            atoms.push(self.atom()?);
        }
        Ok(atoms)
    }

    fn rule(&mut self) -> Result<Rule, RuleError> {
        let body = self.conjunction()?;
        self.expect(Tok::Arrow, "'->' or ','")?;
        let head = self.conjunction()?;
        self.expect(Tok::Semi, "';' or ','")?;
        Ok(Rule { body, head })
    }
}

/// Variables a rule body binds: plain atoms bind all their variables and
/// `hasSum` binds its final argument.
fn bound_by_body(body: &[Atom]) -> BTreeSet<String> {
    let mut bound = BTreeSet::new();
    for a in body {
        match builtin::lookup(&a.predicate) {
            None => bound.extend(a.variables().map(str::to_owned)),
            Some(Builtin::Sum) => {
                if let Some(Term::Var(v)) = a.terms.last() {
                    bound.insert(v.clone());
                }
            }
            Some(_) => {}
        }
    }
    bound
}

/// Checks range restriction and builtin placement for one rule.
pub fn check_rule(index: usize, rule: &Rule) -> Result<(), RuleError> {
    if let Some(a) = rule.head.iter().find(|a| builtin::lookup(&a.predicate).is_some()) {
        return Err(RuleError::BuiltinInHead { rule: index, predicate: a.predicate.clone() });
    }
    for a in &rule.body {
        if let Some(b) = builtin::lookup(&a.predicate) {
            builtin::check_arity(b, a)?;
        }
    }
    let bound = bound_by_body(&rule.body);
    let unbound = rule
        .head
        .iter()
        .chain(rule.body.iter().filter(|a| builtin::lookup(&a.predicate).is_some()))
        .flat_map(|a| a.variables())
        .find(|v| !bound.contains(*v));
    match unbound {
        Some(v) => Err(RuleError::UnsafeRule { rule: index, variable: v.to_owned() }),
        None => Ok(()),
    }
}

/// Parses a rule file. Rule order is preserved and every rule is checked
/// for safety.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, RuleError> {
    let mut p = Parser::new(text)?;
    let mut rules = Vec::new();
    while p.peek().is_some() {
        let rule = p.rule()?;
        check_rule(rules.len(), &rule)?;
        rules.push(rule);
    }
    Ok(rules)
}

/// Parses a bare conjunction such as `assignTo(?m), hasStatus(?m, Failure)`.
pub fn parse_pattern(text: &str) -> Result<Vec<Atom>, RuleError> {
    let mut p = Parser::new(text)?;
    let atoms = p.conjunction()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected input after pattern"));
    }
    Ok(atoms)
}

/// Parses a single atom, e.g. a backward-chaining goal.
pub fn parse_atom(text: &str) -> Result<Atom, RuleError> {
    let mut p = Parser::new(text)?;
    let atom = p.atom()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected input after atom"));
    }
    Ok(atom)
}
