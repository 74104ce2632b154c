use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Numeric constant with a total order, so it can live inside ordered fact sets.
#[derive(Clone, Copy, Debug)]
pub struct Number(f64);

impl Number {
    /// Wraps a float, folding `-0.0` into `0.0`.
    pub fn new(value: f64) -> Self {
        if value == 0.0 {
            Number(0.0)
        } else {
            Number(value)
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}

impl Eq for Number {}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Hash for Number {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl From<f64> for Number {
    fn from(value: f64) -> Self {
        Number::new(value)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A rule term: variable, symbolic constant or numeric constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Sym(String),
    Num(Number),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Term::Sym(name.into())
    }

    pub fn num(value: f64) -> Self {
        Term::Num(Number::new(value))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Term::Num(n) => Some(n.get()),
            _ => None,
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Sym(s) if is_ident(s) => write!(f, "{s}"),
            Term::Sym(s) => write!(f, "\"{s}\""),
            Term::Num(n) => write!(f, "{n}"),
        }
    }
}

/// A predicate applied to one or more terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, terms: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), terms }
    }

    pub fn is_ground(&self) -> bool {
        self.terms.iter().all(|t| !t.is_var())
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            _ => None,
        })
    }

    /// Replaces bound variables with their values.
    pub fn substitute(&self, binding: &Binding) -> Atom {
        Atom { predicate: self.predicate.clone(), terms: self.terms.iter().map(|t| binding.resolve(t)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// A Horn-style rule: conjunctive body implies every head atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub body: Vec<Atom>,
    pub head: Vec<Atom>,
}

fn write_conjunction(f: &mut fmt::Formatter<'_>, atoms: &[Atom]) -> fmt::Result {
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_conjunction(f, &self.body)?;
        write!(f, " -> ")?;
        write_conjunction(f, &self.head)?;
        write!(f, ";")
    }
}

/// Renders a rule list in the DSL, one rule per line.
pub fn pretty_print(rules: &[Rule]) -> String {
    let mut out = String::new();
    for r in rules {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

/// Variable assignment produced by matching or resolution.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding(BTreeMap<String, Term>);

impl Binding {
    pub fn new() -> Self {
        Binding(BTreeMap::new())
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn insert(&mut self, var: impl Into<String>, value: Term) {
        self.0.insert(var.into(), value);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.0.iter()
    }

    /// Follows variable chains until a constant or an unbound variable.
    pub fn resolve(&self, term: &Term) -> Term {
        let mut current = term;
        let mut hops = 0;
        while let Term::Var(v) = current {
            match self.0.get(v) {
                Some(next) if hops <= self.0.len() => {
                    current = next;
                    hops += 1;
                }
                _ => break,
            }
        }
        current.clone()
    }

    pub fn is_bound(&self, term: &Term) -> bool {
        !self.resolve(term).is_var()
    }
}

impl FromIterator<(String, Term)> for Binding {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Binding(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_folds_negative_zero() {
        assert_eq!(Number::new(-0.0), Number::new(0.0));
        assert_eq!(Term::num(-0.0), Term::num(0.0));
    }

    #[test]
    fn symbols_that_are_not_identifiers_are_quoted() {
        assert_eq!(Term::sym("Free").to_string(), "Free");
        assert_eq!(Term::sym("two words").to_string(), "\"two words\"");
        assert_eq!(Term::sym("9lives").to_string(), "\"9lives\"");
    }

    #[test]
    fn binding_resolves_chains() {
        let mut b = Binding::new();
        b.insert("x", Term::var("y"));
        b.insert("y", Term::sym("m1"));
        assert_eq!(b.resolve(&Term::var("x")), Term::sym("m1"));
        assert_eq!(b.resolve(&Term::var("z")), Term::var("z"));
    }
}
