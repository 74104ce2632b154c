use std::collections::{BTreeMap, BTreeSet};

use crate::term::{Atom, Term};

/// A set of ground atoms, indexed by predicate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactBase {
    by_predicate: BTreeMap<String, BTreeSet<Vec<Term>>>,
    len: usize,
}

impl FactBase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a ground atom. Returns false when the fact was already present.
    ///
    /// # Panics
    ///
    /// Panics if `atom` contains a variable.
    pub fn insert(&mut self, atom: Atom) -> bool {
        assert!(atom.is_ground(), "fact base only holds ground atoms: {atom}");
        let added = self.by_predicate.entry(atom.predicate).or_default().insert(atom.terms);
        if added {
            self.len += 1;
        }
        added
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.by_predicate.get(&atom.predicate).is_some_and(|s| s.contains(&atom.terms))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// All tuples of `predicate`.
    pub fn tuples<'a>(&'a self, predicate: &str) -> impl Iterator<Item = &'a Vec<Term>> + 'a {
        self.by_predicate.get(predicate).into_iter().flatten()
    }

    /// Tuples of `predicate` whose first argument equals `first`.
    pub fn tuples_with_first<'a>(
        &'a self,
        predicate: &str,
        first: &'a Term,
    ) -> impl Iterator<Item = &'a Vec<Term>> + 'a {
        self.by_predicate
            .get(predicate)
            .into_iter()
            .flat_map(move |s| s.range(vec![first.clone()]..))
            .take_while(move |t| t.first() == Some(first))
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.by_predicate.iter().flat_map(|(p, set)| set.iter().map(move |t| Atom::new(p.clone(), t.clone())))
    }
}

impl FromIterator<Atom> for FactBase {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut fb = FactBase::new();
        for a in iter {
            fb.insert(a);
        }
        fb
    }
}

impl Extend<Atom> for FactBase {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        for a in iter {
            self.insert(a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_argument_index() {
        let fb: FactBase = [
            Atom::new("p", vec![Term::sym("a"), Term::num(1.0)]),
            Atom::new("p", vec![Term::sym("a"), Term::num(2.0)]),
            Atom::new("p", vec![Term::sym("b"), Term::num(3.0)]),
            Atom::new("p", vec![Term::sym("a")]),
        ]
        .into_iter()
        .collect();
        let a = Term::sym("a");
        assert_eq!(fb.tuples_with_first("p", &a).count(), 3);
        assert_eq!(fb.len(), 4);
        assert!(!fb.clone().insert(Atom::new("p", vec![Term::sym("a")])));
    }
}
