use std::collections::BTreeSet;

use crate::builtin::{self, eval_builtin};
use crate::error::RuleError;
use crate::facts::FactBase;
use crate::term::{Atom, Binding, Rule, Term};

pub const DEFAULT_MAX_DEPTH: usize = 64;

fn unify_terms(a: &Term, b: &Term, s: &mut Binding) -> bool {
    let (ra, rb) = (s.resolve(a), s.resolve(b));
    match (&ra, &rb) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), _) => {
            s.insert(x.clone(), rb.clone());
            true
        }
        (_, Term::Var(y)) => {
            s.insert(y.clone(), ra.clone());
            true
        }
        _ => ra == rb,
    }
}

fn unify_atoms(a: &Atom, b: &Atom, s: &Binding) -> Option<Binding> {
    if a.predicate != b.predicate || a.terms.len() != b.terms.len() {
        return None;
    }
    let mut out = s.clone();
    for (x, y) in a.terms.iter().zip(&b.terms) {
        if !unify_terms(x, y, &mut out) {
            return None;
        }
    }
    Some(out)
}

fn rename(atom: &Atom, suffix: usize) -> Atom {
    Atom {
        predicate: atom.predicate.clone(),
        terms: atom
            .terms
            .iter()
            .map(|t| match t {
                Term::Var(v) => Term::Var(format!("{v}#{suffix}")),
                other => other.clone(),
            })
            .collect(),
    }
}

struct Solver<'a> {
    rules: &'a [Rule],
    facts: &'a FactBase,
    max_depth: usize,
    fresh: usize,
}

impl Solver<'_> {
    fn pick(&self, goals: &[Atom], s: &Binding) -> usize {
        goals.iter().position(|g| !builtin::is_builtin(g) || builtin::ready(g, s)).unwrap_or(0)
    }

    fn solve(&mut self, goals: Vec<Atom>, s: Binding, depth: usize, out: &mut Vec<Binding>) -> Result<(), RuleError> {
        if goals.is_empty() {
            out.push(s);
            return Ok(());
        }
        let idx = self.pick(&goals, &s);
        let mut rest = goals;
        let goal = rest.remove(idx);

        if builtin::is_builtin(&goal) {
            if let Some(ns) = eval_builtin(&goal, &s)? {
                self.solve(rest, ns, depth, out)?;
            }
            return Ok(());
        }

        let resolved = goal.substitute(&s);
        let candidates: Vec<Vec<Term>> = match resolved.terms.first() {
            Some(f) if !f.is_var() => self.facts.tuples_with_first(&goal.predicate, f).cloned().collect(),
            _ => self.facts.tuples(&goal.predicate).cloned().collect(),
        };
        for tuple in candidates {
            let fact = Atom::new(goal.predicate.clone(), tuple);
            if let Some(ns) = unify_atoms(&resolved, &fact, &s) {
                self.solve(rest.clone(), ns, depth, out)?;
            }
        }

        for rule in self.rules {
            if !rule.head.iter().any(|h| h.predicate == goal.predicate) {
                continue;
            }
            if depth >= self.max_depth {
                return Err(RuleError::DepthLimit { limit: self.max_depth });
            }
            self.fresh += 1;
            let tag = self.fresh;
            for h in &rule.head {
                let h = rename(h, tag);
                if let Some(ns) = unify_atoms(&resolved, &h, &s) {
                    let mut next: Vec<Atom> = rule.body.iter().map(|a| rename(a, tag)).collect();
                    next.extend(rest.iter().cloned());
                    self.solve(next, ns, depth + 1, out)?;
                }
            }
        }
        Ok(())
    }
}

/// Proves `goal` by SLD resolution against `rules` and `facts`.
///
/// Returns every distinct binding of the goal's variables under which the
/// goal holds. A ground goal that holds yields one empty binding. Fails
/// with [`RuleError::DepthLimit`] when a proof branch nests more than
/// `max_depth` rule applications.
pub fn backward_chain(
    rules: &[Rule],
    facts: &FactBase,
    goal: &Atom,
    max_depth: usize,
) -> Result<BTreeSet<Binding>, RuleError> {
    let mut solver = Solver { rules, facts, max_depth, fresh: 0 };
    let mut raw = Vec::new();
    solver.solve(vec![goal.clone()], Binding::new(), 0, &mut raw)?;
    let vars: BTreeSet<&str> = goal.variables().collect();
    Ok(raw
        .into_iter()
        .map(|s| vars.iter().map(|v| ((*v).to_owned(), s.resolve(&Term::var(*v)))).collect::<Binding>())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_atom, parse_rules};

    fn facts(src: &[&str]) -> FactBase {
        src.iter().map(|s| parse_atom(s).unwrap()).collect()
    }

    #[test]
    fn chained_goal() {
        let rules = parse_rules("A(?x) -> B(?x); B(?x) -> C(?x);").unwrap();
        let got = backward_chain(&rules, &facts(&["A(m1)"]), &parse_atom("C(?x)").unwrap(), 64).unwrap();
        let want: BTreeSet<Binding> = [[("x".to_owned(), Term::sym("m1"))].into_iter().collect()].into();
        assert_eq!(got, want);
    }

    #[test]
    fn unprovable_goal_is_empty() {
        let rules = parse_rules("A(?x) -> B(?x);").unwrap();
        let got = backward_chain(&rules, &facts(&["A(m1)"]), &parse_atom("C(?x)").unwrap(), 64).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn ground_fact_goal_yields_one_empty_binding() {
        let got = backward_chain(&[], &facts(&["A(m1)"]), &parse_atom("A(m1)").unwrap(), 64).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got.iter().next().unwrap().is_empty());
    }

    #[test]
    fn builtins_in_bodies() {
        let rules =
            parse_rules("N(?a, ?x), N(?a, ?y), DifferentFrom(?x, ?y), hasSum(?x, ?y, ?s) -> S(?a, ?s);").unwrap();
        let got =
            backward_chain(&rules, &facts(&["N(m, 2)", "N(m, 3)"]), &parse_atom("S(m, ?s)").unwrap(), 64).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got.iter().next().unwrap().get("s"), Some(&Term::num(5.0)));
    }

    #[test]
    fn cyclic_recursion_hits_depth_limit() {
        let rules = parse_rules("E(?x, ?y) -> T(?x, ?y); E(?x, ?y), T(?y, ?z) -> T(?x, ?z);").unwrap();
        let fb = facts(&["E(a, b)", "E(b, a)"]);
        let err = backward_chain(&rules, &fb, &parse_atom("T(a, ?z)").unwrap(), 8).unwrap_err();
        assert_eq!(err, RuleError::DepthLimit { limit: 8 });
    }
}
