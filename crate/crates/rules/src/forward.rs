use crate::builtin::{self, eval_builtin};
use crate::error::RuleError;
use crate::facts::FactBase;
use crate::term::{Atom, Binding, Rule, Term};

pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

fn unify_tuple(pattern: &[Term], tuple: &[Term], binding: &Binding) -> Option<Binding> {
    if pattern.len() != tuple.len() {
        return None;
    }
    let mut out = binding.clone();
    for (p, v) in pattern.iter().zip(tuple) {
        match out.resolve(p) {
            Term::Var(name) => out.insert(name, v.clone()),
            constant if constant == *v => {}
            _ => return None,
        }
    }
    Some(out)
}

fn join(bindings: Vec<Binding>, atom: &Atom, facts: &FactBase) -> Vec<Binding> {
    let mut out = Vec::new();
    for b in &bindings {
        let first = atom.terms.first().map(|t| b.resolve(t));
        match first {
            Some(ref f) if !f.is_var() => {
                for tuple in facts.tuples_with_first(&atom.predicate, f) {
                    out.extend(unify_tuple(&atom.terms, tuple, b));
                }
            }
            _ => {
                for tuple in facts.tuples(&atom.predicate) {
                    out.extend(unify_tuple(&atom.terms, tuple, b));
                }
            }
        }
    }
    out
}

/// All bindings under which `body` holds in `facts`.
///
/// Plain atoms are joined left to right. A builtin is evaluated as soon as
/// its inputs are bound, which may be later than its textual position.
pub fn match_body(body: &[Atom], facts: &FactBase, start: &Binding) -> Result<Vec<Binding>, RuleError> {
    let mut bindings = vec![start.clone()];
    let mut pending: Vec<&Atom> = Vec::new();
    for atom in body {
        if builtin::is_builtin(atom) {
            pending.push(atom);
        } else {
            bindings = join(bindings, atom, facts);
        }
        if bindings.is_empty() {
            return Ok(bindings);
        }
        loop {
            let probe = &bindings[0];
            let Some(idx) = pending.iter().position(|a| builtin::ready(a, probe)) else {
                break;
            };
            let b = pending.remove(idx);
            let mut next = Vec::with_capacity(bindings.len());
            for binding in &bindings {
                if let Some(nb) = eval_builtin(b, binding)? {
                    next.push(nb);
                }
            }
            bindings = next;
            if bindings.is_empty() {
                return Ok(bindings);
            }
        }
    }
    if let Some(a) = pending.first() {
        let var = a.terms.iter().find(|t| !bindings[0].is_bound(t)).map(|t| t.to_string()).unwrap_or_default();
        return Err(RuleError::Unbound { predicate: a.predicate.clone(), argument: var });
    }
    Ok(bindings)
}

/// Applies every rule once against `facts` and returns the head
/// instances not already present, in deterministic order.
pub fn immediate_consequences(rules: &[Rule], facts: &FactBase) -> Result<Vec<Atom>, RuleError> {
    let mut derived = FactBase::new();
    for rule in rules {
        for b in match_body(&rule.body, facts, &Binding::new())? {
            for h in &rule.head {
                let g = h.substitute(&b);
                if !facts.contains(&g) {
                    derived.insert(g);
                }
            }
        }
    }
    Ok(derived.iter().collect())
}

/// Computes the least fixpoint of `rules` over `facts`.
///
/// Each iteration applies every rule to the current fact set. The result is
/// deterministic. Fails with [`RuleError::IterationLimit`] when new facts are
/// still appearing after `max_iterations` rounds.
pub fn forward_chain(rules: &[Rule], facts: &FactBase, max_iterations: usize) -> Result<FactBase, RuleError> {
    let mut fb = facts.clone();
    for _ in 0..max_iterations {
        let new = immediate_consequences(rules, &fb)?;
        if new.is_empty() {
            return Ok(fb);
        }
        fb.extend(new);
    }
    if immediate_consequences(rules, &fb)?.is_empty() {
        Ok(fb)
    } else {
        Err(RuleError::IterationLimit { limit: max_iterations })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_atom, parse_rules};

    fn facts(src: &[&str]) -> FactBase {
        src.iter().map(|s| parse_atom(s).unwrap()).collect()
    }

    #[test]
    fn two_step_modus_ponens() {
        let rules = parse_rules("A(?x) -> B(?x); B(?x) -> C(?x);").unwrap();
        let out = forward_chain(&rules, &facts(&["A(m1)"]), DEFAULT_MAX_ITERATIONS).unwrap();
        assert_eq!(out, facts(&["A(m1)", "B(m1)", "C(m1)"]));
    }

    #[test]
    fn failure_status_inferred() {
        let rules = parse_rules(
            "JobShopScheduler(?i), Machine(?a), hasLastBrokenStart(?a, ?m), \
             hasLastProcessStart(?a, ?n), isGreater(?m, ?n) -> hasStatus(?a, Failure);",
        )
        .unwrap();
        let fb =
            facts(&["hasLastBrokenStart(m1, 50)", "hasLastProcessStart(m1, 30)", "Machine(m1)", "JobShopScheduler(s)"]);
        let out = forward_chain(&rules, &fb, DEFAULT_MAX_ITERATIONS).unwrap();
        assert!(out.contains(&parse_atom("hasStatus(m1, Failure)").unwrap()));
        assert_eq!(out.len(), fb.len() + 1);
    }

    #[test]
    fn empty_rule_set_is_identity() {
        let fb = facts(&["A(m1)", "B(m2, 3)"]);
        assert_eq!(forward_chain(&[], &fb, 1).unwrap(), fb);
    }

    #[test]
    fn builtin_before_its_inputs_is_deferred() {
        let rules = parse_rules("isLess(?n, 5), N(?x, ?n) -> Small(?x);").unwrap();
        let out = forward_chain(&rules, &facts(&["N(a, 3)", "N(b, 7)"]), 10).unwrap();
        assert!(out.contains(&parse_atom("Small(a)").unwrap()));
        assert!(!out.contains(&parse_atom("Small(b)").unwrap()));
    }

    #[test]
    fn unbounded_sum_hits_iteration_limit() {
        let rules = parse_rules("N(?x), hasSum(?x, 1, ?y) -> N(?y);").unwrap();
        let err = forward_chain(&rules, &facts(&["N(0)"]), 25).unwrap_err();
        assert_eq!(err, RuleError::IterationLimit { limit: 25 });
    }

    #[test]
    fn type_mismatch_propagates() {
        let rules = parse_rules("N(?x), isLess(?x, 3) -> M(?x);").unwrap();
        let err = forward_chain(&rules, &facts(&["N(abc)"]), 10).unwrap_err();
        assert!(matches!(err, RuleError::TypeMismatch { .. }));
    }

    #[test]
    fn fixpoint_reached_exactly_at_limit_is_accepted() {
        let rules = parse_rules("A(?x) -> B(?x);").unwrap();
        let out = forward_chain(&rules, &facts(&["A(m1)"]), 1).unwrap();
        assert_eq!(out.len(), 2);
    }
}
