use ontodem_ontology::{ConstraintKind, SemanticConstraint};
use ontodem_rules::{forward_chain, match_body, Binding, FactBase, Rule, DEFAULT_MAX_ITERATIONS};

use crate::action_set::ActionSet;
use crate::error::ActionError;

/// Keeps the actions for which every Require pattern and no Forbid pattern
/// holds in the closure of the state facts plus the action's own facts.
pub fn mask_actions(
    actions: &ActionSet,
    state: &FactBase,
    constraints: &[SemanticConstraint],
    rules: &[Rule],
) -> Result<ActionSet, ActionError> {
    if constraints.is_empty() {
        return Ok(actions.clone());
    }
    let base = forward_chain(rules, state, DEFAULT_MAX_ITERATIONS)?;
    let mut feasible = Vec::with_capacity(actions.len());
    for entry in actions.entries() {
        let closure = if entry.facts.is_empty() {
            base.clone()
        } else {
            let mut facts = base.clone();
            facts.extend(entry.facts.iter().cloned());
            forward_chain(rules, &facts, DEFAULT_MAX_ITERATIONS)?
        };
        let mut ok = true;
        for c in constraints {
            let holds = !match_body(&c.pattern, &closure, &Binding::new())?.is_empty();
            if holds != (c.kind == ConstraintKind::Require) {
                ok = false;
                break;
            }
        }
        feasible.push(ok);
    }
    if !feasible.iter().any(|&f| f) {
        return Err(ActionError::EmptyFeasibleSet);
    }
    Ok(actions.select(&feasible))
}
