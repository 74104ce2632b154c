use std::collections::{BTreeMap, BTreeSet};

use ontodem_ontology::ActionId;
use ontodem_rules::{forward_chain, FactBase, Rule, Term, DEFAULT_MAX_ITERATIONS};

use crate::action_set::ActionSet;
use crate::error::ActionError;

pub const HAS_PRIORITY_OVER: &str = "hasPriorityOver";
pub const MUST_PRECEDE: &str = "mustPrecede";

fn closure_with(actions: &ActionSet, rules: &[Rule], state: &FactBase) -> Result<FactBase, ActionError> {
    let mut facts = state.clone();
    for e in actions.entries() {
        facts.extend(e.facts.iter().cloned());
    }
    Ok(forward_chain(rules, &facts, DEFAULT_MAX_ITERATIONS)?)
}

/// Index pairs `(i, j)` for derived `predicate(a_i, a_j)` facts, `i != j`.
fn edges(actions: &ActionSet, closure: &FactBase, predicate: &str) -> BTreeSet<(usize, usize)> {
    let index: BTreeMap<&str, usize> = actions.ids().enumerate().map(|(k, id)| (id.as_str(), k)).collect();
    closure
        .tuples(predicate)
        .filter_map(|t| match t.as_slice() {
            [Term::Sym(a), Term::Sym(b)] => Some((*index.get(a.as_str())?, *index.get(b.as_str())?)),
            _ => None,
        })
        .filter(|(a, b)| a != b)
        .collect()
}

/// Some cycle in the graph restricted to `nodes`, if any.
fn find_cycle(nodes: &BTreeSet<usize>, edges: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn visit(
        n: usize,
        nodes: &BTreeSet<usize>,
        edges: &BTreeSet<(usize, usize)>,
        mark: &mut BTreeMap<usize, Mark>,
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        mark.insert(n, Mark::Active);
        stack.push(n);
        for &(_, m) in edges.range((n, 0)..=(n, usize::MAX)) {
            if !nodes.contains(&m) {
                continue;
            }
            match mark[&m] {
                Mark::Active => {
                    let at = stack.iter().position(|&s| s == m).expect("active node on stack");
                    let mut cycle = stack[at..].to_vec();
                    cycle.push(m);
                    return Some(cycle);
                }
                Mark::New => {
                    if let Some(c) = visit(m, nodes, edges, mark, stack) {
                        return Some(c);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        mark.insert(n, Mark::Done);
        None
    }
    let mut mark: BTreeMap<usize, Mark> = nodes.iter().map(|&n| (n, Mark::New)).collect();
    for &n in nodes {
        if mark[&n] == Mark::New {
            if let Some(c) = visit(n, nodes, edges, &mut mark, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

fn ids_of(actions: &ActionSet, idx: &[usize]) -> Vec<ActionId> {
    idx.iter().map(|&k| actions.entries()[k].id.clone()).collect()
}

/// Picks the highest-priority action among `candidates`, listed in RL
/// rank order. An action is maximal when no other candidate has derived
/// priority over it; the best-ranked maximal action wins.
pub fn prioritize_action(candidates: &ActionSet, rules: &[Rule], state: &FactBase) -> Result<ActionId, ActionError> {
    if candidates.is_empty() {
        return Err(ActionError::NoCandidates);
    }
    let closure = closure_with(candidates, rules, state)?;
    let over = edges(candidates, &closure, HAS_PRIORITY_OVER);
    let all: BTreeSet<usize> = (0..candidates.len()).collect();
    if let Some(cycle) = find_cycle(&all, &over) {
        return Err(ActionError::CyclicPriority(ids_of(candidates, &cycle)));
    }
    let dominated: BTreeSet<usize> = over.iter().map(|&(_, b)| b).collect();
    let best = (0..candidates.len()).find(|k| !dominated.contains(k)).expect("acyclic order has a maximal element");
    Ok(candidates.entries()[best].id.clone())
}

/// Orders scheduled actions so every derived `mustPrecede(a, b)` puts `a`
/// before `b`. Among ready actions the one with priority over the most
/// scheduled actions goes first, then submission order.
pub fn prioritize_execution(
    scheduled: &ActionSet,
    rules: &[Rule],
    state: &FactBase,
) -> Result<Vec<ActionId>, ActionError> {
    let closure = closure_with(scheduled, rules, state)?;
    let precede = edges(scheduled, &closure, MUST_PRECEDE);
    let over = edges(scheduled, &closure, HAS_PRIORITY_OVER);
    let n = scheduled.len();
    let mut priority = vec![0usize; n];
    for &(a, _) in &over {
        priority[a] += 1;
    }
    let mut indegree = vec![0usize; n];
    for &(_, b) in &precede {
        indegree[b] += 1;
    }
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&k| !done[k] && indegree[k] == 0)
            .min_by(|&a, &b| priority[b].cmp(&priority[a]).then(a.cmp(&b)));
        let Some(k) = next else {
            let rest: BTreeSet<usize> = (0..n).filter(|&k| !done[k]).collect();
            let cycle = find_cycle(&rest, &precede).expect("stuck topological sort has a cycle");
            return Err(ActionError::PrecedenceCycle(ids_of(scheduled, &cycle)));
        };
        done[k] = true;
        order.push(k);
        for &(_, b) in precede.range((k, 0)..=(k, usize::MAX)) {
            indegree[b] -= 1;
        }
    }
    Ok(ids_of(scheduled, &order))
}
