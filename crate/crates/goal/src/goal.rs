use std::collections::BTreeSet;
use std::fmt;

use ontodem_ontology::{concept_weight, InstanceId, ObservationSchema, Ontology, TemporalContext};
use ontodem_rules::{
    forward_chain, match_body, parse_rules, Atom, Binding, FactBase, Rule, Term, DEFAULT_MAX_ITERATIONS,
};
use serde::Deserialize;

use crate::change::ChangeEvaluation;
use crate::error::GoalError;

/// Head predicate of goal-set rules.
pub const ADOPT_GOAL: &str = "adoptGoal";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GoalId(String);

impl GoalId {
    pub fn new(id: impl Into<String>) -> Self {
        GoalId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GoalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoalEntry {
    pub pattern: Vec<Atom>,
    pub goal: GoalId,
    pub reward_fn: String,
}

/// Ordered trigger patterns, each naming a goal and its reward function.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GoalSet {
    entries: Vec<GoalEntry>,
}

impl GoalSet {
    pub fn new(entries: Vec<GoalEntry>) -> Result<Self, GoalError> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(&e.goal) {
                return Err(GoalError::DuplicateGoal(e.goal.clone()));
            }
        }
        Ok(GoalSet { entries })
    }

    /// Parses rules of the form `pattern -> adoptGoal(Goal);` or
    /// `pattern -> adoptGoal(Goal, RewardFn);`. Without a reward function
    /// the goal id names it.
    pub fn parse(text: &str) -> Result<Self, GoalError> {
        let rules = parse_rules(text)?;
        let mut entries = Vec::with_capacity(rules.len());
        for (k, rule) in rules.into_iter().enumerate() {
            let bad = |reason: &str| GoalError::InvalidGoalRule { rule: k, reason: reason.to_owned() };
            let [head] = rule.head.as_slice() else {
                return Err(bad("expected a single adoptGoal head"));
            };
            if head.predicate != ADOPT_GOAL {
                return Err(bad("head predicate must be adoptGoal"));
            }
            let names: Vec<&str> = head
                .terms
                .iter()
                .map(|t| match t {
                    Term::Sym(s) => Ok(s.as_str()),
                    _ => Err(bad("adoptGoal arguments must be constants")),
                })
                .collect::<Result<_, _>>()?;
            let (goal, reward_fn) = match names.as_slice() {
                [g] => (*g, *g),
                [g, r] => (*g, *r),
                _ => return Err(bad("adoptGoal takes one or two arguments")),
            };
            entries.push(GoalEntry { pattern: rule.body, goal: GoalId::new(goal), reward_fn: reward_fn.to_owned() });
        }
        GoalSet::new(entries)
    }

    pub fn entries(&self) -> &[GoalEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GoalDecision {
    Keep,
    Predefined {
        goal: GoalId,
        reward_fn: String,
    },
    /// No predefined goal fits: pursue similarity to the previous state.
    Generated,
}

/// How the problem reward and the generated-goal reward are combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RewardCombiner {
    /// Only the generated reward counts while a generated goal is active.
    #[default]
    Exclusive,
    /// `lambda * problem + (1 - lambda) * generated` while active.
    Weighted { lambda: f64 },
}

impl RewardCombiner {
    pub fn combine(self, problem: f64, generated: f64, generated_active: bool) -> f64 {
        if !generated_active {
            return problem;
        }
        match self {
            RewardCombiner::Exclusive => generated,
            RewardCombiner::Weighted { lambda } => lambda * problem + (1.0 - lambda) * generated,
        }
    }
}

/// Indices of goal-set entries whose pattern holds in the closure of the
/// schema's facts under `rules`, with their bindings.
pub fn matching_goals(
    schema: &ObservationSchema,
    goal_set: &GoalSet,
    rules: &[Rule],
) -> Result<Vec<(usize, Vec<Binding>)>, GoalError> {
    let facts: FactBase = schema.to_facts().into_iter().collect();
    let closure = if rules.is_empty() { facts } else { forward_chain(rules, &facts, DEFAULT_MAX_ITERATIONS)? };
    let mut out = Vec::new();
    for (k, e) in goal_set.entries().iter().enumerate() {
        let bindings = match_body(&e.pattern, &closure, &Binding::new())?;
        if !bindings.is_empty() {
            out.push((k, bindings));
        }
    }
    Ok(out)
}

/// Decides whether to keep the current goal, switch to a predefined one,
/// or generate a state-similarity goal.
///
/// Ties between several matching patterns go to the pattern whose
/// distinguishing atoms (predicates no other match uses) name the most
/// important observed instance; remaining ties go to the earlier entry.
pub fn select_or_generate_goal(
    eval: &ChangeEvaluation,
    schema: &ObservationSchema,
    goal_set: &GoalSet,
    ontology: &Ontology,
    rules: &[Rule],
    ctx: Option<&TemporalContext>,
) -> Result<GoalDecision, GoalError> {
    if eval.case.is_none() {
        return Ok(GoalDecision::Keep);
    }
    let matches = matching_goals(schema, goal_set, rules)?;
    let chosen = match matches.len() {
        0 => return Ok(GoalDecision::Generated),
        1 => matches[0].0,
        _ => {
            let mut best = (f64::NEG_INFINITY, usize::MAX);
            for (k, bindings) in &matches {
                let others: BTreeSet<&str> = matches
                    .iter()
                    .filter(|(j, _)| j != k)
                    .flat_map(|(j, _)| goal_set.entries()[*j].pattern.iter().map(|a| a.predicate.as_str()))
                    .collect();
                let distinguishing: Vec<&Atom> =
                    goal_set.entries()[*k].pattern.iter().filter(|a| !others.contains(a.predicate.as_str())).collect();
                let mut score = 0.0f64;
                for b in bindings {
                    for atom in &distinguishing {
                        for t in &atom.substitute(b).terms {
                            if let Term::Sym(s) = t {
                                let i = InstanceId::from(s.as_str());
                                if schema.concept_of(&i).is_some() {
                                    score = score.max(concept_weight(&i, schema, ontology, ctx)?);
                                }
                            }
                        }
                    }
                }
                if score > best.0 {
                    best = (score, *k);
                }
            }
            best.1
        }
    };
    let e = &goal_set.entries()[chosen];
    Ok(GoalDecision::Predefined { goal: e.goal.clone(), reward_fn: e.reward_fn.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_goal_rules() {
        let g = GoalSet::parse(
            "Order(?o), hasPriority(?o, High) -> adoptGoal(Rush); Machine(?m) -> adoptGoal(Steady, Utilization);",
        )
        .unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.entries()[0].reward_fn, "Rush");
        assert_eq!(g.entries()[1].reward_fn, "Utilization");
    }

    #[test]
    fn rejects_foreign_heads_and_duplicates() {
        assert!(GoalSet::parse("A(?x) -> other(?x);").is_err());
        assert!(matches!(
            GoalSet::parse("A(?x) -> adoptGoal(G); B(?x) -> adoptGoal(G);"),
            Err(GoalError::DuplicateGoal(_))
        ));
    }

    #[test]
    fn combiner_modes() {
        assert_eq!(RewardCombiner::Exclusive.combine(3.0, 1.0, false), 3.0);
        assert_eq!(RewardCombiner::Exclusive.combine(3.0, 1.0, true), 1.0);
        assert_eq!(RewardCombiner::Weighted { lambda: 0.25 }.combine(4.0, 0.0, true), 1.0);
    }
}
