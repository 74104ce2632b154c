use std::collections::BTreeMap;

use ontodem_ontology::ConceptId;
use ontodem_rules::{FactBase, Term};
use rand::Rng;
use serde::Deserialize;

use crate::action_set::{id_term, ActionSet};

/// Head predicate linking an action to a concept it benefits:
/// `rewardsConcept(action, Concept)`.
pub const REWARDS_CONCEPT: &str = "rewardsConcept";

/// Trailing-window event rate that sets the hybrid policy weight.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSchedule {
    events: Vec<u64>,
    window: u64,
    unit: f64,
}

impl AlphaSchedule {
    /// # Panics
    ///
    /// Panics if `window` is zero or `unit` is not positive.
    pub fn new(window: u64, unit: f64) -> Self {
        assert!(window > 0, "window must be positive");
        assert!(unit > 0.0, "unit must be positive");
        AlphaSchedule { events: Vec::new(), window, unit }
    }

    /// Records an unforeseen event at step `t`. Repeated steps count once.
    ///
    /// # Panics
    ///
    /// Panics if `t` precedes the last recorded event.
    pub fn record(&mut self, t: u64) {
        match self.events.last() {
            Some(&last) if t == last => {}
            Some(&last) => {
                assert!(t > last, "event at {t} precedes {last}");
                self.events.push(t);
            }
            None => self.events.push(t),
        }
    }

    pub fn events(&self) -> &[u64] {
        &self.events
    }

    /// `min(1, events in (t - window, t] · unit / window)`.
    pub fn alpha(&self, t: u64) -> f64 {
        let lo = self.events.partition_point(|&e| e + self.window <= t);
        let hi = self.events.partition_point(|&e| e <= t);
        ((hi - lo) as f64 * self.unit / self.window as f64).min(1.0)
    }
}

/// Concepts sorted by descending weight, ties by id.
pub fn rank_concepts(weights: &BTreeMap<ConceptId, f64>) -> Vec<(ConceptId, f64)> {
    let mut ranked: Vec<_> = weights.iter().map(|(c, w)| (c.clone(), *w)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

/// Score of each action: summed weight of the concepts it rewards according
/// to `rewardsConcept` facts in `closure`.
pub fn action_concept_scores(actions: &ActionSet, closure: &FactBase, weights: &BTreeMap<ConceptId, f64>) -> Vec<f64> {
    actions
        .ids()
        .map(|id| {
            let subject = id_term(id);
            closure
                .tuples_with_first(REWARDS_CONCEPT, &subject)
                .filter_map(|t| match t.get(1) {
                    Some(Term::Sym(c)) => weights.get(&ConceptId::from(c.as_str())).copied(),
                    _ => None,
                })
                .fold(0.0, |a, w| a + w)
        })
        .collect()
}

/// How action scores become the ontology-side policy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OntoPolicyMode {
    /// All mass on the best-scored action, ties to the lowest index.
    #[default]
    PointMass,
    Softmax {
        temperature: f64,
    },
}

/// Ontology policy over actions, or `None` when no action scores above 0.
pub fn onto_distribution(scores: &[f64], mode: OntoPolicyMode) -> Option<Vec<f64>> {
    if !scores.iter().any(|&s| s > 0.0) {
        return None;
    }
    match mode {
        OntoPolicyMode::PointMass => {
            let best = scores.iter().enumerate().fold(0, |b, (k, s)| if *s > scores[b] { k } else { b });
            let mut d = vec![0.0; scores.len()];
            d[best] = 1.0;
            Some(d)
        }
        OntoPolicyMode::Softmax { temperature } => {
            let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let exp: Vec<f64> = scores.iter().map(|s| ((s - max) / temperature).exp()).collect();
            let z: f64 = exp.iter().sum();
            Some(exp.into_iter().map(|e| e / z).collect())
        }
    }
}

/// `alpha · onto + (1 - alpha) · rl`; without an ontology policy the RL
/// policy is returned unchanged.
pub fn mixture(pi_rl: &[f64], pi_onto: Option<&[f64]>, alpha: f64) -> Vec<f64> {
    match pi_onto {
        None => pi_rl.to_vec(),
        Some(onto) => {
            assert_eq!(onto.len(), pi_rl.len(), "policies over different action counts");
            pi_rl.iter().zip(onto).map(|(r, o)| alpha * o + (1.0 - alpha) * r).collect()
        }
    }
}

/// Inverse-CDF draw from a distribution. Trailing rounding mass goes to
/// the last action with positive probability.
pub fn sample_index<R: Rng + ?Sized>(dist: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (k, p) in dist.iter().enumerate() {
        if *p <= 0.0 {
            continue;
        }
        acc += p;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

/// Draws an action index from the hybrid policy.
pub fn hybrid_select<R: Rng + ?Sized>(pi_rl: &[f64], pi_onto: Option<&[f64]>, alpha: f64, rng: &mut R) -> usize {
    sample_index(&mixture(pi_rl, pi_onto, alpha), rng)
}
