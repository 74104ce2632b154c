use std::fmt;

use ontodem_rl::Method;
use serde::Deserialize;

/// Measurements of the current decision-making situation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TriggerMetrics {
    /// Share of readings that differ from their expected values.
    pub noise_fraction: f64,
    pub missing_fraction: f64,
    /// Number of observed features.
    pub dimensionality: f64,
    /// Ontology distance between consecutive schemas.
    pub ontology_distance: f64,
    pub reward: f64,
    /// Steps the reward signal arrived late.
    pub reward_delay: f64,
    /// Importance of the current observation.
    pub importance: f64,
    pub action_count: f64,
    /// Summed concept weights of the available actions.
    pub action_importance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// Data complexity beyond which an ontology model of the environment pays off.
    pub complexity: f64,
    pub noise: f64,
    pub missing: f64,
    pub dimensionality: f64,
    pub ontology_distance: f64,
    /// Rewards inside `[discrepancy_low, discrepancy_high]` are expected.
    pub discrepancy_low: f64,
    pub discrepancy_high: f64,
    pub reward_delay: f64,
    pub importance: f64,
    pub action_count: f64,
    pub action_importance: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            complexity: 20.0,
            noise: 0.01,
            missing: 0.2,
            dimensionality: 50.0,
            ontology_distance: 0.5,
            discrepancy_low: -1.0,
            discrepancy_high: 1.0,
            reward_delay: 1.0,
            importance: 0.7,
            action_count: 10.0,
            action_importance: 0.7,
        }
    }
}

/// What the designer has at hand; each flag gates one or more techniques.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Preconditions {
    pub domain_ontology: bool,
    pub superclass_values: bool,
    /// Values for new properties plus rules linking them to the schema.
    pub expansion_sources: bool,
    /// Neighborhood concept and property sets in the domain and action ontologies.
    pub neighborhood_sets: bool,
    pub inference_rules: bool,
    pub importance_weights: bool,
    /// Discrepancy, distance and importance thresholds, concept weights and
    /// access to the previous observation.
    pub goal_thresholds: bool,
    pub belief_values: bool,
    pub observation_matrix: bool,
    pub semantic_constraints: bool,
    /// Concept rankings plus rules mapping actions to concept rewards.
    pub concept_rankings: bool,
    pub precedence_rules: bool,
}

impl Preconditions {
    pub fn all() -> Self {
        Preconditions {
            domain_ontology: true,
            superclass_values: true,
            expansion_sources: true,
            neighborhood_sets: true,
            inference_rules: true,
            importance_weights: true,
            goal_thresholds: true,
            belief_values: true,
            observation_matrix: true,
            semantic_constraints: true,
            concept_rankings: true,
            precedence_rules: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Technique {
    EnvironmentModeling,
    Method(Method),
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Technique::EnvironmentModeling => f.write_str("environment_modeling"),
            Technique::Method(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recommendation {
    pub technique: Technique,
    pub reason: String,
}

/// Techniques whose trigger fires and whose precondition holds, in the
/// order of the guideline flowchart.
pub fn recommend_methods(m: &TriggerMetrics, t: &Thresholds, pre: &Preconditions) -> Vec<Recommendation> {
    let noisy = m.noise_fraction >= t.noise;
    let drifted = m.ontology_distance > t.ontology_distance;
    let off_band = m.reward < t.discrepancy_low || m.reward > t.discrepancy_high;
    let reward_reason = || format!("reward {} outside [{}, {}]", m.reward, t.discrepancy_low, t.discrepancy_high);
    let noise_reason = || format!("noise {} at or above {}", m.noise_fraction, t.noise);
    let drift_reason = || format!("ontology distance {} above {}", m.ontology_distance, t.ontology_distance);

    let mut out = Vec::new();
    let mut push = |technique: Technique, fired: Option<String>, available: bool| {
        if let (Some(reason), true) = (fired, available) {
            out.push(Recommendation { technique, reason });
        }
    };
    use Method::*;
    push(
        Technique::EnvironmentModeling,
        (m.dimensionality > t.complexity)
            .then(|| format!("dimensionality {} above {}", m.dimensionality, t.complexity)),
        pre.domain_ontology,
    );
    push(Technique::Method(Abstraction), noisy.then(noise_reason), pre.superclass_values);
    push(Technique::Method(Expansion), drifted.then(drift_reason), pre.expansion_sources);
    push(
        Technique::Method(Masking),
        (m.dimensionality > t.dimensionality)
            .then(|| format!("dimensionality {} above {}", m.dimensionality, t.dimensionality)),
        pre.neighborhood_sets,
    );
    push(
        Technique::Method(Augmentation),
        (m.missing_fraction > t.missing).then(|| format!("missing {} above {}", m.missing_fraction, t.missing)),
        pre.inference_rules,
    );
    push(Technique::Method(Sampling), noisy.then(noise_reason), pre.importance_weights);
    push(
        Technique::Method(GoalSelection),
        if drifted { Some(drift_reason()) } else { off_band.then(reward_reason) },
        pre.goal_thresholds,
    );
    push(Technique::Method(AdaptiveReward), drifted.then(drift_reason), pre.belief_values);
    push(
        Technique::Method(RewardAugmentation),
        if off_band {
            Some(reward_reason())
        } else {
            (m.reward_delay > t.reward_delay)
                .then(|| format!("reward delay {} above {}", m.reward_delay, t.reward_delay))
        },
        pre.observation_matrix,
    );
    push(
        Technique::Method(ActionMasking),
        (m.action_count > t.action_count).then(|| format!("{} actions above {}", m.action_count, t.action_count)),
        pre.semantic_constraints,
    );
    push(
        Technique::Method(Exploration),
        if off_band {
            Some(reward_reason())
        } else {
            (m.importance > t.importance).then(|| format!("importance {} above {}", m.importance, t.importance))
        },
        pre.concept_rankings,
    );
    let important = (m.action_importance > t.action_importance)
        .then(|| format!("action importance {} above {}", m.action_importance, t.action_importance));
    push(Technique::Method(Prioritization), important.clone(), pre.precedence_rules);
    push(Technique::Method(ExecutionPrioritization), important, pre.precedence_rules);
    out
}
