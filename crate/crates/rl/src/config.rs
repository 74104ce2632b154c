use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use ontodem_action::OntoPolicyMode;
use ontodem_goal::RewardCombiner;
use ontodem_observation::PipelineConfig;
use serde::{Deserialize, Serialize};

use crate::error::RlError;

/// The twelve ontology-enhanced methods, in pipeline order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Abstraction,
    Expansion,
    Augmentation,
    Masking,
    Sampling,
    GoalSelection,
    AdaptiveReward,
    RewardAugmentation,
    ActionMasking,
    Exploration,
    Prioritization,
    ExecutionPrioritization,
}

impl Method {
    pub const ALL: [Method; 12] = [
        Method::Abstraction,
        Method::Expansion,
        Method::Augmentation,
        Method::Masking,
        Method::Sampling,
        Method::GoalSelection,
        Method::AdaptiveReward,
        Method::RewardAugmentation,
        Method::ActionMasking,
        Method::Exploration,
        Method::Prioritization,
        Method::ExecutionPrioritization,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Abstraction => "abstraction",
            Method::Expansion => "expansion",
            Method::Augmentation => "augmentation",
            Method::Masking => "masking",
            Method::Sampling => "sampling",
            Method::GoalSelection => "goal_selection",
            Method::AdaptiveReward => "adaptive_reward",
            Method::RewardAugmentation => "reward_augmentation",
            Method::ActionMasking => "action_masking",
            Method::Exploration => "exploration",
            Method::Prioritization => "prioritization",
            Method::ExecutionPrioritization => "execution_prioritization",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = RlError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| RlError::UnknownMethod(s.to_owned()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    #[default]
    QLearning,
    Sarsa,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AgentConfig {
    pub algorithm: Algorithm,
    pub learning_rate: f64,
    pub discount: f64,
    /// Exploration rate in the first episode.
    pub epsilon: f64,
    /// Multiplicative per-episode decay.
    pub epsilon_decay: f64,
    pub epsilon_min: f64,
    pub initial_q: f64,
    pub methods: BTreeSet<Method>,
    pub pipeline: PipelineConfig,
    /// Trailing window, in steps, of the hybrid exploration weight.
    pub alpha_window: u64,
    pub alpha_unit: f64,
    pub onto_policy: OntoPolicyMode,
    pub combiner: RewardCombiner,
    pub rm_max_states: usize,
    /// Keep per-transition records in episode reports.
    pub record_transitions: bool,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            algorithm: Algorithm::QLearning,
            learning_rate: 0.1,
            discount: 0.9,
            epsilon: 0.2,
            epsilon_decay: 0.99,
            epsilon_min: 0.01,
            initial_q: 0.0,
            methods: BTreeSet::new(),
            pipeline: PipelineConfig::default(),
            alpha_window: 20,
            alpha_unit: 1.0,
            onto_policy: OntoPolicyMode::PointMass,
            combiner: RewardCombiner::Exclusive,
            rm_max_states: 64,
            record_transitions: false,
        }
    }
}

impl AgentConfig {
    pub fn with_methods(mut self, methods: impl IntoIterator<Item = Method>) -> Self {
        self.methods = methods.into_iter().collect();
        self
    }

    pub fn uses(&self, m: Method) -> bool {
        self.methods.contains(&m)
    }

    /// Exploration rate for the zero-based `episode`.
    pub fn epsilon_at(&self, episode: usize) -> f64 {
        let decayed = self.epsilon * self.epsilon_decay.powi(episode.min(i32::MAX as usize) as i32);
        decayed.max(self.epsilon_min)
    }

    pub fn validate(&self) -> Result<(), RlError> {
        let bad = |what: &str, v: f64| Err(RlError::InvalidConfig(format!("{what} = {v}")));
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return bad("learning_rate", self.learning_rate);
        }
        if !(0.0..=1.0).contains(&self.discount) {
            return bad("discount", self.discount);
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon", self.epsilon);
        }
        if !(self.epsilon_decay > 0.0 && self.epsilon_decay <= 1.0) {
            return bad("epsilon_decay", self.epsilon_decay);
        }
        if !(0.0..=1.0).contains(&self.epsilon_min) {
            return bad("epsilon_min", self.epsilon_min);
        }
        if self.alpha_window == 0 {
            return bad("alpha_window", 0.0);
        }
        if self.alpha_unit.is_nan() || self.alpha_unit <= 0.0 {
            return bad("alpha_unit", self.alpha_unit);
        }
        if self.rm_max_states == 0 {
            return bad("rm_max_states", 0.0);
        }
        self.pipeline.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("telepathy".parse::<Method>().is_err());
    }

    #[test]
    fn epsilon_decays_to_floor() {
        let c = AgentConfig { epsilon: 0.5, epsilon_decay: 0.5, ..AgentConfig::default() };
        assert_eq!(c.epsilon_at(0), 0.5);
        assert_eq!(c.epsilon_at(1), 0.25);
        assert_eq!(c.epsilon_at(50), 0.01);
    }

    #[test]
    fn config_from_json() {
        let c: AgentConfig =
            serde_json::from_str(r#"{"learning_rate": 0.2, "methods": ["augmentation", "action_masking"]}"#).unwrap();
        assert!(c.uses(Method::Augmentation) && c.uses(Method::ActionMasking));
        assert_eq!(c.discount, 0.9);
        c.validate().unwrap();
        assert!(AgentConfig { discount: 1.5, ..c }.validate().is_err());
    }
}
