use std::collections::BTreeMap;

use ontodem_action::ActionSet;
use ontodem_goal::{ChangeThresholds, GoalSet, LinearConstraint, MinMaxValuation, RewardFn};
use ontodem_observation::SensorBindings;
use ontodem_ontology::{ActionOntology, ObservationSchema, Ontology, SemanticConstraint, TemporalContext};
use ontodem_rules::Rule;

use crate::error::RlError;
use crate::qtable::StateKey;
use crate::stream::StreamRng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    pub reward: f64,
    pub done: bool,
}

/// A simulated problem the agent interacts with.
///
/// Dynamics draw from the `env` stream and sensor noise from the `noise`
/// stream, so a change in how often the agent observes never shifts the
/// dynamics.
pub trait Environment {
    /// Fixed, ordered action set; learners index actions by position.
    fn actions(&self) -> &ActionSet;

    fn reset(&mut self, rng: &mut StreamRng);

    /// Raw observation of the current state, with quality flags set.
    fn observe(&mut self, rng: &mut StreamRng) -> ObservationSchema;

    fn step(&mut self, action: usize, rng: &mut StreamRng) -> Result<StepOutcome, RlError>;

    /// Discrete state key for a (possibly processed) observation.
    fn state_key(&self, schema: &ObservationSchema) -> StateKey;

    /// Class label used by observation abstraction.
    fn class_key(&self) -> String {
        String::new()
    }

    fn temporal_context(&self) -> Option<TemporalContext> {
        None
    }

    /// Extra sources available to observation expansion.
    fn sensor_bindings(&self) -> SensorBindings {
        SensorBindings::default()
    }

    /// Whether the last step produced an unforeseen event.
    fn unforeseen_event(&self) -> bool {
        false
    }

    /// Episode-level metrics, read after the last step.
    fn metrics(&self) -> BTreeMap<String, f64>;
}

/// Domain knowledge the methods consult.
#[derive(Clone, Debug)]
pub struct Knowledge {
    pub ontology: Ontology,
    /// Inference rules over observation facts.
    pub rules: Vec<Rule>,
    /// Require and Forbid patterns for action masking.
    pub constraints: Vec<SemanticConstraint>,
    /// Rules deriving priority and `rewardsConcept` facts for actions.
    pub action_rules: Vec<Rule>,
    pub goals: GoalSet,
    /// Reward function of each predefined goal, by reward-function id.
    pub goal_rewards: BTreeMap<String, RewardFn>,
    pub reward_constraints: Vec<LinearConstraint>,
    /// Goal selection stays idle without thresholds.
    pub thresholds: Option<ChangeThresholds>,
    pub valuation: MinMaxValuation,
    /// Projection used by observation masking.
    pub action_ontology: Option<ActionOntology>,
}

impl Knowledge {
    pub fn new(ontology: Ontology) -> Self {
        Knowledge {
            ontology,
            rules: Vec::new(),
            constraints: Vec::new(),
            action_rules: Vec::new(),
            goals: GoalSet::default(),
            goal_rewards: BTreeMap::new(),
            reward_constraints: Vec::new(),
            thresholds: None,
            valuation: MinMaxValuation::new(),
            action_ontology: None,
        }
    }

    pub fn with_rules(mut self, rules: Vec<Rule>) -> Self {
        self.rules = rules;
        self
    }
}
