//! Tabular reinforcement learning with ontology-enhanced decision making.
//!
//! [`Agent`] runs the episode loop with any subset of the [`Method`]s
//! enabled; [`PlainAgent`] is the method-free reference learner.

mod agent;
mod config;
mod discretize;
mod env;
mod error;
mod plain;
mod qtable;
mod report;
mod stream;

pub use agent::Agent;
pub use config::{AgentConfig, Algorithm, Method};
pub use discretize::{bucket, discretize_state, Discretized, Feature, FeatureKind, StateDescriptor};
pub use env::{Environment, Knowledge, StepOutcome};
pub use error::RlError;
pub use plain::PlainAgent;
pub use qtable::{
    epsilon_distribution, epsilon_greedy, multi_advisor_vote, q_learning_update, sarsa_update, KeyPart, QTable,
    StateKey,
};
pub use report::{mean_metric, write_jsonl, EpisodeReport, TransitionRecord};
pub use stream::{RngStreams, StreamRng};
