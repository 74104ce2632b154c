//! Ontology-driven action selection: masking infeasible actions, mixing an
//! ontology policy into exploration, and ordering actions by derived
//! priority and precedence.

mod action_set;
mod error;
mod exploration;
mod masking;
mod priority;

pub use action_set::{ActionEntry, ActionSet};
pub use error::ActionError;
pub use exploration::{
    action_concept_scores, hybrid_select, mixture, onto_distribution, rank_concepts, sample_index, AlphaSchedule,
    OntoPolicyMode, REWARDS_CONCEPT,
};
pub use masking::mask_actions;
pub use priority::{prioritize_action, prioritize_execution, HAS_PRIORITY_OVER, MUST_PRECEDE};
