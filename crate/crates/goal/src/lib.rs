//! Goal selection and generation, adaptive reward machines and reward
//! augmentation.

mod augment;
mod change;
mod error;
mod goal;
mod machine;
mod reward_fn;
mod symbol;
mod valuation;

pub use augment::{augment_reward, efficiency, ObservationMatrix, WeightedRow};
pub use change::{
    evaluate_change, state_distance, state_similarity_reward, ChangeCase, ChangeEvaluation, ChangeThresholds,
    DEFAULT_EPSILON,
};
pub use error::GoalError;
pub use goal::{
    matching_goals, select_or_generate_goal, GoalDecision, GoalEntry, GoalId, GoalSet, RewardCombiner, ADOPT_GOAL,
};
pub use machine::{RewardMachine, RmState, RmStep};
pub use reward_fn::{deduce_beliefs, extract_reward_functions, property_total, Direction, LinearConstraint, RewardFn};
pub use symbol::PropositionalSymbol;
pub use valuation::{MinMaxValuation, Valuation};
