use thiserror::Error;

use crate::goal::GoalId;

#[derive(Debug, Error)]
pub enum GoalError {
    #[error(transparent)]
    Ontology(#[from] ontodem_ontology::OntologyError),
    #[error(transparent)]
    Inference(#[from] ontodem_rules::RuleError),
    #[error("goal rule {rule}: {reason}")]
    InvalidGoalRule { rule: usize, reason: String },
    #[error("duplicate goal id `{0}`")]
    DuplicateGoal(GoalId),
    #[error("constraint references undeclared property `{0}`")]
    UndeclaredProperty(String),
}
