use thiserror::Error;

#[derive(Debug, Error)]
pub enum RlError {
    #[error(transparent)]
    Ontology(#[from] ontodem_ontology::OntologyError),
    #[error(transparent)]
    Inference(#[from] ontodem_rules::RuleError),
    #[error(transparent)]
    Observation(#[from] ontodem_observation::ObservationError),
    #[error(transparent)]
    Goal(#[from] ontodem_goal::GoalError),
    #[error(transparent)]
    Action(#[from] ontodem_action::ActionError),
    #[error("action index {index} outside 0..{count}")]
    ActionOutOfRange { index: usize, count: usize },
    #[error("invalid agent configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("environment: {0}")]
    Environment(String),
    #[error("transition log: {0}")]
    Io(#[from] std::io::Error),
    #[error("transition log: {0}")]
    Json(#[from] serde_json::Error),
}
