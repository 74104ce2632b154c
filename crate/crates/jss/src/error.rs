use thiserror::Error;

#[derive(Debug, Error)]
pub enum JssError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("scenario file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Ontology(#[from] ontodem_ontology::OntologyError),
    #[error(transparent)]
    Rules(#[from] ontodem_rules::RuleError),
    #[error(transparent)]
    Action(#[from] ontodem_action::ActionError),
}
