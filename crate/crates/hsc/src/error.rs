use thiserror::Error;

#[derive(Debug, Error)]
pub enum HscError {
    #[error("temperature file row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("temperature file has no records")]
    EmptySeries,
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("scenario file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Ontology(#[from] ontodem_ontology::OntologyError),
    #[error(transparent)]
    Action(#[from] ontodem_action::ActionError),
}
