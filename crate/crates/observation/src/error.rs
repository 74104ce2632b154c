use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObservationError {
    #[error(transparent)]
    Ontology(#[from] ontodem_ontology::OntologyError),
    #[error(transparent)]
    Inference(#[from] ontodem_rules::RuleError),
    #[error("invalid pipeline configuration: {0}")]
    InvalidConfig(String),
    #[error("sample size must be at least 1")]
    ZeroSampleSize,
}
