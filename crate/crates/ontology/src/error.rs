use thiserror::Error;

use crate::ids::{ActionId, ConceptId, InstanceId, PropertyId};

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("unknown concept {0}")]
    UnknownConcept(ConceptId),
    #[error("unknown property {0}")]
    UnknownProperty(PropertyId),
    #[error("unknown instance {0}")]
    UnknownInstance(InstanceId),
    #[error("weight {0} outside [0, 1]")]
    WeightOutOfRange(f64),
    #[error("unknown weight grade {0}")]
    UnknownGrade(String),
    #[error("weight attached to undeclared relationship {0}")]
    DanglingWeight(String),
    #[error("subclass hierarchy has a cycle through {0}")]
    CyclicHierarchy(ConceptId),
    #[error("constraint uses undeclared predicate {0}")]
    UndeclaredPredicate(String),
    #[error("action ontology for {0} binds no concepts or properties")]
    EmptyActionOntology(ActionId),
    #[error("concept {0} is not part of the hierarchy")]
    OrphanConcept(ConceptId),
    #[error("invalid constraint pattern: {0}")]
    Pattern(#[from] ontodem_rules::RuleError),
    #[error("ontology file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ontology file: {0}")]
    Io(#[from] std::io::Error),
}
