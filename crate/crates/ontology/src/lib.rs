//! Ontology data model, observation schema and structural metrics.
//!
//! An [`Ontology`] holds concepts, properties, weighted relationships, a
//! subclass forest and semantic constraints. Agents observe the world as an
//! [`ObservationSchema`]; the functions in this crate compare schemas,
//! generalize them and score how important each observed instance is.

mod error;
mod file;
mod ids;
mod metrics;
mod model;
mod schema;

pub use error::OntologyError;
pub use ids::{ActionId, ConceptId, InstanceId, PropertyId, TemporalContext};
pub use metrics::{
    applicable_relationships, concept_similarity, concept_weight, extract_subsumer, jaccard_distance,
    observation_importance, schema_distance, schema_elements, similarity_from_sets, SchemaElement, Subsumer,
};
pub use model::{
    ActionOntology, Belief, ConceptStructure, ConstraintKind, GradeMap, Ontology, OntologyBuilder, Range, Relationship,
    SemanticConstraint, Weight, WeightSpec, BELIEF_PROPERTY, NEGATIVE_BELIEF, POSITIVE_BELIEF,
};
pub use schema::{EntryKey, ObservationSchema, Quality, Reading, Value};
