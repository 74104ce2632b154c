//! Ontology-enhanced observation methods.
//!
//! Each method takes an [`ObservationSchema`](ontodem_ontology::ObservationSchema)
//! and returns a new one; inputs are never mutated.

mod abstraction;
mod augmentation;
mod config;
mod error;
mod expansion;
mod history;
mod masking;
mod metrics;
mod sampling;

pub use abstraction::abstract_observation;
pub use augmentation::{augment_observation, augment_observation_with};
pub use config::{AugmentMode, PipelineConfig};
pub use error::ObservationError;
pub use expansion::{expand_observation, SensorBindings};
pub use history::ObservationHistory;
pub use masking::mask_observation;
pub use metrics::{pipeline_metrics, PipelineMetrics};
pub use sampling::{allocate, concept_strata, sample_observation, Stratum};
