//! Job shop scheduling environment.
//!
//! Orders arrive from three sources and are dispatched one at a time to
//! eight machines in three groups. Machines break down and get repaired;
//! sensors misreport capacity, status and working time according to the
//! scenario noise.

mod env;
mod error;
mod knowledge;
mod model;
mod scenario;

pub use env::{JssEnv, JssMetrics, OrderCounts, Topology, SCHEDULER};
pub use error::JssError;
pub use knowledge::{build_jss_ontology, jss_knowledge, ONTOLOGY_JSON, RULES};
pub use model::{utilization, FailureClass, Machine, MachineStatus, Order, Priority};
pub use scenario::{DueClass, DueMix, JssScenario, Load, NoiseLevel, NoiseParams, NoiseSpec, UtilizationDef};
