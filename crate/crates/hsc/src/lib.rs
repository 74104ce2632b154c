//! Heating system control environment.
//!
//! A building with first-order thermal dynamics is heated against a recorded
//! outdoor temperature series. The outdoor sensor is corrupted at a
//! configurable rate; corrupted and outlying readings are flagged Noisy.

mod env;
mod error;
mod knowledge;
mod metrics;
mod scenario;
mod series;
mod temporal;
mod thermal;

pub use env::{default_series, HscEnv, POWER_LEVELS};
pub use error::HscError;
pub use knowledge::{build_hsc_ontology, hsc_knowledge, ONTOLOGY_JSON};
pub use metrics::{atsor, mse, HscMetrics, Interval};
pub use scenario::{HscScenario, NoiseScale, PriceModel};
pub use series::{load_temperature_csv, parse_temperature_csv, SeriesSummary, TempSeries};
pub use temporal::{temporal_class, Classification, PartOfDay, WeekDayClass};
pub use thermal::ThermalModel;
