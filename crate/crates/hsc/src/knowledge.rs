use ontodem_ontology::Ontology;
use ontodem_rl::Knowledge;

use crate::error::HscError;

pub const ONTOLOGY_JSON: &str = include_str!("../data/hsc_ontology.json");

pub fn build_hsc_ontology() -> Result<Ontology, HscError> {
    Ok(Ontology::from_json("hsc", ONTOLOGY_JSON)?)
}

/// Knowledge for agents acting in [`HscEnv`](crate::HscEnv).
pub fn hsc_knowledge() -> Result<Knowledge, HscError> {
    Ok(Knowledge::new(build_hsc_ontology()?))
}
