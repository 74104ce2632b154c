use std::fmt;

use ontodem_ontology::Subsumer;

/// Transition label of a reward machine: the canonical rendering of a
/// subsumer. Subsumer parts are kept in sorted sets, so the rendering does
/// not depend on observation order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropositionalSymbol(String);

impl PropositionalSymbol {
    pub fn new(label: impl Into<String>) -> Self {
        PropositionalSymbol(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&Subsumer> for PropositionalSymbol {
    fn from(s: &Subsumer) -> Self {
        PropositionalSymbol(s.to_string())
    }
}

impl fmt::Display for PropositionalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
