use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_id {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                $name(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(s)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(
    /// Name of a class in the ontology.
    ConceptId
);
string_id!(
    /// Name of a property (relationship label or data attribute).
    PropertyId
);
string_id!(
    /// Label of an observed individual.
    InstanceId
);
string_id!(
    /// Name of an agent action.
    ActionId
);
string_id!(
    /// Opaque temporal context label such as `Morning` or `WorkingDay`.
    TemporalContext
);

impl PropertyId {
    /// Property name without a leading `has` verb: `hasDueDate` becomes
    /// `DueDate`. Names without that prefix are returned unchanged.
    pub fn stem(&self) -> &str {
        match self.0.strip_prefix("has") {
            Some(rest) if rest.chars().next().is_some_and(char::is_uppercase) => rest,
            _ => &self.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_stem() {
        assert_eq!(PropertyId::from("hasDueDate").stem(), "DueDate");
        assert_eq!(PropertyId::from("DueDate").stem(), "DueDate");
        assert_eq!(PropertyId::from("hash").stem(), "hash");
    }
}
