//! JSON ontology file loader.
//!
//! ```json
//! {
//!   "concepts": ["Thing", "Machine"],
//!   "properties": ["hasStatus"],
//!   "hierarchy": [["Machine", "Thing"]],
//!   "relationships": [
//!     {"domain": "Machine", "property": "hasStatus", "range": "text",
//!      "weight": "High", "temporal_weights": {"Night": 0.2}}
//!   ],
//!   "constraints": [{"kind": "forbid", "pattern": "assignTo(?m), hasStatus(?m, Failure)"}],
//!   "grade_map": {"High": 0.75}
//! }
//! ```
//!
//! `range` is a concept name or one of the literal kinds `number` and
//! `text`. Weights are numbers in `[0, 1]` or grade names. Unknown keys are
//! rejected.

use std::collections::BTreeMap;
use std::path::Path;

use ontodem_rules::parse_pattern;
use serde::Deserialize;

use crate::error::OntologyError;
use crate::ids::TemporalContext;
use crate::model::{ConstraintKind, GradeMap, Ontology, Range, Relationship, SemanticConstraint, Weight, WeightSpec};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OntologyFile {
    concepts: Vec<String>,
    properties: Vec<String>,
    #[serde(default)]
    hierarchy: Vec<(String, String)>,
    #[serde(default)]
    relationships: Vec<RelationshipEntry>,
    #[serde(default)]
    constraints: Vec<ConstraintEntry>,
    #[serde(default)]
    grade_map: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationshipEntry {
    domain: String,
    property: String,
    range: String,
    #[serde(default)]
    weight: Option<WeightEntry>,
    #[serde(default)]
    temporal_weights: BTreeMap<String, WeightEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightEntry {
    Value(f64),
    Grade(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintEntry {
    kind: ConstraintKind,
    pattern: String,
}

fn parse_range(s: &str) -> Range {
    match s {
        "number" => Range::Number,
        "text" => Range::Text,
        c => Range::Concept(c.into()),
    }
}

impl WeightEntry {
    fn resolve(&self, grades: &GradeMap) -> Result<Weight, OntologyError> {
        match self {
            WeightEntry::Value(v) => Weight::new(*v),
            WeightEntry::Grade(g) => grades.resolve(g),
        }
    }
}

impl Ontology {
    /// Parses an ontology document. `id` names the resulting ontology.
    pub fn from_json(id: &str, text: &str) -> Result<Ontology, OntologyError> {
        let file: OntologyFile = serde_json::from_str(text)?;
        let mut grades = GradeMap::default();
        for (g, v) in &file.grade_map {
            grades.set(g.clone(), Weight::new(*v)?);
        }
        let mut b = Ontology::builder(id).concepts(file.concepts).properties(file.properties).grade_map(grades.clone());
        for (child, parent) in file.hierarchy {
            b = b.subclass(child, parent);
        }
        for r in file.relationships {
            let rel = Relationship::new(r.domain, r.property, parse_range(&r.range));
            match r.weight {
                Some(w) => {
                    let mut spec = WeightSpec::fixed(w.resolve(&grades)?);
                    for (ctx, tw) in &r.temporal_weights {
                        spec.temporal_overrides.insert(TemporalContext::from(ctx.as_str()), tw.resolve(&grades)?);
                    }
                    b = b.weighted(rel, spec);
                }
                None if r.temporal_weights.is_empty() => b = b.relationship(rel),
                None => {
                    return Err(OntologyError::DanglingWeight(format!(
                        "{rel}: temporal weights without a default weight"
                    )))
                }
            }
        }
        for c in file.constraints {
            b = b.constraint(SemanticConstraint { kind: c.kind, pattern: parse_pattern(&c.pattern)? });
        }
        b.build()
    }

    /// Loads an ontology file; the file stem becomes the ontology id.
    pub fn load(path: impl AsRef<Path>) -> Result<Ontology, OntologyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("ontology");
        Ontology::from_json(id, &text)
    }
}
