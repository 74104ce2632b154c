use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use ontodem_rules::{is_builtin, Atom};
use serde::{Deserialize, Serialize};

use crate::error::OntologyError;
use crate::ids::{ActionId, ConceptId, PropertyId, TemporalContext};

/// Importance weight in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Weight(f64);

impl Weight {
    pub fn new(value: f64) -> Result<Self, OntologyError> {
        if (0.0..=1.0).contains(&value) {
            Ok(Weight(value))
        } else {
            Err(OntologyError::WeightOutOfRange(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Weight {
    type Error = OntologyError;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Weight::new(v)
    }
}

impl From<Weight> for f64 {
    fn from(w: Weight) -> f64 {
        w.0
    }
}

/// Categorical importance grades and their numeric values.
#[derive(Clone, Debug, PartialEq)]
pub struct GradeMap(BTreeMap<String, Weight>);

impl Default for GradeMap {
    fn default() -> Self {
        let grades = [("Lowest", 0.1), ("Low", 0.3), ("Middle", 0.5), ("High", 0.7), ("Highest", 0.9)];
        GradeMap(grades.iter().map(|(g, w)| ((*g).to_owned(), Weight(*w))).collect())
    }
}

impl GradeMap {
    pub fn resolve(&self, grade: &str) -> Result<Weight, OntologyError> {
        self.0.get(grade).copied().ok_or_else(|| OntologyError::UnknownGrade(grade.to_owned()))
    }

    pub fn set(&mut self, grade: impl Into<String>, weight: Weight) {
        self.0.insert(grade.into(), weight);
    }
}

/// Range of a relationship: another concept or a literal kind.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Range {
    Concept(ConceptId),
    Number,
    Text,
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Concept(c) => write!(f, "{c}"),
            Range::Number => f.write_str("number"),
            Range::Text => f.write_str("text"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relationship {
    pub domain: ConceptId,
    pub property: PropertyId,
    pub range: Range,
}

impl Relationship {
    pub fn new(domain: impl Into<ConceptId>, property: impl Into<PropertyId>, range: Range) -> Self {
        Relationship { domain: domain.into(), property: property.into(), range }
    }
}

impl fmt::Display for Relationship {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.domain, self.property, self.range)
    }
}

/// Default weight plus per-context overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub default: Weight,
    pub temporal_overrides: BTreeMap<TemporalContext, Weight>,
}

impl WeightSpec {
    pub fn fixed(default: Weight) -> Self {
        WeightSpec { default, temporal_overrides: BTreeMap::new() }
    }

    /// Weight under `ctx`; contexts match by exact label.
    pub fn resolve(&self, ctx: Option<&TemporalContext>) -> Weight {
        ctx.and_then(|c| self.temporal_overrides.get(c)).copied().unwrap_or(self.default)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Require,
    Forbid,
}

/// A Require or Forbid pattern over state and action predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticConstraint {
    pub kind: ConstraintKind,
    pub pattern: Vec<Atom>,
}

/// Belief annotation attached to a property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Belief {
    Positive,
    Negative,
    Neutral,
}

pub const BELIEF_PROPERTY: &str = "hasBelief";
pub const POSITIVE_BELIEF: &str = "PositiveBelief";
pub const NEGATIVE_BELIEF: &str = "NegativeBelief";

/// Neighborhoods and property sets used by concept similarity.
pub trait ConceptStructure {
    fn has_concept(&self, c: &ConceptId) -> bool;
    /// Concepts one relationship hop away in either direction, plus
    /// parent and children.
    fn neighborhood(&self, c: &ConceptId) -> BTreeSet<ConceptId>;
    /// Properties of relationships whose domain is `c`.
    fn property_set(&self, c: &ConceptId) -> BTreeSet<PropertyId>;
}

fn neighborhood_in<'a>(
    relationships: impl Iterator<Item = &'a Relationship>,
    parent: &BTreeMap<ConceptId, ConceptId>,
    c: &ConceptId,
) -> BTreeSet<ConceptId> {
    let mut n = BTreeSet::new();
    for r in relationships {
        if let Range::Concept(range) = &r.range {
            if &r.domain == c {
                n.insert(range.clone());
            }
            if range == c {
                n.insert(r.domain.clone());
            }
        }
    }
    if let Some(p) = parent.get(c) {
        n.insert(p.clone());
    }
    n.extend(parent.iter().filter(|(_, p)| *p == c).map(|(child, _)| child.clone()));
    n
}

/// Immutable domain ontology.
#[derive(Clone, Debug, PartialEq)]
pub struct Ontology {
    id: String,
    concepts: BTreeSet<ConceptId>,
    properties: BTreeSet<PropertyId>,
    relationships: BTreeSet<Relationship>,
    rules: Vec<String>,
    weights: BTreeMap<Relationship, WeightSpec>,
    constraints: Vec<SemanticConstraint>,
    parent: BTreeMap<ConceptId, ConceptId>,
    grade_map: GradeMap,
}

impl Ontology {
    pub fn builder(id: impl Into<String>) -> OntologyBuilder {
        OntologyBuilder {
            inner: Ontology {
                id: id.into(),
                concepts: BTreeSet::new(),
                properties: BTreeSet::new(),
                relationships: BTreeSet::new(),
                rules: Vec::new(),
                weights: BTreeMap::new(),
                constraints: Vec::new(),
                parent: BTreeMap::new(),
                grade_map: GradeMap::default(),
            },
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn concepts(&self) -> &BTreeSet<ConceptId> {
        &self.concepts
    }

    pub fn properties(&self) -> &BTreeSet<PropertyId> {
        &self.properties
    }

    pub fn relationships(&self) -> &BTreeSet<Relationship> {
        &self.relationships
    }

    pub fn rule_ids(&self) -> &[String] {
        &self.rules
    }

    pub fn weights(&self) -> &BTreeMap<Relationship, WeightSpec> {
        &self.weights
    }

    pub fn constraints(&self) -> &[SemanticConstraint] {
        &self.constraints
    }

    pub fn grade_map(&self) -> &GradeMap {
        &self.grade_map
    }

    pub fn parent(&self, c: &ConceptId) -> Option<&ConceptId> {
        self.parent.get(c)
    }

    pub fn hierarchy(&self) -> &BTreeMap<ConceptId, ConceptId> {
        &self.parent
    }

    /// `c` followed by its ancestors up to the root.
    pub fn path_to_root(&self, c: &ConceptId) -> Vec<ConceptId> {
        let mut path = vec![c.clone()];
        let mut cur = c;
        while let Some(p) = self.parent.get(cur) {
            path.push(p.clone());
            cur = p;
        }
        path
    }

    /// True when `c` equals `ancestor` or descends from it.
    pub fn is_a(&self, c: &ConceptId, ancestor: &ConceptId) -> bool {
        self.path_to_root(c).iter().any(|x| x == ancestor)
    }

    /// Belief annotation of a property, read from
    /// `(Stem, hasBelief, PositiveBelief|NegativeBelief)` relationships where
    /// `Stem` is the property name without its `has` prefix.
    pub fn belief_of(&self, property: &PropertyId) -> Belief {
        let stem = ConceptId::from(property.stem());
        let positive = ConceptId::from(POSITIVE_BELIEF);
        let negative = ConceptId::from(NEGATIVE_BELIEF);
        for r in &self.relationships {
            if r.domain != stem || r.property.as_str() != BELIEF_PROPERTY {
                continue;
            }
            if let Range::Concept(b) = &r.range {
                if self.is_a(b, &positive) {
                    return Belief::Positive;
                }
                if self.is_a(b, &negative) {
                    return Belief::Negative;
                }
            }
        }
        Belief::Neutral
    }
}

impl ConceptStructure for Ontology {
    fn has_concept(&self, c: &ConceptId) -> bool {
        self.concepts.contains(c)
    }

    fn neighborhood(&self, c: &ConceptId) -> BTreeSet<ConceptId> {
        neighborhood_in(self.relationships.iter(), &self.parent, c)
    }

    fn property_set(&self, c: &ConceptId) -> BTreeSet<PropertyId> {
        self.relationships.iter().filter(|r| &r.domain == c).map(|r| r.property.clone()).collect()
    }
}

pub struct OntologyBuilder {
    inner: Ontology,
}

impl OntologyBuilder {
    pub fn concept(mut self, c: impl Into<ConceptId>) -> Self {
        self.inner.concepts.insert(c.into());
        self
    }

    pub fn concepts<I, C>(mut self, cs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<ConceptId>,
    {
        self.inner.concepts.extend(cs.into_iter().map(Into::into));
        self
    }

    pub fn property(mut self, p: impl Into<PropertyId>) -> Self {
        self.inner.properties.insert(p.into());
        self
    }

    pub fn properties<I, P>(mut self, ps: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: Into<PropertyId>,
    {
        self.inner.properties.extend(ps.into_iter().map(Into::into));
        self
    }

    pub fn subclass(mut self, child: impl Into<ConceptId>, parent: impl Into<ConceptId>) -> Self {
        self.inner.parent.insert(child.into(), parent.into());
        self
    }

    pub fn relationship(mut self, r: Relationship) -> Self {
        self.inner.relationships.insert(r);
        self
    }

    pub fn weighted(mut self, r: Relationship, w: WeightSpec) -> Self {
        self.inner.relationships.insert(r.clone());
        self.inner.weights.insert(r, w);
        self
    }

    pub fn constraint(mut self, c: SemanticConstraint) -> Self {
        self.inner.constraints.push(c);
        self
    }

    pub fn rule_id(mut self, id: impl Into<String>) -> Self {
        self.inner.rules.push(id.into());
        self
    }

    pub fn grade_map(mut self, g: GradeMap) -> Self {
        self.inner.grade_map = g;
        self
    }

    /// Validates referential integrity and acyclicity.
    pub fn build(self) -> Result<Ontology, OntologyError> {
        let o = self.inner;
        let known = |c: &ConceptId| {
            if o.concepts.contains(c) {
                Ok(())
            } else {
                Err(OntologyError::UnknownConcept(c.clone()))
            }
        };
        for r in &o.relationships {
            known(&r.domain)?;
            if let Range::Concept(c) = &r.range {
                known(c)?;
            }
            if !o.properties.contains(&r.property) {
                return Err(OntologyError::UnknownProperty(r.property.clone()));
            }
        }
        for r in o.weights.keys() {
            if !o.relationships.contains(r) {
                return Err(OntologyError::DanglingWeight(r.to_string()));
            }
        }
        for (child, parent) in &o.parent {
            known(child)?;
            known(parent)?;
        }
        for start in o.parent.keys() {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = o.parent.get(cur) {
                steps += 1;
                if p == start || steps > o.parent.len() {
                    return Err(OntologyError::CyclicHierarchy(start.clone()));
                }
                cur = p;
            }
        }
        for c in &o.constraints {
            for a in &c.pattern {
                let declared = is_builtin(a)
                    || o.concepts.contains(&ConceptId::from(a.predicate.as_str()))
                    || o.properties.contains(&PropertyId::from(a.predicate.as_str()));
                if !declared {
                    return Err(OntologyError::UndeclaredPredicate(a.predicate.clone()));
                }
            }
        }
        Ok(o)
    }
}

/// Concepts, properties and relationships an action depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionOntology {
    action: ActionId,
    bound_concepts: BTreeSet<ConceptId>,
    bound_properties: BTreeSet<PropertyId>,
    relationships: BTreeSet<Relationship>,
    parent: BTreeMap<ConceptId, ConceptId>,
}

impl ActionOntology {
    pub fn new(
        action: ActionId,
        bound_concepts: BTreeSet<ConceptId>,
        bound_properties: BTreeSet<PropertyId>,
        relationships: BTreeSet<Relationship>,
    ) -> Result<Self, OntologyError> {
        if bound_concepts.is_empty() || bound_properties.is_empty() {
            return Err(OntologyError::EmptyActionOntology(action));
        }
        Ok(ActionOntology { action, bound_concepts, bound_properties, relationships, parent: BTreeMap::new() })
    }

    /// An action ontology with no bound concepts. Masking against it drops
    /// every observation.
    pub fn empty(action: ActionId) -> Self {
        ActionOntology {
            action,
            bound_concepts: BTreeSet::new(),
            bound_properties: BTreeSet::new(),
            relationships: BTreeSet::new(),
            parent: BTreeMap::new(),
        }
    }

    /// Projects the part of `ontology` that touches `concepts`: every
    /// relationship with one end in the set and the hierarchy links of
    /// those concepts.
    pub fn project(action: ActionId, ontology: &Ontology, concepts: &[ConceptId]) -> Result<Self, OntologyError> {
        let set: BTreeSet<ConceptId> = concepts.iter().cloned().collect();
        for c in &set {
            if !ontology.has_concept(c) {
                return Err(OntologyError::UnknownConcept(c.clone()));
            }
        }
        let relationships: BTreeSet<Relationship> = ontology
            .relationships()
            .iter()
            .filter(|r| set.contains(&r.domain) || matches!(&r.range, Range::Concept(x) if set.contains(x)))
            .cloned()
            .collect();
        let bound_properties =
            relationships.iter().filter(|r| set.contains(&r.domain)).map(|r| r.property.clone()).collect();
        let parent = ontology
            .hierarchy()
            .iter()
            .filter(|(c, p)| set.contains(*c) || set.contains(*p))
            .map(|(c, p)| (c.clone(), p.clone()))
            .collect();
        let mut ao = ActionOntology::new(action, set, bound_properties, relationships)?;
        ao.parent = parent;
        Ok(ao)
    }

    pub fn action(&self) -> &ActionId {
        &self.action
    }

    pub fn bound_concepts(&self) -> &BTreeSet<ConceptId> {
        &self.bound_concepts
    }

    pub fn bound_properties(&self) -> &BTreeSet<PropertyId> {
        &self.bound_properties
    }

    pub fn relationships(&self) -> &BTreeSet<Relationship> {
        &self.relationships
    }
}

impl ConceptStructure for ActionOntology {
    fn has_concept(&self, c: &ConceptId) -> bool {
        self.bound_concepts.contains(c)
            || self.relationships.iter().any(|r| &r.domain == c || r.range == Range::Concept(c.clone()))
    }

    fn neighborhood(&self, c: &ConceptId) -> BTreeSet<ConceptId> {
        neighborhood_in(self.relationships.iter(), &self.parent, c)
    }

    fn property_set(&self, c: &ConceptId) -> BTreeSet<PropertyId> {
        self.relationships.iter().filter(|r| &r.domain == c).map(|r| r.property.clone()).collect()
    }
}
