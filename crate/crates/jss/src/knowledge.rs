use ontodem_goal::MinMaxValuation;
use ontodem_ontology::{ActionOntology, ConceptId, Ontology};
use ontodem_rl::Knowledge;
use ontodem_rules::{parse_rules, Rule};

use crate::error::JssError;

pub const ONTOLOGY_JSON: &str = include_str!("../data/jss_ontology.json");
pub const RULES: &str = include_str!("../data/jss.odr");

/// The job shop ontology and its augmentation rules.
pub fn build_jss_ontology() -> Result<(Ontology, Vec<Rule>), JssError> {
    let ontology = Ontology::from_json("jss", ONTOLOGY_JSON)?;
    let rules = parse_rules(RULES)?;
    Ok((ontology, rules))
}

/// Knowledge for agents acting in [`JssEnv`](crate::JssEnv).
pub fn jss_knowledge() -> Result<Knowledge, JssError> {
    let (ontology, rules) = build_jss_ontology()?;
    let bound: Vec<ConceptId> = ["JobShopScheduler", "Machine", "Buffer", "Order"].map(ConceptId::from).to_vec();
    let projection = ActionOntology::project("assign".into(), &ontology, &bound)?;
    let mut k = Knowledge::new(ontology).with_rules(rules);
    k.constraints = k.ontology.constraints().to_vec();
    k.action_ontology = Some(projection);
    k.valuation = MinMaxValuation::new()
        .with_range("hasWorkingTime", 0.0, 45.0)
        .with_range("hasIdleTime", 0.0, 100.0)
        .with_range("hasFailureTime", 0.0, 100.0)
        .with_range("hasWaitingTime", 0.0, 100.0);
    Ok(k)
}

#[cfg(test)]
mod tests {
    use ontodem_ontology::{Belief, PropertyId};

    use super::*;

    #[test]
    fn rule_file_has_three_rules() {
        let (_, rules) = build_jss_ontology().unwrap();
        assert_eq!(rules.len(), 3);
        let heads: Vec<&str> = rules.iter().map(|r| r.head[0].predicate.as_str()).collect();
        assert_eq!(heads, ["hasRemainingCapacity", "hasStatus", "hasWorkingTime"]);
    }

    #[test]
    fn property_beliefs() {
        let (o, _) = build_jss_ontology().unwrap();
        let belief = |p: &str| o.belief_of(&PropertyId::from(p));
        assert_eq!(belief("hasDueDate"), Belief::Positive);
        assert_eq!(belief("hasWorkingTime"), Belief::Positive);
        assert_eq!(belief("hasWaitingTime"), Belief::Negative);
        assert_eq!(belief("hasPriority"), Belief::Negative);
    }

    #[test]
    fn knowledge_carries_constraints() {
        let k = jss_knowledge().unwrap();
        assert_eq!(k.constraints.len(), 2);
        assert!(k.action_ontology.is_some());
    }
}
