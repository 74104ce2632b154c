use ontodem_ontology::ActionId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error(transparent)]
    Inference(#[from] ontodem_rules::RuleError),
    #[error("duplicate action `{0}`")]
    DuplicateAction(ActionId),
    #[error("constraints exclude every action")]
    EmptyFeasibleSet,
    #[error("no candidate actions")]
    NoCandidates,
    #[error("priority facts form a cycle through {}", join(.0))]
    CyclicPriority(Vec<ActionId>),
    #[error("precedence facts form a cycle through {}", join(.0))]
    PrecedenceCycle(Vec<ActionId>),
}

fn join(ids: &[ActionId]) -> String {
    ids.iter().map(ActionId::as_str).collect::<Vec<_>>().join(" -> ")
}
