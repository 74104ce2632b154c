use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("rule {rule}: variable ?{variable} is not bound by the body")]
    UnsafeRule { rule: usize, variable: String },
    #[error("rule {rule}: builtin {predicate} cannot appear in a head")]
    BuiltinInHead { rule: usize, predicate: String },
    #[error("{predicate}: operand {operand} is not numeric")]
    TypeMismatch { predicate: String, operand: String },
    #[error("{predicate}: argument {argument} is unbound")]
    Unbound { predicate: String, argument: String },
    #[error("{predicate}: expected {expected} arguments, found {found}")]
    Arity { predicate: String, expected: String, found: usize },
    #[error("forward chaining did not reach a fixpoint within {limit} iterations")]
    IterationLimit { limit: usize },
    #[error("backward chaining exceeded depth {limit}")]
    DepthLimit { limit: usize },
}
