//! Rule language and inference engine.
//!
//! Rules are written in a small Horn-clause DSL (`.odr` files), parsed into
//! [`Rule`] values and evaluated over a [`FactBase`] of ground atoms, either
//! bottom-up with [`forward_chain`] or goal-directed with [`backward_chain`].
//!
//! Comparison and arithmetic builtins (`isLess`, `isGreater`, `isEqualTo`,
//! `DifferentFrom`, `SameAs`, `hasSum`) may appear in rule bodies only.

mod backward;
mod builtin;
mod error;
mod facts;
mod forward;
mod parse;
mod term;

pub use backward::{backward_chain, DEFAULT_MAX_DEPTH};
pub use builtin::{eval_builtin, is_builtin};
pub use error::RuleError;
pub use facts::FactBase;
pub use forward::{forward_chain, immediate_consequences, match_body, DEFAULT_MAX_ITERATIONS};
pub use parse::{check_rule, parse_atom, parse_pattern, parse_rules};
pub use term::{pretty_print, Atom, Binding, Number, Rule, Term};
