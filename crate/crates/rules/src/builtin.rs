use crate::error::RuleError;
use crate::term::{Atom, Binding, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Less,
    Greater,
    Equal,
    Different,
    Same,
    Sum,
}

pub fn lookup(predicate: &str) -> Option<Builtin> {
    Some(match predicate {
        "isLess" | "isLessThan" => Builtin::Less,
        "isGreater" | "isGreaterThan" => Builtin::Greater,
        "isEqualTo" => Builtin::Equal,
        "DifferentFrom" => Builtin::Different,
        "SameAs" => Builtin::Same,
        "hasSum" => Builtin::Sum,
        _ => return None,
    })
}

pub fn is_builtin(atom: &Atom) -> bool {
    lookup(&atom.predicate).is_some()
}

pub(crate) fn check_arity(b: Builtin, atom: &Atom) -> Result<(), RuleError> {
    let n = atom.terms.len();
    let ok = match b {
        Builtin::Sum => n >= 2,
        _ => n == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(RuleError::Arity {
            predicate: atom.predicate.clone(),
            expected: if b == Builtin::Sum { "at least 2".into() } else { "2".into() },
            found: n,
        })
    }
}

/// True when every input argument is bound, so the builtin can run.
pub fn ready(atom: &Atom, binding: &Binding) -> bool {
    match lookup(&atom.predicate) {
        Some(Builtin::Sum) => {
            let inputs = &atom.terms[..atom.terms.len().saturating_sub(1)];
            inputs.iter().all(|t| binding.is_bound(t))
        }
        Some(_) => atom.terms.iter().all(|t| binding.is_bound(t)),
        None => false,
    }
}

fn numeric(predicate: &str, t: &Term) -> Result<f64, RuleError> {
    match t {
        Term::Num(n) => Ok(n.get()),
        Term::Var(v) => Err(RuleError::Unbound { predicate: predicate.to_owned(), argument: format!("?{v}") }),
        other => Err(RuleError::TypeMismatch { predicate: predicate.to_owned(), operand: other.to_string() }),
    }
}

/// Evaluates a builtin atom under `binding`.
///
/// Returns `Ok(None)` when the test fails and `Ok(Some(b))` with the
/// (possibly extended) binding when it holds. `hasSum` binds its final
/// argument when that argument is an unbound variable.
pub fn eval_builtin(atom: &Atom, binding: &Binding) -> Result<Option<Binding>, RuleError> {
    let b = lookup(&atom.predicate).ok_or_else(|| RuleError::TypeMismatch {
        predicate: atom.predicate.clone(),
        operand: "not a builtin".into(),
    })?;
    check_arity(b, atom)?;
    let p = atom.predicate.as_str();
    let args: Vec<Term> = atom.terms.iter().map(|t| binding.resolve(t)).collect();
    let holds = match b {
        Builtin::Less => numeric(p, &args[0])? < numeric(p, &args[1])?,
        Builtin::Greater => numeric(p, &args[0])? > numeric(p, &args[1])?,
        Builtin::Equal => numeric(p, &args[0])? == numeric(p, &args[1])?,
        Builtin::Different | Builtin::Same => {
            if let Some(Term::Var(v)) = args.iter().find(|t| t.is_var()) {
                return Err(RuleError::Unbound { predicate: p.to_owned(), argument: format!("?{v}") });
            }
            (args[0] == args[1]) == (b == Builtin::Same)
        }
        Builtin::Sum => {
            let (out, inputs) = args.split_last().expect("arity checked");
            let mut total = 0.0;
            for t in inputs {
                total += numeric(p, t)?;
            }
            let total = Term::num(total);
            return match out {
                Term::Var(v) => {
                    let mut next = binding.clone();
                    next.insert(v.clone(), total);
                    Ok(Some(next))
                }
                Term::Num(_) => Ok((*out == total).then(|| binding.clone())),
                other => Err(RuleError::TypeMismatch { predicate: p.to_owned(), operand: other.to_string() }),
            };
        }
    };
    Ok(holds.then(|| binding.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_atom;

    fn eval(src: &str) -> Result<Option<Binding>, RuleError> {
        eval_builtin(&parse_atom(src).unwrap(), &Binding::new())
    }

    #[test]
    fn comparisons() {
        assert!(eval("isGreater(50, 30)").unwrap().is_some());
        assert!(eval("isGreaterThan(30, 50)").unwrap().is_none());
        assert!(eval("isLess(3, 4)").unwrap().is_some());
        assert!(eval("isLessThan(4, 4)").unwrap().is_none());
        assert!(eval("isEqualTo(4, 4.0)").unwrap().is_some());
    }

    #[test]
    fn sum_binds_last_argument() {
        let b = eval("hasSum(1, 1, 1, ?N)").unwrap().unwrap();
        assert_eq!(b.get("N"), Some(&Term::num(3.0)));
        assert!(eval("hasSum(1, 2, 3)").unwrap().is_some());
        assert!(eval("hasSum(1, 2, 4)").unwrap().is_none());
    }

    #[test]
    fn identity_builtins() {
        assert!(eval("DifferentFrom(m1, m1)").unwrap().is_none());
        assert!(eval("DifferentFrom(m1, m2)").unwrap().is_some());
        assert!(eval("SameAs(m1, m1)").unwrap().is_some());
    }

    #[test]
    fn symbolic_operand_is_type_mismatch() {
        assert!(matches!(eval("isLess(Free, 3)"), Err(RuleError::TypeMismatch { .. })));
    }

    #[test]
    fn unbound_operand_is_reported() {
        assert!(matches!(eval("isLess(?x, 3)"), Err(RuleError::Unbound { .. })));
    }
}
