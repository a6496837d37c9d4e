use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{Const, Formula, Term, Var};
use crate::chains;
use crate::relation::{Relation, RelationError};

/// Variable bindings for evaluation.
pub type Env = BTreeMap<Var, Relation>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable '{0}'")]
    Unbound(Var),
    #[error("variable '{var}' is bound to a relation on {found} elements, expected {expected}")]
    WrongUniverse {
        var: Var,
        found: usize,
        expected: usize,
    },
    #[error(transparent)]
    Relation(#[from] RelationError),
}

fn lookup(env: &Env, v: Var, n: usize) -> Result<&Relation, EvalError> {
    let r = env.get(&v).ok_or(EvalError::Unbound(v))?;
    if r.size() != n {
        return Err(EvalError::WrongUniverse {
            var: v,
            found: r.size(),
            expected: n,
        });
    }
    Ok(r)
}

/// Evaluates `term` on a universe of size `n` under `env`.
pub fn evaluate(term: &Term, env: &Env, n: usize) -> Result<Relation, EvalError> {
    Ok(match term {
        Term::Var(v) => lookup(env, *v, n)?.clone(),
        Term::Const(Const::Zero) => Relation::bottom(n)?,
        Term::Const(Const::One) => Relation::top(n)?,
        Term::Const(Const::Diag) => Relation::identity(n)?,
        Term::Const(Const::AntiDiag) => Relation::antidiagonal(n)?,
        Term::Complement(t) => evaluate(t, env, n)?.complement(),
        Term::Union(ts) => fold(ts, env, n, Relation::union)?,
        Term::Intersect(ts) => fold(ts, env, n, Relation::intersect)?,
        Term::Compose(a, b) => evaluate(a, env, n)?.compose(&evaluate(b, env, n)?)?,
        Term::RelSum(a, b) => evaluate(a, env, n)?.relative_sum(&evaluate(b, env, n)?)?,
        Term::Chain(v, t) => chains::chain(lookup(env, *v, n)?, &evaluate(t, env, n)?)?,
        Term::Iterate(v, t) => chains::iterate_chain(lookup(env, *v, n)?, &evaluate(t, env, n)?)?,
    })
}

fn fold(
    ts: &[Term],
    env: &Env,
    n: usize,
    op: fn(&Relation, &Relation) -> Result<Relation, RelationError>,
) -> Result<Relation, EvalError> {
    let (first, rest) = ts.split_first().expect("n-ary operators have operands");
    let mut acc = evaluate(first, env, n)?;
    for t in rest {
        acc = op(&acc, &evaluate(t, env, n)?)?;
    }
    Ok(acc)
}

/// Truth value of `formula`; implication and conjunction are truth-functional.
pub fn evaluate_formula(formula: &Formula, env: &Env, n: usize) -> Result<bool, EvalError> {
    Ok(match formula {
        Formula::Inclusion(a, b) => evaluate(a, env, n)?.includes(&evaluate(b, env, n)?)?,
        Formula::Equation(a, b) => evaluate(a, env, n)? == evaluate(b, env, n)?,
        Formula::Implication(p, q) => !evaluate_formula(p, env, n)? || evaluate_formula(q, env, n)?,
        Formula::Conjunction(fs) => {
            for f in fs {
                if !evaluate_formula(f, env, n)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term};

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    fn env(bindings: &[(char, Relation)]) -> Env {
        bindings
            .iter()
            .map(|(c, r)| (Var::new(*c).unwrap(), r.clone()))
            .collect()
    }

    #[test]
    fn examples() {
        let e = env(&[('a', rel(2, &[(0, 1)])), ('b', rel(2, &[(1, 0)]))]);
        assert_eq!(
            evaluate(&parse_term("a;b").unwrap(), &e, 2).unwrap(),
            rel(2, &[(0, 0)])
        );
        assert_eq!(
            evaluate(&parse_term("1'").unwrap(), &Env::new(), 3).unwrap(),
            rel(3, &[(0, 0), (1, 1), (2, 2)])
        );
        let e = env(&[('a', rel(3, &[(1, 0), (2, 1)])), ('b', rel(3, &[(0, 0)]))]);
        assert_eq!(
            evaluate(&parse_term("a_0;b").unwrap(), &e, 3).unwrap(),
            rel(3, &[(0, 0), (1, 0), (2, 0)])
        );
        assert_eq!(
            evaluate(&parse_term("a_00;b").unwrap(), &e, 3).unwrap(),
            rel(3, &[(1, 0), (2, 0)])
        );
    }

    #[test]
    fn formula_examples() {
        let e = env(&[('a', rel(2, &[(0, 1)]))]);
        assert!(evaluate_formula(&parse_formula("a;1 <= 1").unwrap(), &e, 2).unwrap());
        assert!(evaluate_formula(&parse_formula("a = a").unwrap(), &e, 2).unwrap());

        // b <= c holds, a;b = {(1,0)} is not within c so the inner implication
        // holds vacuously, yet a_0;b = {(0,0),(1,0)} escapes c
        let reform = parse_formula("b <= c & (a;b <= c -> a;(a;b) <= c) -> a_0;b <= c").unwrap();
        let e = env(&[
            ('a', rel(2, &[(1, 0)])),
            ('b', rel(2, &[(0, 0)])),
            ('c', rel(2, &[(0, 0)])),
        ]);
        assert!(!evaluate_formula(&reform, &e, 2).unwrap());
    }

    #[test]
    fn errors() {
        let e = env(&[('a', rel(2, &[(0, 1)]))]);
        assert_eq!(
            evaluate(&parse_term("a;x").unwrap(), &e, 2),
            Err(EvalError::Unbound(Var::new('x').unwrap()))
        );
        assert!(matches!(
            evaluate(&parse_term("a").unwrap(), &e, 3),
            Err(EvalError::WrongUniverse { .. })
        ));
        assert!(matches!(
            evaluate(&parse_term("1").unwrap(), &e, 0),
            Err(EvalError::Relation(RelationError::EmptyUniverse))
        ));
    }
}
