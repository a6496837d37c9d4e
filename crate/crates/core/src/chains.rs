//! Chains, iterates, closedness and transitivity, computed by fixpoint
//! iteration on finite relations.
//!
//! `iterate_chain(a, b)` is the union of all iterates `a^k;b` for `k >= 1`
//! (written `a_00;b`), and `chain(a, b)` adds the generator itself
//! (`a_0;b = b + a_00;b`): the least relation containing `b` and closed under
//! left composition with `a`.

use crate::relation::{Relation, Result};

/// Stages of the iterate computation: stage `k` (1-based) is the union of
/// `a;b, a;a;b, ..., a^k;b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTrace {
    pub stages: Vec<Relation>,
    /// Number of distinct stages, i.e. the depth after which nothing new appears.
    pub stabilized_at: usize,
}

impl ChainTrace {
    pub fn last(&self) -> &Relation {
        self.stages
            .last()
            .expect("a trace always has at least one stage")
    }
}

/// Every `a^k;b` with `k` at least 1 lies in stage `n - 1` (a shortest witness
/// path visits distinct elements), so stage `n` repeats stage `n - 1`. The loop
/// is capped one step past that bound and asserts the cap is never what stops it.
fn trace_unchecked(a: &Relation, b: &Relation) -> ChainTrace {
    let n = a.size();
    let image_of_b = a.compose_unchecked(b);
    let mut stages = vec![image_of_b.clone()];
    for _ in 0..n {
        let current = stages.last().unwrap();
        let next = image_of_b.union_unchecked(&a.compose_unchecked(current));
        if &next == current {
            let stabilized_at = stages.len();
            debug_assert!(stabilized_at <= n);
            return ChainTrace {
                stages,
                stabilized_at,
            };
        }
        stages.push(next);
    }
    unreachable!("iterate did not stabilize within {n} steps")
}

pub(crate) fn iterate_chain_unchecked(a: &Relation, b: &Relation) -> Relation {
    let n = a.size();
    let image_of_b = a.compose_unchecked(b);
    let mut current = image_of_b.clone();
    for _ in 0..n {
        let next = image_of_b.union_unchecked(&a.compose_unchecked(&current));
        if next == current {
            return current;
        }
        current = next;
    }
    unreachable!("iterate did not stabilize within {n} steps")
}

pub(crate) fn chain_unchecked(a: &Relation, b: &Relation) -> Relation {
    b.union_unchecked(&iterate_chain_unchecked(a, b))
}

/// `a_00;b`: the union of `a^k;b` over all `k >= 1`.
pub fn iterate_chain(a: &Relation, b: &Relation) -> Result<Relation> {
    a.union(b)?;
    Ok(iterate_chain_unchecked(a, b))
}

/// `a_0;b = b + a_00;b`.
pub fn chain(a: &Relation, b: &Relation) -> Result<Relation> {
    a.union(b)?;
    Ok(chain_unchecked(a, b))
}

/// `a;b ⊆ b`: `b` is closed under `a`.
pub fn is_closed(a: &Relation, b: &Relation) -> Result<bool> {
    a.compose(b)?.includes(b)
}

/// `a;a ⊆ a`.
pub fn is_transitive(a: &Relation) -> bool {
    a.compose_unchecked(a).includes_unchecked(a)
}

pub fn chain_trace(a: &Relation, b: &Relation) -> Result<ChainTrace> {
    a.union(b)?;
    Ok(trace_unchecked(a, b))
}
