//! Shared helpers for the integration tests: seeded random syntax trees and
//! brute-force reference semantics.

#![allow(dead_code)]

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relcalc::syntax::{Const, Env, Formula, Term, Var};
use relcalc::{enumerate_relations, Relation};

pub fn var(c: char) -> Var {
    Var::new(c).unwrap()
}

pub fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
    Relation::from_pairs(n, pairs.iter().copied()).unwrap()
}

pub fn env(bindings: &[(char, Relation)]) -> Env {
    bindings.iter().map(|(c, r)| (var(*c), r.clone())).collect()
}

pub fn all(n: usize) -> Vec<Relation> {
    enumerate_relations(n).unwrap().collect()
}

const LETTERS: [char; 5] = ['a', 'b', 'c', 'd', 'e'];
const CONSTS: [Const; 4] = [Const::Zero, Const::One, Const::Diag, Const::AntiDiag];

/// A random term of at most `depth` levels over the letters a..e.
pub fn random_term(rng: &mut impl RngCore, depth: u32) -> Term {
    random_term_over(rng, depth, &LETTERS)
}

/// A random term of at most `depth` levels over `letters`.
pub fn random_term_over(rng: &mut impl RngCore, depth: u32, letters: &[char]) -> Term {
    let leaf = depth == 0 || rng.random_ratio(1, 4);
    if leaf {
        return if rng.random_ratio(1, 5) {
            Term::Const(CONSTS[rng.random_range(0..4)])
        } else {
            Term::Var(var(letters[rng.random_range(0..letters.len())]))
        };
    }
    let d = depth - 1;
    match rng.random_range(0..7) {
        0 => Term::Complement(Box::new(random_term_over(rng, d, letters))),
        1 => Term::Union(
            (0..rng.random_range(2..4))
                .map(|_| random_term_over(rng, d, letters))
                .collect(),
        ),
        2 => Term::Intersect(
            (0..rng.random_range(2..4))
                .map(|_| random_term_over(rng, d, letters))
                .collect(),
        ),
        3 => Term::Compose(
            Box::new(random_term_over(rng, d, letters)),
            Box::new(random_term_over(rng, d, letters)),
        ),
        4 => Term::RelSum(
            Box::new(random_term_over(rng, d, letters)),
            Box::new(random_term_over(rng, d, letters)),
        ),
        5 => Term::Chain(
            var(letters[rng.random_range(0..letters.len())]),
            Box::new(random_term_over(rng, d, letters)),
        ),
        _ => Term::Iterate(
            var(letters[rng.random_range(0..letters.len())]),
            Box::new(random_term_over(rng, d, letters)),
        ),
    }
}

pub fn random_formula(rng: &mut impl RngCore, depth: u32) -> Formula {
    random_formula_over(rng, depth, 3, &LETTERS)
}

/// A random formula whose atoms compare terms of at most `term_depth` levels.
pub fn random_formula_over(
    rng: &mut impl RngCore,
    depth: u32,
    term_depth: u32,
    letters: &[char],
) -> Formula {
    if depth == 0 || rng.random_ratio(1, 2) {
        let (a, b) = (
            random_term_over(rng, term_depth, letters),
            random_term_over(rng, term_depth, letters),
        );
        return if rng.random_bool(0.5) {
            Formula::Inclusion(a, b)
        } else {
            Formula::Equation(a, b)
        };
    }
    let d = depth - 1;
    if rng.random_bool(0.5) {
        let p = random_formula_over(rng, d, term_depth, letters);
        let q = random_formula_over(rng, d, term_depth, letters);
        Formula::Implication(Box::new(p), Box::new(q))
    } else {
        let count = rng.random_range(2..4);
        Formula::Conjunction(
            (0..count)
                .map(|_| random_formula_over(rng, d, term_depth, letters))
                .collect(),
        )
    }
}

/// `count` terms from a fixed seed.
pub fn seeded_terms(seed: u64, count: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_term(&mut rng, 4)).collect()
}

/// Membership of (i,j) in a;b, straight from the existential definition.
pub fn compose_coeff(a: &Relation, b: &Relation, i: usize, j: usize) -> bool {
    (0..a.size()).any(|k| a.contains(i, k) && b.contains(k, j))
}

/// Membership of (i,j) in the relative sum, from the universal definition.
pub fn relsum_coeff(a: &Relation, b: &Relation, i: usize, j: usize) -> bool {
    (0..a.size()).all(|k| a.contains(i, k) || b.contains(k, j))
}

/// Chain of b under a by breadth-first reachability: (i,j) is in the chain
/// when some a-walk of length >= 0 leads from i to m with (m,j) in b.
pub fn chain_oracle(a: &Relation, b: &Relation) -> Relation {
    let n = a.size();
    let mut pairs = vec![];
    for i in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![i];
        seen[i] = true;
        while let Some(m) = stack.pop() {
            for (k, s) in seen.iter_mut().enumerate() {
                if a.contains(m, k) && !*s {
                    *s = true;
                    stack.push(k);
                }
            }
        }
        for m in (0..n).filter(|&m| seen[m]) {
            for j in 0..n {
                if b.contains(m, j) {
                    pairs.push((i, j));
                }
            }
        }
    }
    Relation::from_pairs(n, pairs).unwrap()
}
