//! Brute-force validity checking of formulas over finite universes.
//!
//! A [`Claim`] is a formula whose free variables are implicitly universally
//! quantified. [`check_exhaustive`] walks every assignment on one universe in
//! canonical order: variables alphabetically, the first variable most
//! significant, each variable's relation in [`enumerate_relations`] order. The
//! reported counterexample is always the first one in that order, however the
//! search is split across worker threads.
//!
//! [`enumerate_relations`]: crate::relation::enumerate_relations

mod catalog;
pub(crate) mod compiled;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::relation::{Relation, MAX_ENUMERABLE_UNIVERSE};
use crate::syntax::{
    evaluate, evaluate_formula, parse_formula, Env, EvalError, Formula, ParseError, Term, Var,
};

pub use catalog::{
    catalog, lookup, parse_catalog, run_catalog, CatalogEntry, CatalogError, CatalogReport,
    EntryOutcome, EntryReport, Expected,
};
use compiled::Builder;

/// Assignments per exhaustive run are indexed by a `u64`; beyond this many
/// bits the space is not enumerable.
const MAX_SEARCH_BITS: usize = 62;

/// Hard ceiling on exhaustive runs requested through [`CheckConfig::full`]:
/// 2^27 assignments, three variables on three elements.
pub const FULL_BUDGET_BITS: usize = 27;

/// Default ceiling: 2^20 assignments.
pub const DEFAULT_BUDGET_BITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{vars} variables on {n} elements span 2^{bits} assignments, too many to enumerate")]
    TooLarge { vars: usize, n: usize, bits: usize },
    #[error("universe size must be at least 1")]
    EmptyUniverse,
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("assignment does not falsify {0}")]
    NotACounterexample(Formula),
}

/// A formula together with its free variables in alphabetical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    formula: Formula,
    free_vars: Vec<Var>,
}

impl Claim {
    pub fn new(formula: Formula) -> Self {
        let free_vars = formula.vars().into_iter().collect();
        Claim { formula, free_vars }
    }

    pub fn parse(text: &str) -> Result<Self, VerifyError> {
        Ok(Claim::new(parse_formula(text)?))
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn free_vars(&self) -> &[Var] {
        &self.free_vars
    }
}

/// How [`check_claim`] and [`run_catalog`] split work between exhaustive
/// enumeration and random sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckConfig {
    /// Universe sizes `1..=max_exhaustive_size` are enumerated exhaustively
    /// when their assignment space fits the budget.
    pub max_exhaustive_size: usize,
    /// Exhaustive runs are limited to `2^budget_bits` assignments; larger
    /// sizes up to `max_exhaustive_size` fall back to `fallback_samples` draws.
    pub budget_bits: usize,
    pub fallback_samples: usize,
    /// Additional sampled sizes, `(universe size, sample count)`.
    pub sample_sizes: Vec<(usize, usize)>,
    pub seed: u64,
    /// Canonical-first counterexamples. When off, parallel search may report
    /// any counterexample it hits first.
    pub deterministic: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_exhaustive_size: 3,
            budget_bits: DEFAULT_BUDGET_BITS,
            fallback_samples: 1000,
            sample_sizes: vec![(4, 1000)],
            seed: 0,
            deterministic: true,
        }
    }
}

impl CheckConfig {
    /// Exhaustive at every size up to `max_size`, under the hard 2^27 ceiling.
    pub fn full(max_size: usize) -> Self {
        CheckConfig {
            max_exhaustive_size: max_size,
            budget_bits: FULL_BUDGET_BITS,
            ..CheckConfig::default()
        }
    }
}

/// A falsifying assignment. Construction re-evaluates the formula, so a value
/// of this type always witnesses a real failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterExample {
    size: usize,
    assignment: Env,
    formula: Formula,
}

impl CounterExample {
    pub fn new(size: usize, assignment: Env, formula: Formula) -> Result<Self, VerifyError> {
        if evaluate_formula(&formula, &assignment, size)? {
            return Err(VerifyError::NotACounterexample(formula));
        }
        Ok(CounterExample {
            size,
            assignment,
            formula,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn assignment(&self) -> &Env {
        &self.assignment
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }
}

/// `a={(0,1)} b={}` style listing of an assignment.
pub fn format_assignment(env: &Env) -> String {
    env.iter()
        .map(|(v, r)| {
            format!(
                "{v}={{{}}}",
                r.pairs()
                    .map(|(i, j)| format!("({i},{j})"))
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for CounterExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={}: {}",
            self.size,
            format_assignment(&self.assignment)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No counterexample among all assignments at each listed size.
    Valid {
        sizes: Vec<usize>,
    },
    CounterExample(CounterExample),
    /// Exhaustive at `exhaustive`, and no failure among `(size, count)` random
    /// draws from `seed`.
    SampledClean {
        exhaustive: Vec<usize>,
        sampled: Vec<(usize, usize)>,
        seed: u64,
    },
}

impl Verdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::CounterExample(_))
    }

    pub fn counterexample(&self) -> Option<&CounterExample> {
        match self {
            Verdict::CounterExample(cx) => Some(cx),
            _ => None,
        }
    }

    /// Short keyword: `valid`, `clean` or `counterexample`.
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Valid { .. } => "valid",
            Verdict::SampledClean { .. } => "clean",
            Verdict::CounterExample(_) => "counterexample",
        }
    }

    /// One-line detail without the keyword.
    pub fn detail(&self) -> String {
        let sizes = |s: &[usize]| {
            s.iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Verdict::Valid { sizes: s } => format!("exhaustive n={}", sizes(s)),
            Verdict::SampledClean {
                exhaustive,
                sampled,
                seed,
            } => {
                let sampled = sampled
                    .iter()
                    .map(|(n, c)| format!("{n}x{c}"))
                    .collect::<Vec<_>>()
                    .join(",");
                if exhaustive.is_empty() {
                    format!("sampled n={sampled} seed={seed}")
                } else {
                    format!(
                        "exhaustive n={}; sampled n={sampled} seed={seed}",
                        sizes(exhaustive)
                    )
                }
            }
            Verdict::CounterExample(cx) => cx.to_string(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.kind(), self.detail())
    }
}

// ---------------------------------------------------------------------------
// search

pub(crate) fn search_bits(vars: usize, n: usize) -> Result<usize, VerifyError> {
    if n == 0 {
        return Err(VerifyError::EmptyUniverse);
    }
    let bits = vars * n * n;
    if n > MAX_ENUMERABLE_UNIVERSE || bits > MAX_SEARCH_BITS {
        return Err(VerifyError::TooLarge { vars, n, bits });
    }
    Ok(bits)
}

#[inline]
pub(crate) fn decode(index: u64, n: usize, slots: &mut [Relation]) {
    let per = n * n;
    let mask = (1u64 << per) - 1;
    let k = slots.len();
    for (v, slot) in slots.iter_mut().enumerate() {
        let word = (index >> (per * (k - 1 - v))) & mask;
        *slot = Relation::from_word_unchecked(n, word);
    }
}

/// Relations of the assignment at canonical `index`.
pub(crate) fn assignment_at(index: u64, vars: usize, n: usize) -> Vec<Relation> {
    let zero = Relation::bottom(n).expect("valid universe");
    let mut slots = vec![zero; vars];
    decode(index, n, &mut slots);
    slots
}

pub(crate) fn to_env(vars: &[Var], slots: &[Relation]) -> Env {
    vars.iter().copied().zip(slots.iter().cloned()).collect()
}

pub(crate) const CHUNK: usize = 1 << 12;

/// Whether moving to `index` changed any variable but the last, i.e. whether
/// hoisted values must be recomputed.
#[inline]
pub(crate) fn prefix_changed(index: u64, first: bool, vars: usize, n: usize) -> bool {
    first || vars <= 1 || index & ((1u64 << (n * n)) - 1) == 0
}

/// Index of the first assignment (over `vars` variables on `n` elements) for
/// which `hit` returns true. Each worker owns a state built by `init`; `hit`
/// also learns whether any variable but the last changed since its previous
/// call. With `canonical` unset any hit may be returned.
pub(crate) fn find_hit<S, I, F>(
    vars: usize,
    n: usize,
    canonical: bool,
    init: I,
    hit: F,
) -> Result<Option<u64>, VerifyError>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &[Relation], bool) -> bool + Sync,
{
    let bits = search_bits(vars, n)?;
    let total = 1u64 << bits;
    let chunks = total.div_ceil(CHUNK as u64) as usize;
    let zero = Relation::bottom(n).expect("valid universe");
    let scan = |c: usize| -> Option<u64> {
        let mut state = init();
        let mut slots = vec![zero.clone(); vars];
        let start = c as u64 * CHUNK as u64;
        let end = (start + CHUNK as u64).min(total);
        for index in start..end {
            decode(index, n, &mut slots);
            if hit(
                &mut state,
                &slots,
                prefix_changed(index, index == start, vars, n),
            ) {
                return Some(index);
            }
        }
        None
    };
    Ok(if canonical {
        (0..chunks).into_par_iter().find_map_first(scan)
    } else {
        (0..chunks).into_par_iter().find_map_any(scan)
    })
}

fn exhaustive_with(claim: &Claim, n: usize, canonical: bool) -> Result<Verdict, VerifyError> {
    let vars = claim.free_vars();
    search_bits(vars.len(), n)?;
    let mut b = Builder::new(vars, n);
    let f = b.formula(claim.formula());
    let prog = b.finish();
    let hit = find_hit(
        vars.len(),
        n,
        canonical,
        || prog.machine(),
        |m, slots, full| {
            prog.load(m, slots, full);
            !f.eval(m)
        },
    )?;
    Ok(match hit {
        None => Verdict::Valid { sizes: vec![n] },
        Some(index) => {
            let env = to_env(vars, &assignment_at(index, vars.len(), n));
            Verdict::CounterExample(CounterExample::new(n, env, claim.formula().clone())?)
        }
    })
}

/// Checks `claim` on every assignment over a universe of size `n` and reports
/// the canonically first counterexample, if any.
pub fn check_exhaustive(claim: &Claim, n: usize) -> Result<Verdict, VerifyError> {
    exhaustive_with(claim, n, true)
}

/// `count` random assignments of `vars` relations on `n` elements, from a
/// ChaCha8 stream seeded with `seed`.
pub(crate) fn random_assignments(
    vars: usize,
    n: usize,
    count: usize,
    seed: u64,
) -> impl Iterator<Item = Result<Vec<Relation>, EvalError>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| {
        (0..vars)
            .map(|_| Relation::random(n, &mut rng).map_err(EvalError::from))
            .collect()
    })
}

/// Checks `claim` on `count` random assignments drawn from a ChaCha8 stream
/// seeded with `seed`; every pair is present with probability 1/2.
pub fn check_sampled(
    claim: &Claim,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Verdict, VerifyError> {
    if n == 0 {
        return Err(VerifyError::EmptyUniverse);
    }
    if count == 0 {
        return Err(VerifyError::NoSamples);
    }
    let vars = claim.free_vars();
    // validates n before the builder materializes constants
    Relation::bottom(n).map_err(EvalError::from)?;
    let mut b = Builder::new(vars, n);
    let f = b.formula(claim.formula());
    let prog = b.finish();
    let mut m = prog.machine();
    for slots in random_assignments(vars.len(), n, count, seed) {
        let slots = slots?;
        prog.load(&mut m, &slots, true);
        if !f.eval(&m) {
            let env = to_env(vars, &slots);
            return Ok(Verdict::CounterExample(CounterExample::new(
                n,
                env,
                claim.formula().clone(),
            )?));
        }
    }
    Ok(Verdict::SampledClean {
        exhaustive: vec![],
        sampled: vec![(n, count)],
        seed,
    })
}

/// First canonical assignment on `n` elements where `lhs` is strictly
/// included in `rhs`. Assumes `lhs <= rhs` is valid; only strictness is tested.
pub fn find_strictness_witness(
    lhs: &Term,
    rhs: &Term,
    n: usize,
) -> Result<Option<Env>, VerifyError> {
    let mut set = lhs.vars();
    set.extend(rhs.vars());
    let vars: Vec<Var> = set.into_iter().collect();
    search_bits(vars.len(), n)?;
    let mut b = Builder::new(&vars, n);
    let (l, r) = (b.term(lhs), b.term(rhs));
    let prog = b.finish();
    let hit = find_hit(
        vars.len(),
        n,
        true,
        || prog.machine(),
        |m, slots, full| {
            prog.load(m, slots, full);
            let (x, y) = (m.value(l), m.value(r));
            x.includes_unchecked(y) && x != y
        },
    )?;
    let Some(index) = hit else { return Ok(None) };
    let env = to_env(&vars, &assignment_at(index, vars.len(), n));
    // confirm through the public evaluator
    let (x, y) = (evaluate(lhs, &env, n)?, evaluate(rhs, &env, n)?);
    debug_assert!(x.includes(&y).unwrap_or(false) && x != y);
    Ok(Some(env))
}

/// Runs the exhaustive/sampled plan of `config` on one claim, stopping at the
/// first counterexample.
pub fn check_claim(claim: &Claim, config: &CheckConfig) -> Result<Verdict, VerifyError> {
    let k = claim.free_vars().len();
    let mut exhaustive = vec![];
    let mut sampled = vec![];
    for n in 1..=config.max_exhaustive_size {
        if k * n * n <= config.budget_bits {
            let v = exhaustive_with(claim, n, config.deterministic)?;
            if v.is_counterexample() {
                return Ok(v);
            }
            exhaustive.push(n);
        } else if config.fallback_samples > 0 {
            let v = check_sampled(claim, n, config.fallback_samples, config.seed)?;
            if v.is_counterexample() {
                return Ok(v);
            }
            sampled.push((n, config.fallback_samples));
        }
    }
    for &(n, count) in &config.sample_sizes {
        if count == 0 || exhaustive.contains(&n) {
            continue;
        }
        let v = check_sampled(claim, n, count, config.seed)?;
        if v.is_counterexample() {
            return Ok(v);
        }
        sampled.push((n, count));
    }
    Ok(if sampled.is_empty() {
        Verdict::Valid { sizes: exhaustive }
    } else {
        Verdict::SampledClean {
            exhaustive,
            sampled,
            seed: config.seed,
        }
    })
}
