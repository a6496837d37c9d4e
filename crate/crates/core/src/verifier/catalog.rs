//! The bundled statement catalog and the runner that checks it.
//!
//! Records live in `data/catalog.tsv`, one per line with tab-separated
//! fields: id, expected verdict, formula, set-theoretic statement, note.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use super::compiled::{Builder, Machine};
use super::{
    assignment_at, check_claim, find_hit, format_assignment, random_assignments, to_env,
    CheckConfig, Claim, Verdict, VerifyError,
};
use crate::chains;
use crate::relation::Relation;
use crate::syntax::{parse_formula, Env, EvalError, Formula, Term, Var};

const BUNDLED: &str = include_str!("../../data/catalog.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expected {
    Valid,
    Invalid,
    Definition,
}

impl Expected {
    pub fn as_str(self) -> &'static str {
        match self {
            Expected::Valid => "valid",
            Expected::Invalid => "invalid",
            Expected::Definition => "definition",
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Expected {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "valid" => Ok(Expected::Valid),
            "invalid" => Ok(Expected::Invalid),
            "definition" => Ok(Expected::Definition),
            other => Err(format!("unknown expected verdict '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub expected: Expected,
    /// Source text as shipped.
    pub text: String,
    pub formula: Formula,
    pub settheory: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("catalog line {line}: {msg}")]
pub struct CatalogError {
    pub line: usize,
    pub msg: String,
}

/// Parses catalog records; blank lines and `#` comments are skipped.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out: Vec<CatalogEntry> = vec![];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| CatalogError { line, msg };
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let [id, expected, formula, settheory, note] = fields[..] else {
            return Err(err(format!(
                "expected 5 tab-separated fields, found {}",
                fields.len()
            )));
        };
        if out.iter().any(|e| e.id == id) {
            return Err(err(format!("duplicate id '{id}'")));
        }
        out.push(CatalogEntry {
            id: id.to_string(),
            expected: expected.parse().map_err(err)?,
            text: formula.to_string(),
            formula: parse_formula(formula).map_err(|e| err(e.to_string()))?,
            settheory: settheory.to_string(),
            note: note.to_string(),
        });
    }
    Ok(out)
}

/// The bundled catalog.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(BUNDLED).expect("bundled catalog is well-formed"))
}

/// Finds a bundled entry by id, ignoring ASCII case.
pub fn lookup(id: &str) -> Option<&'static CatalogEntry> {
    catalog().iter().find(|e| e.id.eq_ignore_ascii_case(id))
}

/// What running one entry produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryOutcome {
    Checked(Verdict),
    /// The definitional formula agrees with the engine's own notion at every
    /// assignment tried.
    Consistent {
        exhaustive: Vec<usize>,
        sampled: Vec<(usize, usize)>,
    },
    /// An assignment where formula and engine disagree.
    Inconsistent {
        size: usize,
        assignment: Env,
    },
}

impl EntryOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            EntryOutcome::Checked(v) => v.kind(),
            EntryOutcome::Consistent { .. } => "consistent",
            EntryOutcome::Inconsistent { .. } => "inconsistent",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            EntryOutcome::Checked(v) => v.detail(),
            EntryOutcome::Consistent {
                exhaustive,
                sampled,
            } => {
                let mut parts = vec![];
                if !exhaustive.is_empty() {
                    let s: Vec<_> = exhaustive.iter().map(|n| n.to_string()).collect();
                    parts.push(format!("exhaustive n={}", s.join(",")));
                }
                if !sampled.is_empty() {
                    let s: Vec<_> = sampled.iter().map(|(n, c)| format!("{n}x{c}")).collect();
                    parts.push(format!("sampled n={}", s.join(",")));
                }
                parts.join("; ")
            }
            EntryOutcome::Inconsistent { size, assignment } => {
                format!("n={size}: {}", format_assignment(assignment))
            }
        }
    }

    fn matches(&self, expected: Expected) -> bool {
        match (expected, self) {
            (Expected::Valid, EntryOutcome::Checked(v)) => !v.is_counterexample(),
            (Expected::Invalid, EntryOutcome::Checked(v)) => v.is_counterexample(),
            (Expected::Definition, EntryOutcome::Consistent { .. }) => true,
            (Expected::Definition, EntryOutcome::Checked(v)) => !v.is_counterexample(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryReport {
    pub id: String,
    pub expected: Expected,
    pub outcome: EntryOutcome,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
}

impl CatalogReport {
    pub fn all_match(&self) -> bool {
        self.entries.iter().all(|e| e.matches)
    }

    pub fn get(&self, id: &str) -> Option<&EntryReport> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Aligned text, one line per entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{:<7} {:<15} expected {:<11} {:<9} {}\n",
                e.id,
                e.outcome.kind(),
                e.expected.as_str(),
                if e.matches { "match" } else { "MISMATCH" },
                e.outcome.detail()
            ));
        }
        out
    }

    /// Tab-separated records: id, verdict, expected, match flag, detail.
    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                e.id,
                e.outcome.kind(),
                e.expected.as_str(),
                if e.matches { "match" } else { "mismatch" },
                e.outcome.detail()
            ));
        }
        out
    }
}

/// The engine-side notion a definitional formula is checked against.
#[derive(Debug, Clone, Copy)]
enum Reference {
    /// `x;y <= y`: y is closed under x.
    Closed(Var, Var),
    /// `x_0;y = y + x_00;y`: the chain is the generator plus the iterate.
    Unfold(Var, Var),
}

fn reference_of(f: &Formula) -> Option<Reference> {
    match f {
        Formula::Inclusion(Term::Compose(x, y), rhs) => match (&**x, &**y, rhs) {
            (Term::Var(x), Term::Var(y), Term::Var(z)) if y == z => Some(Reference::Closed(*x, *y)),
            _ => None,
        },
        Formula::Equation(Term::Chain(x, y), Term::Union(parts)) => match (&**y, &parts[..]) {
            (Term::Var(y), [Term::Var(g), Term::Iterate(x2, y2)])
                if g == y && x2 == x && **y2 == Term::Var(*y) =>
            {
                Some(Reference::Unfold(*x, *y))
            }
            _ => None,
        },
        _ => None,
    }
}

fn reference_holds(r: Reference, vars: &[Var], slots: &[Relation]) -> bool {
    let slot = |v: Var| &slots[vars.iter().position(|&x| x == v).expect("bound")];
    match r {
        Reference::Closed(x, y) => chains::is_closed(slot(x), slot(y)).expect("same universe"),
        Reference::Unfold(x, y) => {
            let (a, b) = (slot(x), slot(y));
            let chain = chains::chain(a, b).expect("same universe");
            let iterate = chains::iterate_chain(a, b).expect("same universe");
            chain == b.union(&iterate).expect("same universe")
        }
    }
}

fn check_definition(
    claim: &Claim,
    r: Reference,
    config: &CheckConfig,
) -> Result<EntryOutcome, VerifyError> {
    let vars = claim.free_vars();
    let k = vars.len();
    let inconsistent = |n: usize, slots: &[Relation]| EntryOutcome::Inconsistent {
        size: n,
        assignment: to_env(vars, slots),
    };

    let mut exhaustive = vec![];
    let mut sampled = vec![];
    for n in 1..=config.max_exhaustive_size {
        if k * n * n <= config.budget_bits {
            let mut b = Builder::new(vars, n);
            let f = b.formula(claim.formula());
            let prog = b.finish();
            let disagree = |m: &mut Machine, slots: &[Relation], full: bool| {
                prog.load(m, slots, full);
                f.eval(m) != reference_holds(r, vars, slots)
            };
            if let Some(index) = find_hit(k, n, config.deterministic, || prog.machine(), disagree)?
            {
                return Ok(inconsistent(n, &assignment_at(index, k, n)));
            }
            exhaustive.push(n);
        } else if config.fallback_samples > 0 {
            if let Some(bad) = sample_definition(claim, r, n, config.fallback_samples, config.seed)?
            {
                return Ok(bad);
            }
            sampled.push((n, config.fallback_samples));
        }
    }
    for &(n, count) in &config.sample_sizes {
        if count == 0 || exhaustive.contains(&n) {
            continue;
        }
        if let Some(bad) = sample_definition(claim, r, n, count, config.seed)? {
            return Ok(bad);
        }
        sampled.push((n, count));
    }
    Ok(EntryOutcome::Consistent {
        exhaustive,
        sampled,
    })
}

fn sample_definition(
    claim: &Claim,
    r: Reference,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Option<EntryOutcome>, VerifyError> {
    let vars = claim.free_vars();
    Relation::bottom(n).map_err(EvalError::from)?;
    let mut b = Builder::new(vars, n);
    let f = b.formula(claim.formula());
    let prog = b.finish();
    let mut m = prog.machine();
    for slots in random_assignments(vars.len(), n, count, seed) {
        let slots = slots?;
        prog.load(&mut m, &slots, true);
        if f.eval(&m) != reference_holds(r, vars, &slots) {
            return Ok(Some(EntryOutcome::Inconsistent {
                size: n,
                assignment: to_env(vars, &slots),
            }));
        }
    }
    Ok(None)
}

/// Runs one entry under `config`.
pub fn run_entry(entry: &CatalogEntry, config: &CheckConfig) -> Result<EntryReport, VerifyError> {
    let claim = Claim::new(entry.formula.clone());
    let outcome = match (entry.expected, reference_of(&entry.formula)) {
        (Expected::Definition, Some(r)) => check_definition(&claim, r, config)?,
        _ => EntryOutcome::Checked(check_claim(&claim, config)?),
    };
    Ok(EntryReport {
        id: entry.id.clone(),
        expected: entry.expected,
        matches: outcome.matches(entry.expected),
        outcome,
    })
}

/// Checks every bundled entry and compares the result with its expected
/// verdict. Mismatches are report content, not errors.
pub fn run_catalog(config: &CheckConfig) -> Result<CatalogReport, VerifyError> {
    let entries = catalog()
        .iter()
        .map(|e| run_entry(e, config))
        .collect::<Result<_, _>>()?;
    Ok(CatalogReport { entries })
}
