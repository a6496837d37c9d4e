//! A small kernel for inclusion reasoning over relative terms.
//!
//! A [`ProofScript`] lists hypotheses, step schemas, numbered steps and a goal.
//! [`check_script`] verifies every step syntactically against its rule;
//! [`audit_script`] independently model-checks every step on all assignments
//! over small universes.
//!
//! Rules:
//!
//! | name      | premises                              | conclusion            |
//! |-----------|---------------------------------------|-----------------------|
//! | `hyp`     | none                                  | a declared hypothesis |
//! | `mono`    | `x <= y`                              | `t;x <= t;y`          |
//! | `trans`   | `x <= y`, `y <= z`                    | `x <= z`              |
//! | `union`   | `x1 <= c`, ..., `xk <= c`             | `x1 + ... + xk <= c`  |
//! | `schema`  | `a;...;a;x <= c` (k times, k >= 0)    | one more `a`          |
//! | `iterate` | `a^1;x <= c`, ..., `a^N;x <= c`       | `a_00;x <= c`         |
//! | `unfold`  | any formula                           | the same formula with `a_0;x` and `x + a_00;x` exchanged |
//!
//! `schema` needs a declared schema `x <= c -> a;x <= c` with the same `a`,
//! `x` and `c`; it stands for that implication at every depth. `iterate` with
//! N premises covers every power of `a` only on universes of at most N
//! elements, since longer paths there can always be shortened.

mod script;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::relation::Relation;
use crate::syntax::{Formula, Term, Var};
use crate::verifier::compiled::{Builder, CFormula};
use crate::verifier::{
    assignment_at, decode, prefix_changed, search_bits, to_env, VerifyError, CHUNK,
};

pub use script::ScriptError;

const BUNDLED: &str = include_str!("../../data/chain_induction.proof");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Hypothesis,
    Mono,
    TransIncl,
    UnionBound,
    SchemaStep,
    IterateIntro,
    Unfold,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::Hypothesis,
        Rule::Mono,
        Rule::TransIncl,
        Rule::UnionBound,
        Rule::SchemaStep,
        Rule::IterateIntro,
        Rule::Unfold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Hypothesis => "hyp",
            Rule::Mono => "mono",
            Rule::TransIncl => "trans",
            Rule::UnionBound => "union",
            Rule::SchemaStep => "schema",
            Rule::IterateIntro => "iterate",
            Rule::Unfold => "unfold",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule '{s}'"))
    }
}

/// A declared step license `x <= c -> a;x <= c`, read at every depth:
/// `a^k;x <= c -> a^(k+1);x <= c` for all k >= 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub step: Var,
    pub base: Term,
    pub bound: Term,
    formula: Formula,
}

impl Schema {
    pub fn from_formula(f: &Formula) -> Option<Schema> {
        let Formula::Implication(p, q) = f else {
            return None;
        };
        let (Formula::Inclusion(x, c), Formula::Inclusion(ax, c2)) = (&**p, &**q) else {
            return None;
        };
        let Term::Compose(a, x2) = ax else {
            return None;
        };
        let Term::Var(step) = **a else { return None };
        (**x2 == *x && c2 == c).then(|| Schema {
            step,
            base: x.clone(),
            bound: c.clone(),
            formula: f.clone(),
        })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// The depth-`k` implication.
    pub fn instance(&self, k: usize) -> Formula {
        Formula::implies(
            Formula::inclusion(power(self.step, k, &self.base), self.bound.clone()),
            Formula::inclusion(power(self.step, k + 1, &self.base), self.bound.clone()),
        )
    }
}

/// `a;(a;(...;x))` with `k` copies of `a`.
pub fn power(a: Var, k: usize, x: &Term) -> Term {
    (0..k).fold(x.clone(), |acc, _| Term::compose(Term::Var(a), acc))
}

fn factors(t: &Term, out: &mut Vec<Term>) {
    match t {
        Term::Compose(l, r) => {
            factors(l, out);
            factors(r, out);
        }
        _ => out.push(t.clone()),
    }
}

/// `k` such that `t` is `a^k;base` under some association of `;`.
fn depth_over(t: &Term, a: Var, base: &Term) -> Option<usize> {
    let (mut ft, mut fb) = (vec![], vec![]);
    factors(t, &mut ft);
    factors(base, &mut fb);
    let k = ft.len().checked_sub(fb.len())?;
    (ft[k..] == fb[..] && ft[..k].iter().all(|f| *f == Term::Var(a))).then_some(k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub rule: Rule,
    /// 1-based indices of earlier steps.
    pub premises: Vec<usize>,
    pub conclusion: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub hypotheses: Vec<Formula>,
    pub schemas: Vec<Schema>,
    pub steps: Vec<ProofStep>,
    pub goal: Formula,
}

impl ProofScript {
    fn vars(&self) -> Vec<Var> {
        let mut set = self.goal.vars();
        for f in self
            .hypotheses
            .iter()
            .chain(self.schemas.iter().map(|s| &s.formula))
            .chain(self.steps.iter().map(|s| &s.conclusion))
        {
            set.extend(f.vars());
        }
        set.into_iter().collect()
    }
}

/// The bundled derivation of `a_0;b <= c` from `b <= c` and the step schema
/// `b <= c -> a;b <= c`.
pub fn bundled_chain_induction() -> ProofScript {
    ProofScript::parse(BUNDLED).expect("bundled script parses")
}

/// Text of the bundled script.
pub fn bundled_chain_induction_text() -> &'static str {
    BUNDLED
}

// ---------------------------------------------------------------------------
// syntactic check

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("premise {0} does not refer to an earlier step")]
    BadPremise(usize),
    #[error("rule {rule} takes {expected} premise(s), found {found}")]
    PremiseCount {
        rule: Rule,
        expected: &'static str,
        found: usize,
    },
    #[error("{0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub index: usize,
    pub rule: Rule,
    pub conclusion: Formula,
    pub outcome: Result<(), StepError>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub steps: Vec<StepResult>,
    pub goal_reached: bool,
    /// Largest universe the `iterate` steps are sound for, when any are used.
    pub iterate_bound: Option<usize>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.goal_reached && self.steps.iter().all(|s| s.outcome.is_ok())
    }

    pub fn first_failure(&self) -> Option<&StepResult> {
        self.steps.iter().find(|s| s.outcome.is_err())
    }
}

fn shape(msg: impl Into<String>) -> StepError {
    StepError::Shape(msg.into())
}

fn count(rule: Rule, expected: &'static str, found: usize, ok: bool) -> Result<(), StepError> {
    if ok {
        Ok(())
    } else {
        Err(StepError::PremiseCount {
            rule,
            expected,
            found,
        })
    }
}

fn inclusion(f: &Formula) -> Result<(&Term, &Term), StepError> {
    match f {
        Formula::Inclusion(x, y) => Ok((x, y)),
        other => Err(shape(format!("'{other}' is not an inclusion"))),
    }
}

/// Replaces every chain `a_0;x` by `x + a_00;x`.
fn unfold_term(t: &Term) -> Term {
    let go = |x: &Term| Box::new(unfold_term(x));
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Complement(x) => Term::Complement(go(x)),
        Term::Union(ts) => Term::Union(ts.iter().map(unfold_term).collect()),
        Term::Intersect(ts) => Term::Intersect(ts.iter().map(unfold_term).collect()),
        Term::Compose(a, b) => Term::Compose(go(a), go(b)),
        Term::RelSum(a, b) => Term::RelSum(go(a), go(b)),
        Term::Chain(v, x) => {
            let x = unfold_term(x);
            Term::Union(vec![x.clone(), Term::Iterate(*v, Box::new(x))])
        }
        Term::Iterate(v, x) => Term::Iterate(*v, go(x)),
    }
}

fn unfold_formula(f: &Formula) -> Formula {
    match f {
        Formula::Inclusion(a, b) => Formula::Inclusion(unfold_term(a), unfold_term(b)),
        Formula::Equation(a, b) => Formula::Equation(unfold_term(a), unfold_term(b)),
        Formula::Implication(p, q) => {
            Formula::Implication(Box::new(unfold_formula(p)), Box::new(unfold_formula(q)))
        }
        Formula::Conjunction(fs) => Formula::Conjunction(fs.iter().map(unfold_formula).collect()),
    }
}

/// Checks one rule application; returns the `iterate` premise count.
fn check_step(
    script: &ProofScript,
    step: &ProofStep,
    premises: &[&Formula],
) -> Result<Option<usize>, StepError> {
    let n = premises.len();
    let rule = step.rule;
    match rule {
        Rule::Hypothesis => {
            count(rule, "0", n, n == 0)?;
            if !script.hypotheses.contains(&step.conclusion) {
                return Err(shape(format!(
                    "'{}' is not a declared hypothesis",
                    step.conclusion
                )));
            }
        }
        Rule::Mono => {
            count(rule, "1", n, n == 1)?;
            let (x, y) = inclusion(premises[0])?;
            let (l, r) = inclusion(&step.conclusion)?;
            let ok = match (l, r) {
                (Term::Compose(t1, x1), Term::Compose(t2, y1)) => {
                    t1 == t2 && **x1 == *x && **y1 == *y
                }
                _ => false,
            };
            if !ok {
                return Err(shape(format!("conclusion must be t;{x} <= t;{y}")));
            }
        }
        Rule::TransIncl => {
            count(rule, "2", n, n == 2)?;
            let (x, y) = inclusion(premises[0])?;
            let (y2, z) = inclusion(premises[1])?;
            if y != y2 {
                return Err(shape(format!("premises do not chain: '{y}' vs '{y2}'")));
            }
            if inclusion(&step.conclusion)? != (x, z) {
                return Err(shape(format!("conclusion must be {x} <= {z}")));
            }
        }
        Rule::UnionBound => {
            count(rule, "at least 2", n, n >= 2)?;
            let parts: Vec<(&Term, &Term)> = premises
                .iter()
                .map(|p| inclusion(p))
                .collect::<Result<_, _>>()?;
            let c = parts[0].1;
            if parts.iter().any(|(_, c2)| *c2 != c) {
                return Err(shape("premises have different bounds"));
            }
            let (l, r) = inclusion(&step.conclusion)?;
            let expected: Vec<Term> = parts.iter().map(|(x, _)| (*x).clone()).collect();
            if r != c || !matches!(l, Term::Union(xs) if *xs == expected) {
                return Err(shape(format!(
                    "conclusion must be the union of the premises' left sides within {c}"
                )));
            }
        }
        Rule::SchemaStep => {
            count(rule, "1", n, n == 1)?;
            let (p, c) = inclusion(premises[0])?;
            let (q, c2) = inclusion(&step.conclusion)?;
            let licensed = c == c2
                && script.schemas.iter().any(|s| {
                    s.bound == *c
                        && matches!(
                            (depth_over(p, s.step, &s.base), depth_over(q, s.step, &s.base)),
                            (Some(k), Some(k1)) if k1 == k + 1
                        )
                });
            if !licensed {
                return Err(shape("no declared schema licenses this step"));
            }
        }
        Rule::IterateIntro => {
            count(rule, "at least 1", n, n >= 1)?;
            let (l, c) = inclusion(&step.conclusion)?;
            let Term::Iterate(a, base) = l else {
                return Err(shape("conclusion must be a_00;x <= c"));
            };
            for (i, p) in premises.iter().enumerate() {
                let (x, c2) = inclusion(p)?;
                if c2 != c || depth_over(x, *a, base) != Some(i + 1) {
                    return Err(shape(format!(
                        "premise {} must be {} <= {c}",
                        i + 1,
                        power(*a, i + 1, base)
                    )));
                }
            }
            return Ok(Some(n));
        }
        Rule::Unfold => {
            count(rule, "1", n, n == 1)?;
            if step.conclusion == *premises[0] {
                return Err(shape("nothing unfolded"));
            }
            if unfold_formula(&step.conclusion) != unfold_formula(premises[0]) {
                return Err(shape("formulas differ beyond chain unfolding"));
            }
        }
    }
    Ok(None)
}

/// Verifies every step's rule application and that the last step proves the
/// goal. A script without steps passes when its goal is a hypothesis.
pub fn check_script(script: &ProofScript) -> CheckReport {
    if script.steps.is_empty() {
        let implicit = ProofScript {
            steps: vec![ProofStep {
                rule: Rule::Hypothesis,
                premises: vec![],
                conclusion: script.goal.clone(),
            }],
            ..script.clone()
        };
        return check_script(&implicit);
    }
    let mut results = vec![];
    let mut bound: Option<usize> = None;
    for (i, step) in script.steps.iter().enumerate() {
        let index = i + 1;
        let outcome = step
            .premises
            .iter()
            .map(|&p| {
                if p >= 1 && p < index {
                    Ok(&script.steps[p - 1].conclusion)
                } else {
                    Err(StepError::BadPremise(p))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .and_then(|premises| check_step(script, step, &premises));
        let outcome = outcome.map(|b| {
            if let Some(b) = b {
                bound = Some(bound.map_or(b, |old| old.min(b)));
            }
        });
        results.push(StepResult {
            index,
            rule: step.rule,
            conclusion: step.conclusion.clone(),
            outcome,
        });
    }
    let goal_reached = script.steps.last().map(|s| &s.conclusion) == Some(&script.goal);
    CheckReport {
        steps: results,
        goal_reached,
        iterate_bound: bound,
    }
}

// ---------------------------------------------------------------------------
// semantic audit

/// First assignment where a step's context and premises hold but its
/// conclusion fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub size: usize,
    pub assignment: crate::syntax::Env,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepAudit {
    pub index: usize,
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    /// Universes `1..=max_size` were enumerated.
    pub max_size: usize,
    pub steps: Vec<StepAudit>,
}

impl AuditReport {
    pub fn is_sound(&self) -> bool {
        self.steps.iter().all(|s| s.violation.is_none())
    }
}

/// Model-checks every step over all assignments on universes of size
/// `1..=n`. The context of a step is every hypothesis, every schema instance
/// up to depth `max(n, deepest step)`, and the step's premises; a violation
/// is an assignment satisfying the context with the conclusion false.
pub fn audit_script(script: &ProofScript, n: usize) -> Result<AuditReport, VerifyError> {
    let vars = script.vars();
    let k = vars.len();
    for size in 1..=n {
        search_bits(k, size)?;
    }
    let deepest = script
        .steps
        .iter()
        .filter_map(|s| {
            script
                .schemas
                .iter()
                .filter_map(|sc| match &s.conclusion {
                    Formula::Inclusion(l, _) => depth_over(l, sc.step, &sc.base),
                    _ => None,
                })
                .max()
        })
        .max()
        .unwrap_or(0);
    let depth = n.max(deepest);

    // out-of-range premises are the kernel's business; the audit ignores them
    let premises: Vec<Vec<usize>> = script
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.premises
                .iter()
                .filter(|&&p| p >= 1 && p <= i)
                .map(|&p| p - 1)
                .collect()
        })
        .collect();
    let m = script.steps.len();

    let mut first: Vec<Option<Violation>> = vec![None; m];
    for size in 1..=n {
        let total = 1u64 << search_bits(k, size)?;
        let mut b = Builder::new(&vars, size);
        let mut context: Vec<CFormula> = script.hypotheses.iter().map(|h| b.formula(h)).collect();
        for s in &script.schemas {
            context.extend((0..=depth).map(|d| b.formula(&s.instance(d))));
        }
        let conclusions: Vec<CFormula> = script
            .steps
            .iter()
            .map(|s| b.formula(&s.conclusion))
            .collect();
        let prog = b.finish();
        let zero = Relation::bottom(size).expect("valid universe");
        let chunks = total.div_ceil(CHUNK as u64) as usize;
        let scan = |c: usize| -> Vec<Option<u64>> {
            let mut hits = vec![None; m];
            let mut machine = prog.machine();
            let mut slots = vec![zero.clone(); k];
            let mut truth = vec![false; m];
            let start = c as u64 * CHUNK as u64;
            for index in start..(start + CHUNK as u64).min(total) {
                decode(index, size, &mut slots);
                prog.load(
                    &mut machine,
                    &slots,
                    prefix_changed(index, index == start, k, size),
                );
                if !context.iter().all(|f| f.eval(&machine)) {
                    continue;
                }
                for (s, f) in conclusions.iter().enumerate() {
                    truth[s] = f.eval(&machine);
                }
                for s in 0..m {
                    if hits[s].is_none() && !truth[s] && premises[s].iter().all(|&p| truth[p]) {
                        hits[s] = Some(index);
                    }
                }
            }
            hits
        };
        let merged = (0..chunks).into_par_iter().map(scan).reduce(
            || vec![None; m],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.or(y)).collect(),
        );
        for (s, hit) in merged.into_iter().enumerate() {
            if let (None, Some(index)) = (&first[s], hit) {
                first[s] = Some(Violation {
                    size,
                    assignment: to_env(&vars, &assignment_at(index, k, size)),
                });
            }
        }
    }
    Ok(AuditReport {
        max_size: n,
        steps: first
            .into_iter()
            .enumerate()
            .map(|(i, violation)| StepAudit {
                index: i + 1,
                violation,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{evaluate_formula, parse_formula, parse_term};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn script(text: &str) -> ProofScript {
        ProofScript::parse(text).unwrap()
    }

    #[test]
    fn bundled_passes_kernel() {
        let s = bundled_chain_induction();
        assert_eq!(s.goal, f("a_0;b <= c"));
        assert_eq!(s.hypotheses, vec![f("b <= c")]);
        assert_eq!(s.schemas.len(), 1);
        let report = check_script(&s);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.steps.len(), 7);
        assert_eq!(report.iterate_bound, Some(3));
    }

    #[test]
    fn bundled_passes_audit() {
        for n in 1..=2 {
            let report = audit_script(&bundled_chain_induction(), n).unwrap();
            assert!(report.is_sound(), "n={n}: {report:?}");
        }
    }

    #[test]
    fn schema_depths() {
        let s = Schema::from_formula(&f("b <= c -> a;b <= c")).unwrap();
        assert_eq!(s.instance(0), f("b <= c -> a;b <= c"));
        assert_eq!(s.instance(2), f("a;(a;b) <= c -> a;(a;(a;b)) <= c"));
        let b = parse_term("b").unwrap();
        let a = Var::new('a').unwrap();
        assert_eq!(depth_over(&parse_term("a;a;b").unwrap(), a, &b), Some(2));
        assert_eq!(depth_over(&parse_term("a;(a;b)").unwrap(), a, &b), Some(2));
        assert_eq!(depth_over(&parse_term("b").unwrap(), a, &b), Some(0));
        assert_eq!(depth_over(&parse_term("c;b").unwrap(), a, &b), None);
        assert_eq!(depth_over(&parse_term("a;c").unwrap(), a, &b), None);
        assert!(Schema::from_formula(&f("b <= c -> a;b <= d")).is_none());
        assert!(Schema::from_formula(&f("b <= c")).is_none());
    }

    #[test]
    fn trans_shape_mismatch() {
        let s = script("hyp x <= y\nhyp z <= w\nstep hyp [] x <= y\nstep hyp [] z <= w\nstep trans [1 2] x <= w\ngoal x <= w");
        let report = check_script(&s);
        assert!(!report.passed());
        let bad = report.first_failure().unwrap();
        assert_eq!(bad.index, 3);
        assert!(matches!(bad.outcome, Err(StepError::Shape(_))));
    }

    #[test]
    fn empty_script_with_hypothesis_goal() {
        let report = check_script(&script("hyp b <= c\ngoal b <= c"));
        assert!(report.passed());
        assert_eq!(report.steps.len(), 1);
        assert!(!check_script(&script("hyp b <= c\ngoal c <= b")).passed());
    }

    #[test]
    fn premise_references() {
        let s = script("hyp b <= c\nstep hyp [] b <= c\nstep mono [2] a;b <= a;c\ngoal a;b <= a;c");
        let report = check_script(&s);
        assert_eq!(report.steps[1].outcome, Err(StepError::BadPremise(2)));
        let s = script("hyp b <= c\nstep hyp [] b <= c\nstep mono [0] a;b <= a;c\ngoal a;b <= a;c");
        assert_eq!(
            check_script(&s).steps[1].outcome,
            Err(StepError::BadPremise(0))
        );
    }

    #[test]
    fn rule_shapes() {
        let ok = [
            "hyp b <= c\nstep hyp [] b <= c\nstep mono [1] a;b <= a;c\ngoal a;b <= a;c",
            "hyp x <= y\nhyp y <= z\nstep hyp [] x <= y\nstep hyp [] y <= z\nstep trans [1 2] x <= z\ngoal x <= z",
            "hyp x <= c\nhyp y <= c\nstep hyp [] x <= c\nstep hyp [] y <= c\nstep union [1 2] x + y <= c\ngoal x + y <= c",
            "hyp b + a_00;b <= c\nstep hyp [] b + a_00;b <= c\nstep unfold [1] a_0;b <= c\ngoal a_0;b <= c",
            "hyp a_0;b <= c\nstep hyp [] a_0;b <= c\nstep unfold [1] b + a_00;b <= c\ngoal b + a_00;b <= c",
            "hyp a;b <= c\nstep hyp [] a;b <= c\nstep iterate [1] a_00;b <= c\ngoal a_00;b <= c",
        ];
        for text in ok {
            assert!(check_script(&script(text)).passed(), "{text}");
        }
        let bad = [
            "hyp b <= c\nstep hyp [] b <= c\nstep mono [1] a;b <= d;c\ngoal a;b <= d;c",
            "hyp b <= c\nstep hyp [] c <= b\ngoal c <= b",
            "hyp x <= c\nhyp y <= d\nstep hyp [] x <= c\nstep hyp [] y <= d\nstep union [1 2] x + y <= c\ngoal x + y <= c",
            "hyp x <= c\nhyp y <= c\nstep hyp [] x <= c\nstep hyp [] y <= c\nstep union [1 2] y + x <= c\ngoal y + x <= c",
            "hyp b <= c\nstep hyp [] b <= c\nstep schema [1] a;b <= c\ngoal a;b <= c",
            "hyp b <= c\nschema b <= c -> a;b <= c\nstep hyp [] b <= c\nstep schema [1] a;(a;b) <= c\ngoal a;(a;b) <= c",
            "hyp a;(a;b) <= c\nstep hyp [] a;(a;b) <= c\nstep iterate [1] a_00;b <= c\ngoal a_00;b <= c",
            "hyp a_0;b <= c\nstep hyp [] a_0;b <= c\nstep unfold [1] a_0;b <= c\ngoal a_0;b <= c",
            "hyp a_0;b <= c\nstep hyp [] a_0;b <= c\nstep unfold [1] b <= c\ngoal b <= c",
            "hyp b <= c\nstep hyp [] b <= c\nstep trans [1] b <= c\ngoal b <= c",
        ];
        for text in bad {
            let report = check_script(&script(text));
            assert!(report.first_failure().is_some(), "{text}");
        }
        // schema steps accept any association of the composed prefix
        let assoc = "hyp b <= c\nschema b <= c -> a;b <= c\nstep hyp [] b <= c\nstep schema [1] a;b <= c\nstep schema [2] a;a;b <= c\ngoal a;a;b <= c";
        assert!(check_script(&script(assoc)).passed());
    }

    #[test]
    fn broken_script_audit() {
        let s = script("hyp b <= c\nstep hyp [] b <= c\nstep trans [1] a;b <= c\ngoal a;b <= c");
        assert!(!check_script(&s).passed());
        let report = audit_script(&s, 2).unwrap();
        assert!(report.steps[0].violation.is_none());
        let v = report.steps[1].violation.as_ref().unwrap();
        assert_eq!(v.size, 2);
        assert!(evaluate_formula(&f("b <= c"), &v.assignment, 2).unwrap());
        assert!(!evaluate_formula(&f("a;b <= c"), &v.assignment, 2).unwrap());
    }

    #[test]
    fn iterate_bound_is_real() {
        // one premise covers a_00 only on a single point
        let s = script(
            "hyp a;b <= c\nstep hyp [] a;b <= c\nstep iterate [1] a_00;b <= c\ngoal a_00;b <= c",
        );
        assert_eq!(check_script(&s).iterate_bound, Some(1));
        assert!(audit_script(&s, 1).unwrap().is_sound());
        let report = audit_script(&s, 2).unwrap();
        assert_eq!(report.steps[1].violation.as_ref().unwrap().size, 2);
    }

    #[test]
    fn display_round_trip() {
        let s = bundled_chain_induction();
        assert_eq!(ProofScript::parse(&s.to_string()).unwrap(), s);
        assert!(bundled_chain_induction_text().contains("goal a_0;b <= c"));
    }
}
