//! Python bindings: relations, terms and formulas, chains, the verifier, the
//! statement catalog and the proof kernel.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ::relcalc as core;
use core::chains;
use core::proofs::{self, ProofScript};
use core::syntax::{self, Env, RenderStyle, Var};
use core::verifier::{self, CheckConfig, Verdict as CoreVerdict};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn style(name: &str) -> PyResult<RenderStyle> {
    name.parse().map_err(value_error)
}

fn var(name: &str) -> PyResult<Var> {
    let mut chars = name.chars();
    match (chars.next().and_then(Var::new), chars.next()) {
        (Some(v), None) => Ok(v),
        _ => Err(PyKeyError::new_err(format!(
            "'{name}' is not a relation name"
        ))),
    }
}

/// A binary relation on the universe {0, ..., n-1}.
#[pyclass(module = "relcalc", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Relation(core::Relation);

#[pymethods]
impl Relation {
    #[new]
    #[pyo3(signature = (n, pairs = Vec::new()))]
    fn new(n: usize, pairs: Vec<(usize, usize)>) -> PyResult<Self> {
        core::Relation::from_pairs(n, pairs)
            .map(Relation)
            .map_err(value_error)
    }

    #[staticmethod]
    fn bottom(n: usize) -> PyResult<Self> {
        core::Relation::bottom(n).map(Relation).map_err(value_error)
    }

    #[staticmethod]
    fn top(n: usize) -> PyResult<Self> {
        core::Relation::top(n).map(Relation).map_err(value_error)
    }

    #[staticmethod]
    fn identity(n: usize) -> PyResult<Self> {
        core::Relation::identity(n)
            .map(Relation)
            .map_err(value_error)
    }

    #[staticmethod]
    fn antidiagonal(n: usize) -> PyResult<Self> {
        core::Relation::antidiagonal(n)
            .map(Relation)
            .map_err(value_error)
    }

    /// The relation at position `index` of the canonical enumeration.
    #[staticmethod]
    fn from_index(n: usize, index: u64) -> PyResult<Self> {
        core::Relation::from_index(n, index)
            .map(Relation)
            .map_err(value_error)
    }

    /// Every relation on a universe of `n` elements, in canonical order.
    #[staticmethod]
    fn enumerate(n: usize) -> PyResult<Vec<Relation>> {
        Ok(core::enumerate_relations(n)
            .map_err(value_error)?
            .map(Relation)
            .collect())
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn index(&self) -> Option<u64> {
        self.0.index()
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.0.pairs().collect()
    }

    fn contains(&self, i: usize, j: usize) -> bool {
        i < self.0.size() && j < self.0.size() && self.0.contains(i, j)
    }

    fn __contains__(&self, pair: (usize, usize)) -> bool {
        self.contains(pair.0, pair.1)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn union(&self, other: &Relation) -> PyResult<Relation> {
        self.0.union(&other.0).map(Relation).map_err(value_error)
    }

    fn intersect(&self, other: &Relation) -> PyResult<Relation> {
        self.0
            .intersect(&other.0)
            .map(Relation)
            .map_err(value_error)
    }

    fn compose(&self, other: &Relation) -> PyResult<Relation> {
        self.0.compose(&other.0).map(Relation).map_err(value_error)
    }

    fn relative_sum(&self, other: &Relation) -> PyResult<Relation> {
        self.0
            .relative_sum(&other.0)
            .map(Relation)
            .map_err(value_error)
    }

    fn complement(&self) -> Relation {
        Relation(self.0.complement())
    }

    /// Whether `self` is a subset of `other`.
    fn includes(&self, other: &Relation) -> PyResult<bool> {
        self.0.includes(&other.0).map_err(value_error)
    }

    fn __or__(&self, other: &Relation) -> PyResult<Relation> {
        self.union(other)
    }

    fn __and__(&self, other: &Relation) -> PyResult<Relation> {
        self.intersect(other)
    }

    fn __invert__(&self) -> Relation {
        self.complement()
    }

    fn __repr__(&self) -> String {
        let pairs: Vec<String> = self.0.pairs().map(|(i, j)| format!("({i}, {j})")).collect();
        format!("Relation({}, [{}])", self.0.size(), pairs.join(", "))
    }
}

fn to_env(env: BTreeMap<String, Relation>) -> PyResult<(Env, Option<usize>)> {
    let mut out = Env::new();
    let mut size = None;
    for (name, r) in env {
        size = size.or(Some(r.0.size()));
        out.insert(var(&name)?, r.0);
    }
    Ok((out, size))
}

fn from_env<'py>(py: Python<'py>, env: &Env) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (v, r) in env {
        d.set_item(v.letter().to_string(), Relation(r.clone()))?;
    }
    Ok(d)
}

fn universe(explicit: Option<usize>, from_env: Option<usize>) -> PyResult<usize> {
    explicit
        .or(from_env)
        .ok_or_else(|| PyValueError::new_err("universe size unknown: pass n or bind a relation"))
}

/// A parsed relation term.
#[pyclass(module = "relcalc", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Term(syntax::Term);

#[pymethods]
impl Term {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        syntax::parse_term(text).map(Term).map_err(value_error)
    }

    #[pyo3(signature = (style = "ascii"))]
    fn render(&self, style: &str) -> PyResult<String> {
        Ok(syntax::render(&self.0, self::style(style)?))
    }

    fn vars(&self) -> Vec<String> {
        self.0.vars().into_iter().map(|v| v.to_string()).collect()
    }

    #[pyo3(signature = (env, n = None))]
    fn evaluate(&self, env: BTreeMap<String, Relation>, n: Option<usize>) -> PyResult<Relation> {
        let (env, size) = to_env(env)?;
        let n = universe(n, size)?;
        syntax::evaluate(&self.0, &env, n)
            .map(Relation)
            .map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.0.to_string())
    }
}

/// A parsed formula: inclusions and equations joined by `&` and `->`.
#[pyclass(module = "relcalc", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Formula(syntax::Formula);

#[pymethods]
impl Formula {
    /// Parses formula text, or looks up a catalog id such as "D59".
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        if let Some(entry) = verifier::lookup(text) {
            return Ok(Formula(entry.formula.clone()));
        }
        syntax::parse_formula(text)
            .map(Formula)
            .map_err(value_error)
    }

    #[pyo3(signature = (style = "ascii"))]
    fn render(&self, style: &str) -> PyResult<String> {
        Ok(syntax::render(&self.0, self::style(style)?))
    }

    fn vars(&self) -> Vec<String> {
        self.0.vars().into_iter().map(|v| v.to_string()).collect()
    }

    #[pyo3(signature = (env, n = None))]
    fn evaluate(&self, env: BTreeMap<String, Relation>, n: Option<usize>) -> PyResult<bool> {
        let (env, size) = to_env(env)?;
        let n = universe(n, size)?;
        syntax::evaluate_formula(&self.0, &env, n).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.0.to_string())
    }
}

#[derive(FromPyObject)]
enum FormulaArg {
    Parsed(Formula),
    Text(String),
}

impl FormulaArg {
    fn formula(self) -> PyResult<syntax::Formula> {
        match self {
            FormulaArg::Parsed(f) => Ok(f.0),
            FormulaArg::Text(t) => Formula::new(&t).map(|f| f.0),
        }
    }
}

/// Outcome of a validity check.
#[pyclass(module = "relcalc", frozen)]
struct Verdict(CoreVerdict);

#[pymethods]
impl Verdict {
    /// "valid", "clean" or "counterexample".
    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind()
    }

    #[getter]
    fn detail(&self) -> String {
        self.0.detail()
    }

    #[getter]
    fn is_counterexample(&self) -> bool {
        self.0.is_counterexample()
    }

    /// `(size, {name: Relation})` for a counterexample, else None.
    #[getter]
    fn counterexample<'py>(
        &self,
        py: Python<'py>,
    ) -> PyResult<Option<(usize, Bound<'py, PyDict>)>> {
        self.0
            .counterexample()
            .map(|cx| Ok((cx.size(), from_env(py, cx.assignment())?)))
            .transpose()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Verdict({:?})", self.0.to_string())
    }
}

fn plan(
    max_size: Option<usize>,
    samples: Option<usize>,
    seed: u64,
    deterministic: bool,
) -> CheckConfig {
    let base = match max_size {
        None => CheckConfig::default(),
        Some(n) => CheckConfig {
            sample_sizes: vec![],
            ..CheckConfig::full(n)
        },
    };
    let mut config = CheckConfig {
        seed,
        deterministic,
        ..base
    };
    if let Some(k) = samples {
        config.fallback_samples = k;
        config.sample_sizes = vec![(config.max_exhaustive_size + 1, k)];
    }
    config
}

/// Checks a formula (text, catalog id or Formula) on small universes.
///
/// Without `max_size`, sizes 1..3 are enumerated within a 2^20 budget and
/// size 4 is sampled. With `max_size`, sizes up to it are enumerated within
/// 2^27 and nothing else is sampled unless `samples` is given.
#[pyfunction]
#[pyo3(signature = (formula, max_size = None, samples = None, seed = 0, deterministic = true))]
fn check(
    py: Python<'_>,
    formula: FormulaArg,
    max_size: Option<usize>,
    samples: Option<usize>,
    seed: u64,
    deterministic: bool,
) -> PyResult<Verdict> {
    let claim = verifier::Claim::new(formula.formula()?);
    let config = plan(max_size, samples, seed, deterministic);
    py.detach(|| verifier::check_claim(&claim, &config))
        .map(Verdict)
        .map_err(value_error)
}

/// An assignment on `n` elements where `lhs` is a proper subset of `rhs`.
#[pyfunction]
#[pyo3(signature = (lhs, rhs, n = 2))]
fn strictness_witness<'py>(
    py: Python<'py>,
    lhs: &str,
    rhs: &str,
    n: usize,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let l = syntax::parse_term(lhs).map_err(value_error)?;
    let r = syntax::parse_term(rhs).map_err(value_error)?;
    let env = verifier::find_strictness_witness(&l, &r, n).map_err(value_error)?;
    env.map(|e| from_env(py, &e)).transpose()
}

/// The chain of `b` under `a`: `b` together with every `a^k;b`.
#[pyfunction]
fn chain(a: &Relation, b: &Relation) -> PyResult<Relation> {
    chains::chain(&a.0, &b.0).map(Relation).map_err(value_error)
}

/// The union of every `a^k;b` with `k >= 1`.
#[pyfunction]
fn iterate_chain(a: &Relation, b: &Relation) -> PyResult<Relation> {
    chains::iterate_chain(&a.0, &b.0)
        .map(Relation)
        .map_err(value_error)
}

/// `(stages, stabilized_at)` of the iterate computation.
#[pyfunction]
fn chain_trace(a: &Relation, b: &Relation) -> PyResult<(Vec<Relation>, usize)> {
    let t = chains::chain_trace(&a.0, &b.0).map_err(value_error)?;
    Ok((
        t.stages.into_iter().map(Relation).collect(),
        t.stabilized_at,
    ))
}

#[pyfunction]
fn is_closed(a: &Relation, b: &Relation) -> PyResult<bool> {
    chains::is_closed(&a.0, &b.0).map_err(value_error)
}

#[pyfunction]
fn is_transitive(a: &Relation) -> bool {
    chains::is_transitive(&a.0)
}

/// The bundled statements as dicts with id, expected, formula, settheory
/// and note.
#[pyfunction]
fn catalog(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    verifier::catalog()
        .iter()
        .map(|e| {
            let d = PyDict::new(py);
            d.set_item("id", &e.id)?;
            d.set_item("expected", e.expected.as_str())?;
            d.set_item("formula", &e.text)?;
            d.set_item("settheory", &e.settheory)?;
            d.set_item("note", &e.note)?;
            Ok(d)
        })
        .collect()
}

/// Runs every catalog entry; one dict per entry with id, kind, expected,
/// matches and detail.
#[pyfunction]
#[pyo3(signature = (max_size = None, samples = None, seed = 0, deterministic = true))]
fn run_catalog(
    py: Python<'_>,
    max_size: Option<usize>,
    samples: Option<usize>,
    seed: u64,
    deterministic: bool,
) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let config = plan(max_size, samples, seed, deterministic);
    let report = py
        .detach(|| verifier::run_catalog(&config))
        .map_err(value_error)?;
    report
        .entries
        .iter()
        .map(|e| {
            let d = PyDict::new(py);
            d.set_item("id", &e.id)?;
            d.set_item("kind", e.outcome.kind())?;
            d.set_item("expected", e.expected.as_str())?;
            d.set_item("matches", e.matches)?;
            d.set_item("detail", e.outcome.detail())?;
            Ok(d)
        })
        .collect()
}

fn script(text: Option<&str>) -> PyResult<ProofScript> {
    match text {
        None => Ok(proofs::bundled_chain_induction()),
        Some(t) => ProofScript::parse(t).map_err(value_error),
    }
}

/// Text of the bundled chain-induction derivation.
#[pyfunction]
fn bundled_proof() -> &'static str {
    proofs::bundled_chain_induction_text()
}

/// Kernel check of a proof script (the bundled one when `text` is None).
///
/// Returns a dict with passed, goal_reached, iterate_bound and steps, each
/// step a tuple `(index, rule, error or None, conclusion)`.
#[pyfunction]
#[pyo3(signature = (text = None))]
fn check_proof<'py>(py: Python<'py>, text: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let report = proofs::check_script(&script(text)?);
    let steps: Vec<(usize, &'static str, Option<String>, String)> = report
        .steps
        .iter()
        .map(|s| {
            let err = s.outcome.as_ref().err().map(|e| e.to_string());
            (s.index, s.rule.name(), err, s.conclusion.to_string())
        })
        .collect();
    let d = PyDict::new(py);
    d.set_item("passed", report.passed())?;
    d.set_item("goal_reached", report.goal_reached)?;
    d.set_item("iterate_bound", report.iterate_bound)?;
    d.set_item("steps", steps)?;
    Ok(d)
}

/// Semantic audit at universes 1..n: `(index, violation)` per step, the
/// violation being None or `(size, {name: Relation})`.
/// Universe size and assignment.
type Witness<'py> = (usize, Bound<'py, PyDict>);

#[pyfunction]
#[pyo3(signature = (n, text = None))]
fn audit_proof<'py>(
    py: Python<'py>,
    n: usize,
    text: Option<&str>,
) -> PyResult<Vec<(usize, Option<Witness<'py>>)>> {
    let s = script(text)?;
    let report = py
        .detach(|| proofs::audit_script(&s, n))
        .map_err(value_error)?;
    report
        .steps
        .iter()
        .map(|st| {
            let v = st
                .violation
                .as_ref()
                .map(|v| Ok::<_, PyErr>((v.size, from_env(py, &v.assignment)?)))
                .transpose()?;
            Ok((st.index, v))
        })
        .collect()
}

#[pymodule]
fn relcalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Relation>()?;
    m.add_class::<Term>()?;
    m.add_class::<Formula>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(strictness_witness, m)?)?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_chain, m)?)?;
    m.add_function(wrap_pyfunction!(chain_trace, m)?)?;
    m.add_function(wrap_pyfunction!(is_closed, m)?)?;
    m.add_function(wrap_pyfunction!(is_transitive, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(run_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_proof, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(audit_proof, m)?)?;
    Ok(())
}
