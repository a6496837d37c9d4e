//! The `relcalc` command-line driver.
//!
//! [`run`] takes the argument list and output streams and returns the exit
//! code: 0 on success, 1 on a semantic failure (counterexample, failed proof
//! step, catalog mismatch), 2 on usage, parse or I/O errors. `--machine`
//! switches every command to tab-separated records.

mod relfile;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::chains;
use crate::proofs::{self, audit_script, check_script, ProofScript};
use crate::syntax::{evaluate, parse_formula, parse_term, render, Formula, RenderStyle, Term, Var};
use crate::verifier::{
    check_claim, check_exhaustive, find_strictness_witness, format_assignment, lookup, run_catalog,
    CheckConfig, Claim, Verdict,
};

pub use relfile::{RelFileError, RelationFile};

#[derive(Debug, Parser)]
#[command(
    name = "relcalc",
    version,
    about = "Finite-model workbench for the calculus of binary relatives"
)]
struct Cli {
    /// Tab-separated output, one record per line
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Enumerate universes 1..=N exhaustively (up to 2^27 assignments each;
    /// larger spaces are sampled)
    #[arg(long, value_name = "N")]
    max_size: Option<usize>,
    /// Random assignments per sampled universe
    #[arg(long, value_name = "K")]
    samples: Option<usize>,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Report the first counterexample in canonical order
    #[arg(long)]
    deterministic: bool,
}

impl PlanArgs {
    fn config(&self) -> CheckConfig {
        let base = match self.max_size {
            None => CheckConfig::default(),
            Some(n) => CheckConfig {
                sample_sizes: vec![],
                ..CheckConfig::full(n)
            },
        };
        let mut config = CheckConfig {
            seed: self.seed,
            deterministic: self.deterministic,
            ..base
        };
        if let Some(k) = self.samples {
            config.fallback_samples = k;
            config.sample_sizes = vec![(config.max_exhaustive_size + 1, k)];
        }
        config
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a term over the relations in a file
    Eval {
        /// Relation file
        rels: PathBuf,
        /// Term in ASCII notation
        term: String,
    },
    /// Check a formula (or catalog id) for validity
    Check {
        /// Formula in ASCII notation, or a catalog id such as D59
        formula: String,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Check every catalog entry against its expected verdict
    Catalog {
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Compute the chain of relation B under relation A
    Chain {
        /// Relation file
        rels: PathBuf,
        /// Name of the mapping relation
        a: String,
        /// Name of the generator relation
        b: String,
    },
    /// Search for an assignment where LHS is strictly included in RHS
    Strict {
        /// Smaller term
        lhs: String,
        /// Larger term
        rhs: String,
        /// Universe size to search
        #[arg(long, value_name = "N", default_value_t = 2)]
        size: usize,
    },
    /// Replay a proof script
    Prove {
        /// Proof script file
        #[arg(required_unless_present = "bundled")]
        script: Option<PathBuf>,
        /// Use the bundled induction derivation
        #[arg(long, conflicts_with = "script")]
        bundled: bool,
        /// Also model-check every step on universes 1..=N
        #[arg(long, value_name = "N")]
        audit_size: Option<usize>,
    },
    /// Render a formula, term or catalog entry
    Render {
        /// Formula, term or catalog id
        input: String,
        /// ascii, unicode or settheory
        #[arg(long, default_value = "ascii")]
        style: RenderStyle,
    },
}

/// A failure that ends the command with a message and exit code.
struct Fail(i32, String);

fn usage(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

type Out<'a> = &'a mut dyn Write;

fn pairs_text(r: &crate::Relation) -> String {
    r.pairs()
        .map(|(i, j)| format!("({i},{j})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_rels(path: &Path) -> Result<RelationFile, Fail> {
    RelationFile::parse(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn var_arg(name: &str) -> Result<Var, Fail> {
    let mut chars = name.chars();
    match (chars.next().and_then(Var::new), chars.next()) {
        (Some(v), None) => Ok(v),
        _ => Err(usage(format!("'{name}' is not a relation name"))),
    }
}

/// A catalog id or formula text.
fn formula_arg(input: &str) -> Result<Formula, Fail> {
    if let Some(entry) = lookup(input) {
        return Ok(entry.formula.clone());
    }
    parse_formula(input).map_err(|e| usage(format!("{e}")))
}

fn print_counterexample(out: Out, v: &Verdict, machine: bool) -> std::io::Result<()> {
    let Verdict::CounterExample(cx) = v else {
        return Ok(());
    };
    if machine {
        return Ok(());
    }
    let file = RelationFile {
        universe: cx.size(),
        relations: cx.assignment().clone(),
    };
    writeln!(out, "# counterexample to: {}", cx.formula())?;
    write!(out, "{}", file.to_text())
}

fn cmd_eval(out: Out, machine: bool, rels: &Path, term: &str) -> Result<(), Fail> {
    let file = load_rels(rels)?;
    let term = parse_term(term).map_err(|e| usage(e.to_string()))?;
    let value =
        evaluate(&term, &file.relations, file.universe).map_err(|e| usage(e.to_string()))?;
    let io = |e: std::io::Error| usage(e.to_string());
    if machine {
        for (i, j) in value.pairs() {
            writeln!(out, "{i}\t{j}").map_err(io)?;
        }
    } else {
        writeln!(out, "{}", pairs_text(&value)).map_err(io)?;
    }
    Ok(())
}

fn cmd_check(out: Out, machine: bool, input: &str, plan: &PlanArgs) -> Result<(), Fail> {
    let claim = Claim::new(formula_arg(input)?);
    let verdict = check_claim(&claim, &plan.config()).map_err(|e| usage(e.to_string()))?;
    let io = |e: std::io::Error| usage(e.to_string());
    if machine {
        writeln!(out, "{}\t{}", verdict.kind(), verdict.detail()).map_err(io)?;
    } else {
        writeln!(out, "{verdict}").map_err(io)?;
    }
    print_counterexample(out, &verdict, machine).map_err(io)?;
    if verdict.is_counterexample() {
        Err(Fail(1, String::new()))
    } else {
        Ok(())
    }
}

fn cmd_catalog(out: Out, machine: bool, plan: &PlanArgs) -> Result<(), Fail> {
    let report = run_catalog(&plan.config()).map_err(|e| usage(e.to_string()))?;
    let text = if machine {
        report.to_machine()
    } else {
        report.to_text()
    };
    out.write_all(text.as_bytes())
        .map_err(|e| usage(e.to_string()))?;
    if report.all_match() {
        Ok(())
    } else {
        Err(Fail(1, "catalog mismatch".into()))
    }
}

fn cmd_chain(out: Out, machine: bool, rels: &Path, a: &str, b: &str) -> Result<(), Fail> {
    let file = load_rels(rels)?;
    let get = |name: &str| -> Result<&crate::Relation, Fail> {
        let v = var_arg(name)?;
        file.relations.get(&v).ok_or_else(|| {
            usage(format!(
                "relation '{v}' is not defined in {}",
                rels.display()
            ))
        })
    };
    let (ra, rb) = (get(a)?, get(b)?);
    let trace = chains::chain_trace(ra, rb).map_err(|e| usage(e.to_string()))?;
    let chain = chains::chain(ra, rb).map_err(|e| usage(e.to_string()))?;
    let iterate = trace.last().clone();
    let io = |e: std::io::Error| usage(e.to_string());
    if machine {
        writeln!(out, "chain\t{}", pairs_text(&chain)).map_err(io)?;
        writeln!(out, "iterate\t{}", pairs_text(&iterate)).map_err(io)?;
        writeln!(out, "stabilized\t{}", trace.stabilized_at).map_err(io)?;
    } else {
        let line = |label: String, r: &crate::Relation| {
            format!("{label:<12}{}", pairs_text(r))
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line("chain:".into(), &chain)).map_err(io)?;
        writeln!(out, "{}", line("iterate:".into(), &iterate)).map_err(io)?;
        for (k, stage) in trace.stages.iter().enumerate() {
            writeln!(out, "{}", line(format!("stage {}:", k + 1), stage)).map_err(io)?;
        }
        writeln!(out, "stabilized: {}", trace.stabilized_at).map_err(io)?;
    }
    Ok(())
}

fn cmd_strict(out: Out, machine: bool, lhs: &str, rhs: &str, n: usize) -> Result<(), Fail> {
    let parse = |s: &str| parse_term(s).map_err(|e| usage(e.to_string()));
    let (l, r): (Term, Term) = (parse(lhs)?, parse(rhs)?);
    let io = |e: std::io::Error| usage(e.to_string());
    let inclusion = Claim::new(Formula::inclusion(l.clone(), r.clone()));
    let verdict = check_exhaustive(&inclusion, n).map_err(|e| usage(e.to_string()))?;
    if verdict.is_counterexample() {
        writeln!(out, "{} is not included in {}: {verdict}", l, r).map_err(io)?;
        print_counterexample(out, &verdict, machine).map_err(io)?;
        return Err(Fail(1, String::new()));
    }
    let Some(env) = find_strictness_witness(&l, &r, n).map_err(|e| usage(e.to_string()))? else {
        writeln!(
            out,
            "{}",
            if machine {
                "equal"
            } else {
                "no proper inclusion at this size"
            }
        )
        .map_err(io)?;
        return Err(Fail(1, String::new()));
    };
    let value = |t: &Term| evaluate(t, &env, n).map_err(|e| usage(e.to_string()));
    let (lv, rv) = (value(&l)?, value(&r)?);
    if machine {
        writeln!(
            out,
            "strict\t{}\t{}\t{}",
            pairs_text(&lv),
            pairs_text(&rv),
            format_assignment(&env)
        )
        .map_err(io)?;
    } else {
        writeln!(out, "# {l} = {{{}}}", pairs_text(&lv)).map_err(io)?;
        writeln!(out, "# {r} = {{{}}}", pairs_text(&rv)).map_err(io)?;
        let file = RelationFile {
            universe: n,
            relations: env,
        };
        write!(out, "{}", file.to_text()).map_err(io)?;
    }
    Ok(())
}

fn cmd_prove(
    out: Out,
    machine: bool,
    script: Option<&Path>,
    audit: Option<usize>,
) -> Result<(), Fail> {
    let script = match script {
        None => proofs::bundled_chain_induction(),
        Some(path) => ProofScript::parse(&read(path)?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?,
    };
    let io = |e: std::io::Error| usage(e.to_string());
    let report = check_script(&script);
    for s in &report.steps {
        let status = match &s.outcome {
            Ok(()) => "ok".to_string(),
            Err(e) => format!("FAIL: {e}"),
        };
        if machine {
            writeln!(
                out,
                "step\t{}\t{}\t{}\t{}",
                s.index, s.rule, status, s.conclusion
            )
            .map_err(io)?;
        } else {
            writeln!(
                out,
                "step {:<2} {:<8} {:<4} {}",
                s.index, s.rule, status, s.conclusion
            )
            .map_err(io)?;
        }
    }
    let goal = if report.goal_reached {
        "reached"
    } else {
        "not reached"
    };
    if machine {
        writeln!(out, "goal\t{goal}\t{}", script.goal).map_err(io)?;
    } else {
        writeln!(out, "goal {goal}: {}", script.goal).map_err(io)?;
        if let Some(b) = report.iterate_bound {
            writeln!(out, "iterate steps cover universes of up to {b} elements").map_err(io)?;
        }
    }
    let mut failure = report
        .first_failure()
        .map(|s| format!("step {} failed", s.index))
        .or_else(|| (!report.goal_reached).then(|| "goal not reached".to_string()));

    if let Some(n) = audit {
        let audit = audit_script(&script, n).map_err(|e| usage(e.to_string()))?;
        for s in &audit.steps {
            let status = match &s.violation {
                None => "sound".to_string(),
                Some(v) => format!(
                    "VIOLATED at n={}: {}",
                    v.size,
                    format_assignment(&v.assignment)
                ),
            };
            if machine {
                writeln!(out, "audit\t{}\t{status}", s.index).map_err(io)?;
            } else {
                writeln!(out, "audit n<={n} step {:<2} {status}", s.index).map_err(io)?;
            }
        }
        if failure.is_none() {
            failure = audit
                .steps
                .iter()
                .find(|s| s.violation.is_some())
                .map(|s| format!("step {} is not sound", s.index));
        }
    }
    match failure {
        None => Ok(()),
        Some(msg) => Err(Fail(1, msg)),
    }
}

fn cmd_render(out: Out, input: &str, style: RenderStyle) -> Result<(), Fail> {
    let text = if let Some(entry) = lookup(input) {
        match style {
            RenderStyle::SetTheory => entry.settheory.clone(),
            _ => render(&entry.formula, style),
        }
    } else {
        match parse_formula(input) {
            Ok(f) => render(&f, style),
            Err(formula_err) => match parse_term(input) {
                Ok(t) => render(&t, style),
                Err(_) => return Err(usage(formula_err.to_string())),
            },
        }
    };
    writeln!(out, "{text}").map_err(|e| usage(e.to_string()))
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let m = cli.machine;
    let result = match &cli.command {
        Command::Eval { rels, term } => cmd_eval(out, m, rels, term),
        Command::Check { formula, plan } => cmd_check(out, m, formula, plan),
        Command::Catalog { plan } => cmd_catalog(out, m, plan),
        Command::Chain { rels, a, b } => cmd_chain(out, m, rels, a, b),
        Command::Strict { lhs, rhs, size } => cmd_strict(out, m, lhs, rhs, *size),
        Command::Prove {
            script, audit_size, ..
        } => cmd_prove(out, m, script.as_deref(), *audit_size),
        Command::Render { input, style } => cmd_render(out, input, *style),
    };
    match result {
        Ok(()) => 0,
        Err(Fail(code, msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(err, "error: {msg}");
            }
            code
        }
    }
}
