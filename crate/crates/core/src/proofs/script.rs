//! Line-oriented proof-script text.
//!
//! ```text
//! hyp b <= c
//! schema b <= c -> a;b <= c
//! step hyp [] b <= c
//! step schema [1] a;b <= c
//! goal a;b <= c
//! ```
//!
//! Steps are numbered from 1 in order of appearance. `#` starts a comment line.

use std::fmt;

use thiserror::Error;

use super::{ProofScript, ProofStep, Rule, Schema};
use crate::syntax::parse_formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ScriptError {
    pub line: usize,
    pub msg: String,
}

fn parse_premises(text: &str) -> Result<(Vec<usize>, &str), String> {
    let text = text.trim_start();
    let rest = text
        .strip_prefix('[')
        .ok_or_else(|| "expected '[' before the premise list".to_string())?;
    let close = rest
        .find(']')
        .ok_or_else(|| "unterminated premise list".to_string())?;
    let premises = rest[..close]
        .split_whitespace()
        .map(|tok| {
            tok.trim_end_matches(',')
                .parse::<usize>()
                .map_err(|_| format!("bad premise index '{tok}'"))
        })
        .collect::<Result<_, _>>()?;
    Ok((premises, &rest[close + 1..]))
}

impl ProofScript {
    /// Parses the text format. Rule applications are not checked here; see
    /// [`check_script`](super::check_script).
    pub fn parse(text: &str) -> Result<ProofScript, ScriptError> {
        let mut hypotheses = vec![];
        let mut schemas = vec![];
        let mut steps = vec![];
        let mut goal = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| ScriptError { line, msg };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (keyword, rest) = trimmed
                .split_once(char::is_whitespace)
                .unwrap_or((trimmed, ""));
            let formula = |s: &str| parse_formula(s).map_err(|e| err(e.to_string()));
            match keyword {
                "hyp" => hypotheses.push(formula(rest)?),
                "schema" => {
                    let f = formula(rest)?;
                    schemas.push(Schema::from_formula(&f).ok_or_else(|| {
                        err(format!("'{f}' is not of the form x <= c -> a;x <= c"))
                    })?);
                }
                "step" => {
                    let (name, rest) = rest
                        .trim_start()
                        .split_once(char::is_whitespace)
                        .ok_or_else(
                            || err("expected a rule name, premises and a formula".into()),
                        )?;
                    let rule: Rule = name.parse().map_err(err)?;
                    let (premises, rest) = parse_premises(rest).map_err(err)?;
                    steps.push(ProofStep {
                        rule,
                        premises,
                        conclusion: formula(rest)?,
                    });
                }
                "goal" => {
                    if goal.is_some() {
                        return Err(err("second goal".into()));
                    }
                    goal = Some(formula(rest)?);
                }
                other => return Err(err(format!("unknown keyword '{other}'"))),
            }
        }
        let goal = goal.ok_or(ScriptError {
            line: text.lines().count(),
            msg: "missing goal".into(),
        })?;
        Ok(ProofScript {
            hypotheses,
            schemas,
            steps,
            goal,
        })
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.hypotheses {
            writeln!(f, "hyp {h}")?;
        }
        for s in &self.schemas {
            writeln!(f, "schema {}", s.formula())?;
        }
        for step in &self.steps {
            let premises: Vec<String> = step.premises.iter().map(|p| p.to_string()).collect();
            writeln!(
                f,
                "step {} [{}] {}",
                step.rule,
                premises.join(" "),
                step.conclusion
            )?;
        }
        writeln!(f, "goal {}", self.goal)
    }
}
