//! Relation files: a universe size and named relations as index pairs.
//!
//! ```text
//! # comment
//! universe 3
//! rel a
//! 1 0
//! 2 1
//! end
//! rel b
//! 0 0
//! end
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::relation::Relation;
use crate::syntax::{Env, Var};

/// Name, pairs so far and line of the `rel` keyword.
type OpenBlock = (Var, Vec<(usize, usize)>, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct RelFileError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFile {
    pub universe: usize,
    pub relations: Env,
}

impl RelationFile {
    pub fn parse(text: &str) -> Result<RelationFile, RelFileError> {
        let mut universe = None;
        let mut relations = Env::new();
        let mut open: Option<OpenBlock> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| RelFileError { line, msg };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            match (words[0], &mut open) {
                ("universe", None) => {
                    if universe.is_some() {
                        return Err(err("universe declared twice".into()));
                    }
                    let [_, size] = words[..] else {
                        return Err(err("expected 'universe <n>'".into()));
                    };
                    let n: usize = size
                        .parse()
                        .map_err(|_| err(format!("bad universe size '{size}'")))?;
                    Relation::bottom(n).map_err(|e| err(e.to_string()))?;
                    universe = Some(n);
                }
                ("rel", None) => {
                    if universe.is_none() {
                        return Err(err("'rel' before 'universe'".into()));
                    }
                    let [_, name] = words[..] else {
                        return Err(err("expected 'rel <letter>'".into()));
                    };
                    let mut chars = name.chars();
                    let var = match (chars.next().and_then(Var::new), chars.next()) {
                        (Some(v), None) => v,
                        _ => {
                            return Err(err(format!(
                                "relation names are single lowercase letters, got '{name}'"
                            )))
                        }
                    };
                    if relations.contains_key(&var) {
                        return Err(err(format!("duplicate relation '{var}'")));
                    }
                    open = Some((var, vec![], line));
                }
                ("end", Some(_)) => {
                    let (var, pairs, _) = open.take().expect("block is open");
                    let n = universe.expect("checked at 'rel'");
                    relations.insert(
                        var,
                        Relation::from_pairs(n, pairs).map_err(|e| err(e.to_string()))?,
                    );
                }
                (_, Some((_, pairs, _))) => {
                    let [i, j] = words[..] else {
                        return Err(err(format!(
                            "expected a pair '<i> <j>' or 'end', got '{body}'"
                        )));
                    };
                    let parse = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| err(format!("bad index '{s}'")))
                    };
                    let (i, j) = (parse(i)?, parse(j)?);
                    let n = universe.expect("checked at 'rel'");
                    if i >= n || j >= n {
                        return Err(err(format!("pair ({i},{j}) outside universe of size {n}")));
                    }
                    pairs.push((i, j));
                }
                (word, _) => return Err(err(format!("unexpected '{word}'"))),
            }
        }
        if let Some((var, _, line)) = open {
            return Err(RelFileError {
                line,
                msg: format!("relation '{var}' is missing 'end'"),
            });
        }
        let universe = universe.ok_or(RelFileError {
            line: 1,
            msg: "missing 'universe' declaration".into(),
        })?;
        Ok(RelationFile {
            universe,
            relations,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("universe {}\n", self.universe);
        for (var, rel) in &self.relations {
            let _ = writeln!(out, "rel {var}");
            for (i, j) in rel.pairs() {
                let _ = writeln!(out, "{i} {j}");
            }
            out.push_str("end\n");
        }
        out
    }
}
