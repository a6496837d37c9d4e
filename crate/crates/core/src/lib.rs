//! A finite-model workbench for the calculus of binary relatives.
//!
//! - [`relation`]: finite binary relations and the relative operations.
//! - [`syntax`]: terms and formulas in pasigraphic notation, with parsing,
//!   rendering (ASCII, Unicode, Dedekind-style prose) and evaluation.
//! - [`chains`]: chains `a_0;b`, iterates `a_00;b`, closedness, transitivity.
//! - [`verifier`]: exhaustive and sampled validity checking, the statement
//!   catalog.
//! - [`proofs`]: a small inclusion-reasoning kernel with semantic auditing.
//! - [`cli`]: the `relcalc` command-line driver and its file formats.

pub mod chains;
pub mod cli;
pub mod proofs;
pub mod relation;
pub mod syntax;
pub mod verifier;

pub use relation::{enumerate_relations, Relation, RelationError, Universe};
