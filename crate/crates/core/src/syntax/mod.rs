//! Abstract syntax, parser, renderer and evaluator for relative terms and
//! formulas.

mod ast;
mod eval;
mod parser;
mod render;

pub use ast::{Const, Formula, Term, Var};
pub use eval::{evaluate, evaluate_formula, Env, EvalError};
pub use parser::{parse_formula, parse_term, ParseError};
pub use render::{render, settheory_template, Render, RenderStyle};
