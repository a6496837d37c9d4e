//! Rendering of terms and formulas.
//!
//! The ASCII and Unicode styles print the minimal parentheses needed for
//! [`parse_term`](super::parse_term) / [`parse_formula`](super::parse_formula)
//! to rebuild the exact same tree. The set-theoretic style writes Dedekind's
//! vocabulary of systems, images and chains; it knows a fixed set of statement
//! templates and otherwise falls back to structural prose.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::ast::{Const, Formula, Term, Var};
use super::parser::parse_formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RenderStyle {
    Ascii,
    Unicode,
    SetTheory,
}

impl FromStr for RenderStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ascii" => Ok(RenderStyle::Ascii),
            "unicode" => Ok(RenderStyle::Unicode),
            "settheory" => Ok(RenderStyle::SetTheory),
            other => Err(format!(
                "unknown style '{other}' (ascii, unicode, settheory)"
            )),
        }
    }
}

impl fmt::Display for RenderStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RenderStyle::Ascii => "ascii",
            RenderStyle::Unicode => "unicode",
            RenderStyle::SetTheory => "settheory",
        })
    }
}

struct Glyphs {
    not: &'static str,
    sub0: &'static str,
    sub00: &'static str,
    rel_sum: &'static str,
    // separator for intersections that cannot be juxtaposed
    meet: &'static str,
    incl: &'static str,
    and: &'static str,
    arrow: &'static str,
}

const ASCII: Glyphs = Glyphs {
    not: "~",
    sub0: "_0",
    sub00: "_00",
    rel_sum: " +' ",
    meet: " * ",
    incl: "<=",
    and: "&",
    arrow: "->",
};

const UNICODE: Glyphs = Glyphs {
    not: "¬",
    sub0: "₀",
    sub00: "₀₀",
    rel_sum: "·'",
    meet: "·",
    incl: "⊆",
    and: "∧",
    arrow: "→",
};

// Binding strength, loosest first.
const UNION: u8 = 1;
const MEET: u8 = 2;
const SEQ: u8 = 3;
const UNARY: u8 = 4;

fn level(t: &Term) -> u8 {
    match t {
        Term::Union(_) => UNION,
        Term::Intersect(_) => MEET,
        // a chain prefix swallows a following `;`, so it groups like one
        Term::Compose(..) | Term::RelSum(..) | Term::Chain(..) | Term::Iterate(..) => SEQ,
        _ => UNARY,
    }
}

fn const_text(k: Const) -> &'static str {
    match k {
        Const::Zero => "0",
        Const::One => "1",
        Const::Diag => "1'",
        Const::AntiDiag => "0'",
    }
}

fn term_at(t: &Term, min: u8, g: &Glyphs) -> String {
    let s = term_text(t, g);
    if level(t) < min {
        format!("({s})")
    } else {
        s
    }
}

fn term_text(t: &Term, g: &Glyphs) -> String {
    match t {
        Term::Var(v) => v.to_string(),
        Term::Const(k) => const_text(*k).to_string(),
        Term::Complement(x) => format!("{}{}", g.not, term_at(x, UNARY, g)),
        Term::Union(ts) => ts
            .iter()
            .map(|x| term_at(x, MEET, g))
            .collect::<Vec<_>>()
            .join(" + "),
        Term::Intersect(ts) => {
            let parts: Vec<(String, bool)> = ts
                .iter()
                .map(|x| {
                    let text = match x {
                        Term::Chain(..) | Term::Iterate(..) => format!("({})", term_text(x, g)),
                        _ => term_at(x, SEQ, g),
                    };
                    (text, matches!(x, Term::Var(_)))
                })
                .collect();
            let mut out = parts[0].0.clone();
            for w in parts.windows(2) {
                let ((left, left_var), (right, right_var)) = (&w[0], &w[1]);
                let juxtapose =
                    (*left_var && *right_var) || left.ends_with(')') || right.starts_with('(');
                if !juxtapose {
                    out.push_str(g.meet);
                }
                out.push_str(right);
            }
            out
        }
        Term::Compose(a, b) | Term::RelSum(a, b) => {
            let compose = matches!(t, Term::Compose(..));
            // left operand may continue the same operator, never the other one
            let left = match (compose, a.as_ref()) {
                (true, Term::RelSum(..)) | (false, Term::Compose(..)) => {
                    format!("({})", term_text(a, g))
                }
                _ => term_at(a, SEQ, g),
            };
            let op = if compose { ";" } else { g.rel_sum };
            format!("{left}{op}{}", term_at(b, UNARY, g))
        }
        Term::Chain(v, x) => format!("{v}{};{}", g.sub0, term_at(x, UNARY, g)),
        Term::Iterate(v, x) => format!("{v}{};{}", g.sub00, term_at(x, UNARY, g)),
    }
}

fn atomic_text(f: &Formula, g: &Glyphs) -> String {
    match f {
        Formula::Inclusion(a, b) => format!("{} {} {}", term_text(a, g), g.incl, term_text(b, g)),
        Formula::Equation(a, b) => format!("{} = {}", term_text(a, g), term_text(b, g)),
        _ => unreachable!(),
    }
}

fn grouped(inner: String) -> String {
    // braces when the content already carries parentheses, as in `{a;(a_0;b)c <= c}`
    if inner.contains('(') {
        format!("{{{inner}}}")
    } else {
        format!("({inner})")
    }
}

fn formula_text(f: &Formula, g: &Glyphs, top: bool) -> String {
    match f {
        Formula::Inclusion(..) | Formula::Equation(..) => atomic_text(f, g),
        Formula::Implication(p, q) if top && p.is_atomic() && q.is_atomic() => format!(
            "{} {} {}",
            grouped(atomic_text(p, g)),
            g.incl,
            grouped(atomic_text(q, g))
        ),
        Formula::Implication(p, q) => {
            let ante = match p.as_ref() {
                Formula::Implication(..) => format!("({})", formula_text(p, g, false)),
                _ => formula_text(p, g, false),
            };
            format!("{ante} {} {}", g.arrow, formula_text(q, g, false))
        }
        Formula::Conjunction(fs) => fs
            .iter()
            .map(|x| match x {
                Formula::Implication(..) | Formula::Conjunction(_) => {
                    format!("({})", formula_text(x, g, false))
                }
                _ => formula_text(x, g, false),
            })
            .collect::<Vec<_>>()
            .join(&format!(" {} ", g.and)),
    }
}

// ---------------------------------------------------------------------------
// set-theoretic prose

/// Formula pattern, prose with `{x}` holes, and a name for each variable.
type Template = (&'static str, &'static str, &'static [(char, &'static str)]);

/// Statement templates in Dedekind's vocabulary. A formula matching one of the
/// patterns up to a renaming of variables is rendered with the template;
/// `{x}` placeholders name the system or mapping bound to pattern variable `x`.
const TEMPLATES: &[Template] = &[
    (
        "(b <= c) <= (a;b <= a;c)",
        "If {b} ∍ {c}, then {b}' ∍ {c}' (images under {a}).",
        &[('a', "phi"), ('b', "A"), ('c', "B")],
    ),
    (
        "a;(b + c) = a;b + a;c",
        "The image under {a} of M({b}, {c}) is M({b}', {c}').",
        &[('a', "phi"), ('b', "A"), ('c', "B")],
    ),
    (
        "a;(b + c + d) = a;b + a;c + a;d",
        "The image under {a} of M({b}, {c}, {d}) is M({b}', {c}', {d}').",
        &[('a', "phi"), ('b', "A"), ('c', "B"), ('d', "C")],
    ),
    (
        "a;(bc) <= a;b * a;c",
        "The image under {a} of the intersection G({b}, {c}) is part of G({b}', {c}').",
        &[('a', "phi"), ('b', "A"), ('c', "B")],
    ),
    (
        "a;(bcd) <= a;b * a;c * a;d",
        "The image under {a} of the intersection G({b}, {c}, {d}) is part of G({b}', {c}', {d}').",
        &[('a', "phi"), ('b', "A"), ('c', "B"), ('d', "C")],
    ),
    (
        // one formula, two readings: a mapping of K into itself, and K a chain
        "a;b <= b",
        "{a}({b}) is a part of {b}, so {b} is mapped by {a} into itself; {b} is called a chain when {b}' ∍ {b}.",
        &[('a', "phi"), ('b', "K")],
    ),
    (
        "a;1 <= 1",
        "S is a chain: the image S' under {a} is part of S.",
        &[('a', "phi")],
    ),
    (
        "(a;b <= b) <= (a;a;b <= a;b)",
        "The image {b}' of a chain {b} under {a} is a chain.",
        &[('a', "phi"), ('b', "K")],
    ),
    (
        "a_0;b = b + a_00;b",
        "The chain {a}_0({b}) is M({b}, {a}_00({b})): the generator together with all its iterated images.",
        &[('a', "phi"), ('b', "A")],
    ),
    (
        "{a;((a_0;b)c) + b <= c} <= (a_0;b <= c)",
        "Complete induction: {a}_0({b}) ∍ {c} follows from rho. {b} ∍ {c}, and sigma. the image of G({a}_0({b}), {c}) is part of {c}.",
        &[('a', "phi"), ('b', "A"), ('c', "Z")],
    ),
    (
        "b <= c & (a;b <= c -> a;(a;b) <= c) -> a_0;b <= c",
        "If {b} ∍ {c}, and {a}({b}) ∍ {c} implies {a}({a}({b})) ∍ {c}, then {a}_0({b}) ∍ {c}.",
        &[('a', "phi"), ('b', "A"), ('c', "Z")],
    ),
];

type Renaming = BTreeMap<Var, Var>;

fn bind(pattern: Var, actual: Var, map: &mut Renaming) -> bool {
    match map.get(&pattern) {
        Some(&bound) => bound == actual,
        None => {
            if map.values().any(|&v| v == actual) {
                return false;
            }
            map.insert(pattern, actual);
            true
        }
    }
}

fn match_term(p: &Term, t: &Term, map: &mut Renaming) -> bool {
    match (p, t) {
        (Term::Var(x), Term::Var(y)) => bind(*x, *y, map),
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::Complement(x), Term::Complement(y)) => match_term(x, y, map),
        (Term::Union(xs), Term::Union(ys)) | (Term::Intersect(xs), Term::Intersect(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, map))
        }
        (Term::Compose(a, b), Term::Compose(c, d)) | (Term::RelSum(a, b), Term::RelSum(c, d)) => {
            match_term(a, c, map) && match_term(b, d, map)
        }
        (Term::Chain(v, x), Term::Chain(w, y)) | (Term::Iterate(v, x), Term::Iterate(w, y)) => {
            bind(*v, *w, map) && match_term(x, y, map)
        }
        _ => false,
    }
}

fn match_formula(p: &Formula, f: &Formula, map: &mut Renaming) -> bool {
    match (p, f) {
        (Formula::Inclusion(a, b), Formula::Inclusion(c, d))
        | (Formula::Equation(a, b), Formula::Equation(c, d)) => {
            match_term(a, c, map) && match_term(b, d, map)
        }
        (Formula::Implication(a, b), Formula::Implication(c, d)) => {
            match_formula(a, c, map) && match_formula(b, d, map)
        }
        (Formula::Conjunction(xs), Formula::Conjunction(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_formula(x, y, map))
        }
        _ => false,
    }
}

/// Template rendering of `f`, if it matches one of the known statement shapes.
pub fn settheory_template(f: &Formula) -> Option<String> {
    TEMPLATES.iter().find_map(|(pattern, text, names)| {
        let pattern = parse_formula(pattern).expect("template patterns parse");
        let mut map = Renaming::new();
        if !match_formula(&pattern, f, &mut map) {
            return None;
        }
        let mut out = text.to_string();
        for (letter, name) in names.iter() {
            out = out.replace(&format!("{{{letter}}}"), name);
        }
        Some(out)
    })
}

fn system_name(v: Var) -> String {
    v.letter().to_ascii_uppercase().to_string()
}

fn term_prose(t: &Term) -> String {
    let list = |ts: &[Term]| ts.iter().map(term_prose).collect::<Vec<_>>().join(", ");
    match t {
        Term::Var(v) => system_name(*v),
        Term::Const(Const::Zero) => "the empty relation".into(),
        Term::Const(Const::One) => "the universal relation".into(),
        Term::Const(Const::Diag) => "the diagonal".into(),
        Term::Const(Const::AntiDiag) => "the anti-diagonal".into(),
        Term::Complement(x) => format!("the complement of {}", term_prose(x)),
        Term::Union(ts) => format!("M({})", list(ts)),
        Term::Intersect(ts) => format!("G({})", list(ts)),
        Term::Compose(a, b) => format!("the image of {} under {}", term_prose(b), term_prose(a)),
        Term::RelSum(a, b) => format!(
            "the relative sum of {} and {}",
            term_prose(a),
            term_prose(b)
        ),
        Term::Chain(v, x) => format!("the {}-chain of {}", system_name(*v), term_prose(x)),
        Term::Iterate(v, x) => format!(
            "the union of all iterated {}-images of {}",
            system_name(*v),
            term_prose(x)
        ),
    }
}

fn formula_prose(f: &Formula) -> String {
    match f {
        Formula::Inclusion(a, b) => format!("{} ∍ {}", term_prose(a), term_prose(b)),
        Formula::Equation(a, b) => format!("{} is the same as {}", term_prose(a), term_prose(b)),
        Formula::Implication(p, q) => format!("if {}, then {}", formula_prose(p), formula_prose(q)),
        Formula::Conjunction(fs) => fs
            .iter()
            .map(formula_prose)
            .collect::<Vec<_>>()
            .join(", and "),
    }
}

/// Anything the renderer accepts.
pub trait Render {
    fn render(&self, style: RenderStyle) -> String;
}

impl Render for Term {
    fn render(&self, style: RenderStyle) -> String {
        match style {
            RenderStyle::Ascii => term_text(self, &ASCII),
            RenderStyle::Unicode => term_text(self, &UNICODE),
            RenderStyle::SetTheory => term_prose(self),
        }
    }
}

impl Render for Formula {
    fn render(&self, style: RenderStyle) -> String {
        match style {
            RenderStyle::Ascii => formula_text(self, &ASCII, true),
            RenderStyle::Unicode => formula_text(self, &UNICODE, true),
            RenderStyle::SetTheory => {
                settheory_template(self).unwrap_or_else(|| formula_prose(self))
            }
        }
    }
}

pub fn render<R: Render + ?Sized>(x: &R, style: RenderStyle) -> String {
    x.render(style)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_text(self, &ASCII))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&formula_text(self, &ASCII, true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn glyphs() {
        assert_eq!(f("a;1 <= 1").render(RenderStyle::Unicode), "a;1 ⊆ 1");
        assert_eq!(f("a;1 <= 1").render(RenderStyle::Ascii), "a;1 <= 1");
        assert_eq!(
            f("(b <= c) <= (a;b <= a;c)").render(RenderStyle::Unicode),
            "(b ⊆ c) ⊆ (a;b ⊆ a;c)"
        );
    }

    #[test]
    fn induction_layout() {
        let d59 = f("{a;((a_0;b)c) + b <= c} <= (a_0;b <= c)");
        assert_eq!(
            d59.render(RenderStyle::Ascii),
            "{a;((a_0;b)c) + b <= c} <= (a_0;b <= c)"
        );
        assert_eq!(
            d59.render(RenderStyle::Unicode),
            "{a;((a₀;b)c) + b ⊆ c} ⊆ (a₀;b ⊆ c)"
        );
        let literal = f("{a;(a_0;b)c + b <= c} <= (a_0;b <= c)");
        assert_eq!(
            literal.render(RenderStyle::Ascii),
            "{a;(a_0;b)c + b <= c} <= (a_0;b <= c)"
        );
        let reform = f("b <= c & (a;b <= c -> a;(a;b) <= c) -> a_0;b <= c");
        assert_eq!(
            reform.render(RenderStyle::Ascii),
            "b <= c & (a;b <= c -> a;(a;b) <= c) -> a_0;b <= c"
        );
    }

    #[test]
    fn minimal_parentheses() {
        for (src, out) in [
            ("a;b;c", "a;b;c"),
            ("a;(b;c)", "a;(b;c)"),
            ("(a +' b);c", "(a +' b);c"),
            ("~(a;b)", "~(a;b)"),
            ("~a;b", "~a;b"),
            ("(a + b) + c", "(a + b) + c"),
            ("a;b * a;c", "a;b * a;c"),
            ("a;(bc)", "a;(bc)"),
            ("a_0;(b;c)", "a_0;(b;c)"),
            ("a_0;b;c", "a_0;b;c"),
            ("a~b", "a * ~b"),
        ] {
            assert_eq!(
                parse_term(src).unwrap().render(RenderStyle::Ascii),
                out,
                "{src}"
            );
        }
    }

    #[test]
    fn settheory_templates() {
        let closed = f("a;b <= b").render(RenderStyle::SetTheory);
        assert!(closed.starts_with("phi(K) is a part of K"));
        assert!(closed.contains("K is called a chain when K' ∍ K"));
        // renamed variables still match the template
        let renamed = f("x;y <= y").render(RenderStyle::SetTheory);
        assert_eq!(renamed, closed);
        assert_eq!(
            f("(b <= c) <= (a;b <= a;c)").render(RenderStyle::SetTheory),
            "If A ∍ B, then A' ∍ B' (images under phi)."
        );
        // non-injective renaming does not match
        assert_ne!(
            f("(b <= b) <= (a;b <= a;b)").render(RenderStyle::SetTheory),
            "If A ∍ A, then A' ∍ A' (images under phi)."
        );
    }

    #[test]
    fn structural_fallback() {
        assert_eq!(
            f("a;b + c <= ~d").render(RenderStyle::SetTheory),
            "M(the image of B under A, C) ∍ the complement of D"
        );
        assert_eq!(
            f("x_0;y = y -> x <= 1").render(RenderStyle::SetTheory),
            "if the X-chain of Y is the same as Y, then X ∍ the universal relation"
        );
    }
}
