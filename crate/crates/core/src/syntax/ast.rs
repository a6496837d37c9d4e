use std::collections::BTreeSet;
use std::fmt;

/// A relation variable: a single lowercase Latin letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(char);

impl Var {
    pub fn new(letter: char) -> Option<Var> {
        letter.is_ascii_lowercase().then_some(Var(letter))
    }

    pub fn letter(self) -> char {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Const {
    /// `0`, the empty relation
    Zero,
    /// `1`, the universal relation
    One,
    /// `1'`, the diagonal
    Diag,
    /// `0'`, the anti-diagonal
    AntiDiag,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Const(Const),
    Complement(Box<Term>),
    /// At least two operands.
    Union(Vec<Term>),
    /// At least two operands.
    Intersect(Vec<Term>),
    Compose(Box<Term>, Box<Term>),
    RelSum(Box<Term>, Box<Term>),
    /// `a_0;t`: the `a`-chain of `t`.
    Chain(Var, Box<Term>),
    /// `a_00;t`: the union of all iterates `a^k;t`, `k >= 1`.
    Iterate(Var, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Inclusion(Term, Term),
    Equation(Term, Term),
    Implication(Box<Formula>, Box<Formula>),
    /// At least two conjuncts.
    Conjunction(Vec<Formula>),
}

// Shorthand constructors, mostly for tests and bundled data.
impl Term {
    pub fn var(letter: char) -> Term {
        Term::Var(Var::new(letter).expect("variable must be a lowercase letter"))
    }

    pub fn compose(a: Term, b: Term) -> Term {
        Term::Compose(Box::new(a), Box::new(b))
    }

    pub fn rel_sum(a: Term, b: Term) -> Term {
        Term::RelSum(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Complement(Box::new(t))
    }

    pub fn chain(base: char, arg: Term) -> Term {
        Term::Chain(Var::new(base).expect("chain base"), Box::new(arg))
    }

    pub fn iterate(base: char, arg: Term) -> Term {
        Term::Iterate(Var::new(base).expect("iterate base"), Box::new(arg))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::Const(_) => {}
            Term::Complement(t) => t.collect_vars(out),
            Term::Union(ts) | Term::Intersect(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Term::Compose(a, b) | Term::RelSum(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Chain(v, t) | Term::Iterate(v, t) => {
                out.insert(*v);
                t.collect_vars(out);
            }
        }
    }
}

impl Formula {
    pub fn inclusion(a: Term, b: Term) -> Formula {
        Formula::Inclusion(a, b)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implication(Box::new(a), Box::new(b))
    }

    /// Free variables, alphabetically.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Inclusion(a, b) | Formula::Equation(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Implication(p, q) => {
                p.collect_vars(out);
                q.collect_vars(out);
            }
            Formula::Conjunction(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Inclusion(..) | Formula::Equation(..))
    }
}
