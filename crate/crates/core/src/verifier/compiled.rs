//! Formulas compiled into a flat program over a fixed variable order.
//!
//! Every distinct subterm becomes one instruction, evaluated in order into a
//! value table. Exhaustive searches vary the last variable fastest, so
//! [`Program::load`] can skip every instruction that does not depend on it
//! while the other variables stay put. The inner loop skips the universe
//! checks of the public API; all slots must live on the program's universe.

use std::collections::HashMap;

use crate::chains;
use crate::relation::Relation;
use crate::syntax::{Const, Formula, Term, Var};

#[derive(Debug, Clone)]
enum Op {
    Slot(usize),
    Const(Relation),
    Not(usize),
    Union(Vec<usize>),
    Inter(Vec<usize>),
    Compose(usize, usize),
    RelSum(usize, usize),
    Chain(usize, usize),
    Iterate(usize, usize),
}

/// A formula over instruction indices.
#[derive(Debug, Clone)]
pub(crate) enum CFormula {
    Incl(usize, usize),
    Eq(usize, usize),
    Imp(Box<CFormula>, Box<CFormula>),
    And(Vec<CFormula>),
}

pub(crate) struct Builder<'v> {
    vars: &'v [Var],
    n: usize,
    ops: Vec<Op>,
    varying: Vec<bool>,
    memo: HashMap<Term, usize>,
}

impl<'v> Builder<'v> {
    pub(crate) fn new(vars: &'v [Var], n: usize) -> Self {
        Builder {
            vars,
            n,
            ops: vec![],
            varying: vec![],
            memo: HashMap::new(),
        }
    }

    fn slot(&self, v: Var) -> usize {
        self.vars
            .iter()
            .position(|&x| x == v)
            .expect("variable order covers every free variable")
    }

    fn push(&mut self, op: Op, varying: bool) -> usize {
        self.ops.push(op);
        self.varying.push(varying);
        self.ops.len() - 1
    }

    pub(crate) fn term(&mut self, t: &Term) -> usize {
        if let Some(&i) = self.memo.get(t) {
            return i;
        }
        let last = self.vars.len().checked_sub(1);
        let (op, varying) = match t {
            Term::Var(v) => {
                let s = self.slot(*v);
                (Op::Slot(s), Some(s) == last)
            }
            Term::Const(k) => {
                let n = self.n;
                let r = match k {
                    Const::Zero => Relation::bottom(n),
                    Const::One => Relation::top(n),
                    Const::Diag => Relation::identity(n),
                    Const::AntiDiag => Relation::antidiagonal(n),
                };
                (Op::Const(r.expect("valid universe")), false)
            }
            Term::Complement(x) => {
                let x = self.term(x);
                (Op::Not(x), self.varying[x])
            }
            Term::Union(ts) | Term::Intersect(ts) => {
                let xs: Vec<usize> = ts.iter().map(|x| self.term(x)).collect();
                let varying = xs.iter().any(|&x| self.varying[x]);
                let op = if matches!(t, Term::Union(_)) {
                    Op::Union(xs)
                } else {
                    Op::Inter(xs)
                };
                (op, varying)
            }
            Term::Compose(a, b) | Term::RelSum(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                let varying = self.varying[a] || self.varying[b];
                let op = if matches!(t, Term::Compose(..)) {
                    Op::Compose(a, b)
                } else {
                    Op::RelSum(a, b)
                };
                (op, varying)
            }
            Term::Chain(v, x) | Term::Iterate(v, x) => {
                let s = self.slot(*v);
                let x = self.term(x);
                let varying = Some(s) == last || self.varying[x];
                let op = if matches!(t, Term::Chain(..)) {
                    Op::Chain(s, x)
                } else {
                    Op::Iterate(s, x)
                };
                (op, varying)
            }
        };
        let i = self.push(op, varying);
        self.memo.insert(t.clone(), i);
        i
    }

    pub(crate) fn formula(&mut self, f: &Formula) -> CFormula {
        match f {
            Formula::Inclusion(a, b) => CFormula::Incl(self.term(a), self.term(b)),
            Formula::Equation(a, b) => CFormula::Eq(self.term(a), self.term(b)),
            Formula::Implication(p, q) => {
                CFormula::Imp(Box::new(self.formula(p)), Box::new(self.formula(q)))
            }
            Formula::Conjunction(fs) => CFormula::And(fs.iter().map(|x| self.formula(x)).collect()),
        }
    }

    pub(crate) fn finish(self) -> Program {
        Program {
            ops: self.ops,
            varying: self.varying,
            n: self.n,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Program {
    ops: Vec<Op>,
    varying: Vec<bool>,
    n: usize,
}

/// The value table of one evaluation thread.
#[derive(Debug, Clone)]
pub(crate) struct Machine {
    values: Vec<Relation>,
}

impl Machine {
    pub(crate) fn value(&self, i: usize) -> &Relation {
        &self.values[i]
    }
}

impl Program {
    pub(crate) fn machine(&self) -> Machine {
        let zero = Relation::bottom(self.n).expect("valid universe");
        Machine {
            values: vec![zero; self.ops.len()],
        }
    }

    /// Evaluates every instruction for `slots`, or with `full` unset only the
    /// ones that depend on the last slot.
    pub(crate) fn load(&self, m: &mut Machine, slots: &[Relation], full: bool) {
        for (i, op) in self.ops.iter().enumerate() {
            if !full && !self.varying[i] {
                continue;
            }
            let v = &m.values;
            let value = match op {
                Op::Slot(s) => slots[*s].clone(),
                Op::Const(r) => r.clone(),
                Op::Not(x) => v[*x].complement(),
                Op::Union(xs) => xs[1..]
                    .iter()
                    .fold(v[xs[0]].clone(), |acc, x| acc.union_unchecked(&v[*x])),
                Op::Inter(xs) => xs[1..]
                    .iter()
                    .fold(v[xs[0]].clone(), |acc, x| acc.intersect_unchecked(&v[*x])),
                Op::Compose(a, b) => v[*a].compose_unchecked(&v[*b]),
                Op::RelSum(a, b) => v[*a].relative_sum_unchecked(&v[*b]),
                Op::Chain(s, x) => chains::chain_unchecked(&slots[*s], &v[*x]),
                Op::Iterate(s, x) => chains::iterate_chain_unchecked(&slots[*s], &v[*x]),
            };
            m.values[i] = value;
        }
    }
}

impl CFormula {
    pub(crate) fn eval(&self, m: &Machine) -> bool {
        match self {
            CFormula::Incl(a, b) => m.values[*a].includes_unchecked(&m.values[*b]),
            CFormula::Eq(a, b) => m.values[*a] == m.values[*b],
            CFormula::Imp(p, q) => !p.eval(m) || q.eval(m),
            CFormula::And(fs) => fs.iter().all(|f| f.eval(m)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{evaluate, parse_term, Env};

    #[test]
    fn shared_subterms_and_partial_reload() {
        let vars: Vec<Var> = "abc".chars().map(|c| Var::new(c).unwrap()).collect();
        let t = parse_term("a;(a_0;b)c + a_0;b").unwrap();
        let mut b = Builder::new(&vars, 2);
        let root = b.term(&t);
        let prog = b.finish();
        // a, b, a_0;b, a;(a_0;b), c, the meet and the union: the chain is shared
        assert_eq!(prog.ops.len(), 7);
        let mut m = prog.machine();
        let r = |i: u64| Relation::from_index(2, i).unwrap();
        let mut slots = vec![r(2), r(8), r(0)];
        prog.load(&mut m, &slots, true);
        for c in 0..16 {
            slots[2] = r(c);
            prog.load(&mut m, &slots, false);
            let env: Env = vars.iter().copied().zip(slots.iter().cloned()).collect();
            assert_eq!(m.value(root), &evaluate(&t, &env, 2).unwrap());
        }
    }
}
