//! Arithmetic circuits: a topologically ordered DAG of constant, input,
//! addition and multiplication gates with one output.

mod builder;
mod label;
mod parse_tree;
mod poly;
mod text;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::rings::{Integers, Ring};

pub use builder::CircuitBuilder;
pub use label::{Clause, LabelParseError, VarLabel};
pub use parse_tree::ParseTree;
pub use poly::{Monomial, SparsePoly};

/// Default monomial bound for [`Circuit::eval_symbolic`].
pub const DEFAULT_MONOMIAL_BOUND: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {gate}: child {child} does not precede it")]
    ChildAfterParent { gate: usize, child: usize },
    #[error("gate {0}: add/mul gate without children")]
    EmptyOperands(usize),
    #[error("output gate {0} does not exist")]
    BadOutput(usize),
    #[error("circuit has no gates")]
    Empty,
    #[error("input {0} has no assigned value")]
    Unassigned(VarLabel),
    #[error("symbolic expansion exceeds {0} monomials at some gate; evaluate numerically instead")]
    TooManyMonomials(usize),
    #[error("circuit is not multiplicatively disjoint")]
    NotMultDisjoint,
    #[error("circuit has {count} parse trees, over the bound {bound}")]
    TooManyParseTrees { count: u128, bound: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Gate {
    /// A constant, interpreted in the evaluation ring through `from_int`.
    Const(i64),
    Input(VarLabel),
    Add(Vec<usize>),
    Mul(Vec<usize>),
}

impl Gate {
    pub fn children(&self) -> &[usize] {
        match self {
            Gate::Add(c) | Gate::Mul(c) => c,
            _ => &[],
        }
    }

    /// Add and Mul gates; constants and inputs are leaves.
    pub fn is_internal(&self) -> bool {
        matches!(self, Gate::Add(_) | Gate::Mul(_))
    }
}

/// How [`Circuit::project`] rewrites one input.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Subst {
    Zero,
    One,
    Var(VarLabel),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    gates: Vec<Gate>,
    output: usize,
}

impl Circuit {
    /// Validates the topological order, operand counts and output id.
    pub fn new(gates: Vec<Gate>, output: usize) -> Result<Self, CircuitError> {
        if gates.is_empty() {
            return Err(CircuitError::Empty);
        }
        if output >= gates.len() {
            return Err(CircuitError::BadOutput(output));
        }
        for (id, g) in gates.iter().enumerate() {
            if g.is_internal() && g.children().is_empty() {
                return Err(CircuitError::EmptyOperands(id));
            }
            if let Some(&child) = g.children().iter().find(|&&c| c >= id) {
                return Err(CircuitError::ChildAfterParent { gate: id, child });
            }
        }
        Ok(Circuit { gates, output })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn wire_count(&self) -> usize {
        self.gates.iter().map(|g| g.children().len()).sum()
    }

    /// Marks the gates the output depends on.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.gates.len()];
        seen[self.output] = true;
        for id in (0..=self.output).rev() {
            if seen[id] {
                for &c in self.gates[id].children() {
                    seen[c] = true;
                }
            }
        }
        seen
    }

    /// Distinct input labels, in order of first appearance.
    pub fn input_labels(&self) -> Vec<VarLabel> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for g in &self.gates {
            if let Gate::Input(l) = g {
                if seen.insert(l.clone()) {
                    out.push(l.clone());
                }
            }
        }
        out
    }

    pub fn constants_used(&self) -> BTreeSet<i64> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Const(c) => Some(*c),
                _ => None,
            })
            .collect()
    }

    /// True iff every constant gate is 0 or 1.
    pub fn is_constant_free(&self) -> bool {
        self.constants_used().iter().all(|c| *c == 0 || *c == 1)
    }

    /// Evaluates the output under `assign`; only gates the output depends on
    /// are computed.
    pub fn eval<R: Ring>(
        &self,
        ring: &R,
        mut assign: impl FnMut(&VarLabel) -> Option<R::Elem>,
    ) -> Result<R::Elem, CircuitError> {
        let live = self.reachable();
        let mut vals: Vec<Option<R::Elem>> = vec![None; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate().take(self.output + 1) {
            if !live[id] {
                continue;
            }
            let v = match g {
                Gate::Const(c) => ring.from_int(*c),
                Gate::Input(l) => assign(l).ok_or_else(|| CircuitError::Unassigned(l.clone()))?,
                Gate::Add(cs) => ring.sum(cs.iter().map(|&c| vals[c].as_ref().expect("topological"))),
                Gate::Mul(cs) => {
                    let mut acc = ring.one();
                    for &c in cs {
                        let x = vals[c].as_ref().expect("topological");
                        if ring.is_zero(x) {
                            acc = ring.zero();
                            break;
                        }
                        if !ring.is_one(x) {
                            acc = ring.mul(&acc, x);
                        }
                    }
                    acc
                }
            };
            vals[id] = Some(v);
        }
        Ok(vals[self.output].take().expect("output computed"))
    }

    /// Convenience wrapper over [`Circuit::eval`] with a lookup table.
    pub fn eval_map<R: Ring>(
        &self,
        ring: &R,
        assign: &HashMap<VarLabel, R::Elem>,
    ) -> Result<R::Elem, CircuitError> {
        self.eval(ring, |l| assign.get(l).cloned())
    }

    /// Expands the output polynomial with coefficients in `ring`.
    pub fn eval_symbolic_in<R: Ring>(
        &self,
        ring: &R,
        bound: usize,
    ) -> Result<SparsePoly<R::Elem>, CircuitError> {
        let live = self.reachable();
        let mut vals: Vec<Option<SparsePoly<R::Elem>>> = vec![None; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate().take(self.output + 1) {
            if !live[id] {
                continue;
            }
            let p = match g {
                Gate::Const(c) => SparsePoly::constant(ring, ring.from_int(*c)),
                Gate::Input(l) => SparsePoly::var(ring, l.clone()),
                Gate::Add(cs) => {
                    let mut acc = SparsePoly::zero();
                    for &c in cs {
                        acc.add_assign(ring, vals[c].as_ref().expect("topological"));
                        if acc.len() > bound {
                            return Err(CircuitError::TooManyMonomials(bound));
                        }
                    }
                    acc
                }
                Gate::Mul(cs) => {
                    let mut acc = SparsePoly::constant(ring, ring.one());
                    for &c in cs {
                        let x = vals[c].as_ref().expect("topological");
                        if acc.len().saturating_mul(x.len()) > bound.saturating_mul(16) {
                            return Err(CircuitError::TooManyMonomials(bound));
                        }
                        acc = acc.mul(ring, x);
                        if acc.len() > bound {
                            return Err(CircuitError::TooManyMonomials(bound));
                        }
                    }
                    acc
                }
            };
            vals[id] = Some(p);
        }
        Ok(vals[self.output].take().expect("output computed"))
    }

    /// Expands the output polynomial over the integers.
    pub fn eval_symbolic(&self) -> Result<SparsePoly<i128>, CircuitError> {
        self.eval_symbolic_in(&Integers, DEFAULT_MONOMIAL_BOUND)
    }

    /// True iff every multiplication gate has at most one Add/Mul child.
    pub fn check_skew(&self) -> bool {
        self.gates.iter().all(|g| match g {
            Gate::Mul(cs) => cs.iter().filter(|&&c| self.gates[c].is_internal()).count() <= 1,
            _ => true,
        })
    }

    /// True iff the children of every multiplication gate have pairwise
    /// disjoint sub-circuits.
    pub fn check_mult_disjoint(&self) -> bool {
        let n = self.gates.len();
        let words = n.div_ceil(64);
        let live = self.reachable();
        let mut below: Vec<Vec<u64>> = vec![Vec::new(); n];
        for id in 0..n {
            if !live[id] {
                continue;
            }
            let mut set = vec![0u64; words];
            set[id / 64] |= 1 << (id % 64);
            let g = &self.gates[id];
            for &c in g.children() {
                let cs = &below[c];
                if matches!(g, Gate::Mul(_)) && set.iter().zip(cs).any(|(a, b)| a & b != 0) {
                    return false;
                }
                for (a, b) in set.iter_mut().zip(cs) {
                    *a |= b;
                }
            }
            below[id] = set;
        }
        true
    }

    /// Rewrites every input gate per `sigma`; gate ids and wiring are kept.
    pub fn project(&self, mut sigma: impl FnMut(&VarLabel) -> Subst) -> Circuit {
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Input(l) => match sigma(l) {
                    Subst::Zero => Gate::Const(0),
                    Subst::One => Gate::Const(1),
                    Subst::Var(v) => Gate::Input(v),
                },
                other => other.clone(),
            })
            .collect();
        Circuit { gates, output: self.output }
    }

    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        text::parse(text)
    }

    pub fn to_text(&self) -> String {
        text::render(self)
    }
}
