use std::fmt::Write;

use super::FamilyError;
use crate::circuit::Clause;

/// A 3-CNF formula over variables `1..=n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cnf {
    pub n: u32,
    pub clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(n: u32, clauses: Vec<Clause>) -> Result<Cnf, FamilyError> {
        for c in &clauses {
            if let Some(l) = c.literals().iter().find(|l| **l == 0 || l.unsigned_abs() > n) {
                return Err(FamilyError::Parse { line: 0, msg: format!("literal {l} outside 1..={n}") });
            }
        }
        Ok(Cnf { n, clauses })
    }

    /// Distinct clauses in first-seen order.
    pub fn distinct_clauses(&self) -> Vec<Clause> {
        let mut out: Vec<Clause> = Vec::new();
        for c in &self.clauses {
            if !out.contains(c) {
                out.push(*c);
            }
        }
        out
    }

    /// DIMACS `p cnf <n> <m>` with `0`-terminated clauses of one to three
    /// literals; shorter clauses repeat their last literal.
    pub fn parse(text: &str) -> Result<Cnf, FamilyError> {
        let mut n = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<i32> = Vec::new();
        let mut pending_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| FamilyError::Parse { line, msg };
            let body = raw.trim();
            if body.is_empty() || body.starts_with('c') || body.starts_with('%') {
                continue;
            }
            if body.starts_with('p') {
                let toks: Vec<&str> = body.split_whitespace().collect();
                match toks.as_slice() {
                    ["p", "cnf", vars, _] => n = Some(vars.parse::<u32>().map_err(|_| err("bad variable count".into()))?),
                    _ => return Err(err("expected `p cnf <n> <m>`".into())),
                }
                continue;
            }
            let nv = n.ok_or_else(|| err("clause before header".into()))?;
            for tok in body.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| err(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    let c = match pending.as_slice() {
                        [a] => Clause::new(*a, *a, *a),
                        [a, b] => Clause::new(*a, *b, *b),
                        [a, b, c] => Clause::new(*a, *b, *c),
                        _ => return Err(err(format!("clause with {} literals; expected 1 to 3", pending.len()))),
                    };
                    clauses.push(c);
                    pending.clear();
                } else {
                    if lit.unsigned_abs() > nv {
                        return Err(err(format!("literal {lit} outside 1..={nv}")));
                    }
                    if pending.is_empty() {
                        pending_line = line;
                    }
                    pending.push(lit);
                }
            }
        }
        if !pending.is_empty() {
            return Err(FamilyError::Parse { line: pending_line, msg: "unterminated clause".into() });
        }
        let n = n.ok_or(FamilyError::Parse { line: 0, msg: "missing `p cnf` header".into() })?;
        Ok(Cnf { n, clauses })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.n, self.clauses.len());
        for c in &self.clauses {
            let [a, b, d] = c.literals();
            let _ = writeln!(s, "{a} {b} {d} 0");
        }
        s
    }
}
