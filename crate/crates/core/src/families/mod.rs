//! The five exponential-sum families over `F_q` (satisfiability, vertex
//! cover, clique/independent set, clow, 3D matching): definitional
//! evaluation, polynomial-time evaluation and the standard bivariate
//! projections whose coefficients count solutions.

mod cnf;
mod definitional;
mod fast;
mod projection;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Clause, VarLabel};

pub use cnf::Cnf;
pub use definitional::{definitional_budget, eval_definitional};
pub use fast::{clow_head_counts, eval_fast};
pub use projection::{count_via_coefficient, standard_projection, Instance, ProjValue, ProjectionSpec};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Family {
    Sat,
    Vc,
    Cis,
    Clow,
    Tdm,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Sat, Family::Vc, Family::Cis, Family::Clow, Family::Tdm];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sat => "sat",
            Family::Vc => "vc",
            Family::Cis => "cis",
            Family::Clow => "clow",
            Family::Tdm => "tdm",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sat" => Ok(Family::Sat),
            "vc" => Ok(Family::Vc),
            "cis" | "clique" => Ok(Family::Cis),
            "clow" => Ok(Family::Clow),
            "tdm" | "3dm" => Ok(Family::Tdm),
            _ => Err(FamilyError::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family {0:?} (expected sat, vc, cis, clow or tdm)")]
    UnknownFamily(String),
    #[error("{family} with n = {n} exceeds the brute-force budget n <= {max}; use eval_fast")]
    Budget { family: Family, n: u32, max: u32 },
    #[error("instance does not fit {family} with n = {n}: {msg}")]
    SizeMismatch { family: Family, n: u32, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// All clauses over `n` variables: ordered triples of nonzero literals in
/// `-n..=n`, so `(2n)^3` of them.
pub fn clause_space(n: u32) -> Vec<Clause> {
    let n = n as i32;
    let lits: Vec<i32> = (1..=n).flat_map(|i| [i, -i]).collect();
    let mut out = Vec::with_capacity(lits.len().pow(3));
    for &a in &lits {
        for &b in &lits {
            for &c in &lits {
                out.push(Clause::new(a, b, c));
            }
        }
    }
    out
}

/// Vertex label of the `B` and `C` parts in the 3D-matching family: part
/// `A` uses `Yv:1..n`, `B` uses `Yv:n+1..2n`, `C` uses `Yv:2n+1..3n`.
pub fn tdm_vertex(n: u32, part: usize, i: u32) -> VarLabel {
    VarLabel::Yv(part as u32 * n + i)
}

/// The variables of the index-`n` member of `family`.
pub fn variables(family: Family, n: u32) -> Vec<VarLabel> {
    let mut out = Vec::new();
    match family {
        Family::Sat => {
            out.extend((1..=n).map(VarLabel::Xi));
            out.extend(clause_space(n).into_iter().map(VarLabel::Yc));
        }
        Family::Vc | Family::Cis | Family::Clow => {
            for u in 1..=n {
                for v in u + 1..=n {
                    out.push(VarLabel::xe(u, v));
                }
            }
            out.extend((1..=n).map(VarLabel::Yv));
        }
        Family::Tdm => {
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        out.push(VarLabel::Xh(a, b, c));
                    }
                }
            }
            out.extend((1..=3 * n).map(VarLabel::Yv));
        }
    }
    out
}
