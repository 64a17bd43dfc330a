use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A 3-literal clause as an ordered triple. Literal `i` is `x_i`, `-i` is
/// `not x_i` (1-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Clause(pub [i32; 3]);

impl Clause {
    pub fn new(a: i32, b: i32, c: i32) -> Self {
        Clause([a, b, c])
    }

    pub fn literals(&self) -> &[i32; 3] {
        &self.0
    }

    /// True if any coordinate literal is true under `assignment[i-1]`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.0.iter().any(|&lit| {
            let v = assignment[(lit.unsigned_abs() - 1) as usize];
            if lit > 0 {
                v
            } else {
                !v
            }
        })
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

/// Variable names from the label registry.
///
/// Undirected edge labels are stored with their endpoints in `(min, max)`
/// order; use the [`VarLabel::ye`] and [`VarLabel::xe`] constructors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum VarLabel {
    /// Placement variable `Z_{u,a}`: source vertex `u` sent to target vertex `a`.
    Z(u32, u32),
    /// Target edge variable `Y_{(a,b)}`.
    Ye(u32, u32),
    /// Vertex weight `Y_v`.
    Yv(u32),
    /// Clause variable `Y_c`.
    Yc(Clause),
    /// Boolean-variable weight `X_i`.
    Xi(u32),
    /// Graph edge weight `X_e`.
    Xe(u32, u32),
    /// Hyperedge weight `X_{(a,b,c)}` with `a in A`, `b in B`, `c in C`.
    Xh(u32, u32, u32),
    ScalarZ,
    ScalarT,
    /// The fresh cycle-closing variable.
    ScalarY,
    Free(String),
}

impl VarLabel {
    pub fn ye(a: u32, b: u32) -> Self {
        VarLabel::Ye(a.min(b), a.max(b))
    }

    pub fn xe(a: u32, b: u32) -> Self {
        VarLabel::Xe(a.min(b), a.max(b))
    }

    /// A free variable. Panics unless `name` is an identifier other than
    /// the reserved `z`, `t` and `y`, so that labels print unambiguously.
    pub fn free(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(is_free_name(&name), "{name:?} is not usable as a free variable name");
        VarLabel::Free(name)
    }

    pub fn is_z(&self) -> bool {
        matches!(self, VarLabel::Z(..))
    }
}

impl fmt::Display for VarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarLabel::Z(u, a) => write!(f, "Z:{u}:{a}"),
            VarLabel::Ye(a, b) => write!(f, "Ye:{a}:{b}"),
            VarLabel::Yv(v) => write!(f, "Yv:{v}"),
            VarLabel::Yc(c) => write!(f, "Yc:{c}"),
            VarLabel::Xi(i) => write!(f, "X:{i}"),
            VarLabel::Xe(a, b) => write!(f, "X:{a}:{b}"),
            VarLabel::Xh(a, b, c) => write!(f, "X:{a}:{b}:{c}"),
            VarLabel::ScalarZ => write!(f, "z"),
            VarLabel::ScalarT => write!(f, "t"),
            VarLabel::ScalarY => write!(f, "y"),
            VarLabel::Free(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad variable label {0:?}")]
pub struct LabelParseError(pub String);

impl FromStr for VarLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LabelParseError(s.to_string());
        let nums = |parts: &[&str]| -> Result<Vec<u32>, LabelParseError> {
            parts.iter().map(|p| p.parse::<u32>().map_err(|_| bad())).collect()
        };
        match s {
            "z" => return Ok(VarLabel::ScalarZ),
            "t" => return Ok(VarLabel::ScalarT),
            "y" => return Ok(VarLabel::ScalarY),
            _ => {}
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["Z", rest @ ..] if rest.len() == 2 => {
                let n = nums(rest)?;
                Ok(VarLabel::Z(n[0], n[1]))
            }
            ["Ye", rest @ ..] if rest.len() == 2 => {
                let n = nums(rest)?;
                if n[0] == n[1] {
                    return Err(bad());
                }
                Ok(VarLabel::ye(n[0], n[1]))
            }
            ["Yv", v] => Ok(VarLabel::Yv(v.parse().map_err(|_| bad())?)),
            ["Yc", body] => {
                let lits: Vec<i32> = body
                    .split(',')
                    .map(|x| x.trim().parse::<i32>().map_err(|_| bad()))
                    .collect::<Result<_, _>>()?;
                if lits.len() != 3 || lits.contains(&0) {
                    return Err(bad());
                }
                Ok(VarLabel::Yc(Clause([lits[0], lits[1], lits[2]])))
            }
            ["X", rest @ ..] => {
                let n = nums(rest)?;
                match n.as_slice() {
                    [i] => Ok(VarLabel::Xi(*i)),
                    [a, b] if a != b => Ok(VarLabel::xe(*a, *b)),
                    [a, b, c] => Ok(VarLabel::Xh(*a, *b, *c)),
                    _ => Err(bad()),
                }
            }
            [name] if is_free_name(name) => Ok(VarLabel::Free(name.to_string())),
            _ => Err(bad()),
        }
    }
}

fn is_free_name(s: &str) -> bool {
    if matches!(s, "z" | "t" | "y") {
        return false;
    }
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
