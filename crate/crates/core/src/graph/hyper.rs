use std::collections::BTreeSet;
use std::fmt::Write;

use super::GraphError;

/// Tripartite 3-uniform hypergraph with parts `A`, `B`, `C` of size `n`;
/// a hyperedge `(a, b, c)` has `a in A`, `b in B`, `c in C`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph3 {
    n: u32,
    edges: BTreeSet<(u32, u32, u32)>,
}

impl Hypergraph3 {
    pub fn new(n: u32) -> Self {
        Hypergraph3 { n, edges: BTreeSet::new() }
    }

    pub fn complete(n: u32) -> Self {
        let mut h = Hypergraph3::new(n);
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    h.edges.insert((a, b, c));
                }
            }
        }
        h
    }

    pub fn add_edge(&mut self, a: u32, b: u32, c: u32) -> Result<bool, GraphError> {
        for x in [a, b, c] {
            if x == 0 || x > self.n {
                return Err(GraphError::BadVertex { v: x, n: self.n });
            }
        }
        Ok(self.edges.insert((a, b, c)))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: (u32, u32, u32)) -> bool {
        self.edges.contains(&e)
    }

    /// Parses the `h <n>` / `t <a> <b> <c>` format.
    pub fn parse(text: &str) -> Result<Hypergraph3, GraphError> {
        let mut h: Option<Hypergraph3> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| GraphError::Parse { line, msg };
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let num = |s: &str| s.parse::<u32>().map_err(|_| err(format!("bad number {s:?}")));
            match toks.as_slice() {
                ["h", n] => {
                    if h.is_some() {
                        return Err(err("duplicate header".into()));
                    }
                    h = Some(Hypergraph3::new(num(n)?));
                }
                ["t", a, b, c] => {
                    let hg = h.as_mut().ok_or_else(|| err("hyperedge before header".into()))?;
                    hg.add_edge(num(a)?, num(b)?, num(c)?).map_err(|e| err(e.to_string()))?;
                }
                _ => return Err(err(format!("unrecognized line {body:?}"))),
            }
        }
        h.ok_or(GraphError::Parse { line: 0, msg: "missing `h` header".into() })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("h {}\n", self.n);
        for (a, b, c) in self.edges() {
            let _ = writeln!(s, "t {a} {b} {c}");
        }
        s
    }
}
