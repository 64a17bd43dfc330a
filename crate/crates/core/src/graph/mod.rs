//! Simple undirected graphs, tripartite 3-uniform hypergraphs, homomorphism
//! enumeration and the small-graph gadget search.

mod hom;
mod hyper;
mod search;

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write;

use thiserror::Error;

pub use hom::{are_incomparable, count_homs_upto, enumerate_homs, for_each_hom, hom_exists, is_rigid, Homomorphism};
pub use hyper::Hypergraph3;
pub use search::{canonical_code, search_gadgets, Gadget, GadgetNeed, GadgetTriple, SearchError};

/// Distance value for unreachable pairs.
pub const INF: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {v} outside 1..={n}")]
    BadVertex { v: u32, n: u32 },
    #[error("self-loop at {0}")]
    SelfLoop(u32),
    #[error("hom enumeration aborted after {partial} maps (cap {cap})")]
    CapExceeded { partial: usize, cap: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Undirected simple graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: u32,
    edges: BTreeSet<(u32, u32)>,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn new(n: u32) -> Self {
        Graph { n, edges: BTreeSet::new(), adj: vec![Vec::new(); n as usize + 1] }
    }

    pub fn from_edges(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts `{u, v}`; returns whether it was new.
    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<bool, GraphError> {
        for x in [u, v] {
            if x == 0 || x > self.n {
                return Err(GraphError::BadVertex { v: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let e = (u.min(v), u.max(v));
        if !self.edges.insert(e) {
            return Ok(false);
        }
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a as usize];
            let pos = list.binary_search(&b).unwrap_err();
            list.insert(pos, b);
        }
        Ok(true)
    }

    /// Appends a fresh isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> u32 {
        self.n += 1;
        self.adj.push(Vec::new());
        self.n
    }

    pub fn complete(n: u32) -> Self {
        let mut g = Graph::new(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    pub fn cycle(n: u32) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Graph::from_edges(n, (1..=n).map(|i| (i, i % n + 1))).expect("in range")
    }

    pub fn path(n: u32) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i, i + 1))).expect("in range")
    }

    /// The Grötzsch graph: triangle-free with chromatic number 4.
    pub fn grotzsch() -> Self {
        // Outer 5-cycle 1..5, inner independent set 6..10 (i+5 copies the
        // neighbourhood of i), hub 11.
        let mut g = Graph::cycle(5);
        for _ in 0..6 {
            g.add_vertex();
        }
        for i in 1..=5u32 {
            let prev = if i == 1 { 5 } else { i - 1 };
            let next = i % 5 + 1;
            g.add_edge(i + 5, prev).expect("in range");
            g.add_edge(i + 5, next).expect("in range");
            g.add_edge(i + 5, 11).expect("in range");
        }
        g
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: u32) -> usize {
        self.adj[u as usize].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        1..=self.n
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 1..=self.n {
            for v in u + 1..=self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
        g
    }

    /// BFS distances from `src`, indexed by vertex (index 0 unused).
    pub fn bfs(&self, src: u32) -> Vec<u32> {
        let mut dist = vec![INF; self.n as usize + 1];
        dist[src as usize] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w as usize] == INF {
                    dist[w as usize] = dist[u as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs shortest path lengths; `d[u][v]`, 1-based.
    pub fn distances(&self) -> Vec<Vec<u32>> {
        let mut d = vec![Vec::new()];
        d.extend((1..=self.n).map(|u| self.bfs(u)));
        d
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.bfs(1).iter().skip(1).all(|&d| d != INF)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n as usize + 1];
        for s in 1..=self.n {
            if side[s as usize] != u8::MAX {
                continue;
            }
            side[s as usize] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if side[w as usize] == u8::MAX {
                        side[w as usize] = 1 - side[u as usize];
                        queue.push_back(w);
                    } else if side[w as usize] == side[u as usize] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Graph on `order.len()` vertices where vertex `i+1` is `order[i]`.
    pub fn relabel(&self, order: &[u32]) -> Graph {
        let mut pos = vec![0u32; self.n as usize + 1];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i as u32 + 1;
        }
        Graph::from_edges(
            order.len() as u32,
            self.edges()
                .filter(|&(u, v)| pos[u as usize] != 0 && pos[v as usize] != 0)
                .map(|(u, v)| (pos[u as usize], pos[v as usize])),
        )
        .expect("relabelled vertices in range")
    }

    /// Parses the `p <n> <m>` / `e <u> <v>` format.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut g: Option<Graph> = None;
        let mut declared_m = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| GraphError::Parse { line, msg };
            let body = raw.trim();
            if body.is_empty() || body.starts_with('c') || body.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let num = |s: &str| s.parse::<u32>().map_err(|_| err(format!("bad number {s:?}")));
            match toks.as_slice() {
                ["p", n, m] | ["p", "edge", n, m] => {
                    if g.is_some() {
                        return Err(err("duplicate header".into()));
                    }
                    g = Some(Graph::new(num(n)?));
                    declared_m = num(m)? as usize;
                }
                ["e", u, v] => {
                    let graph = g.as_mut().ok_or_else(|| err("edge before header".into()))?;
                    graph.add_edge(num(u)?, num(v)?).map_err(|e| err(e.to_string()))?;
                }
                _ => return Err(err(format!("unrecognized line {body:?}"))),
            }
        }
        let g = g.ok_or(GraphError::Parse { line: 0, msg: "missing `p` header".into() })?;
        if g.m() != declared_m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {declared_m} edges, found {} distinct", g.m()),
            });
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p {} {}\n", self.n, self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "e {u} {v}");
        }
        s
    }
}
