use std::collections::BTreeSet;
use std::fmt::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{are_incomparable, is_rigid, Graph, GraphError};

/// Largest vertex count enumerated exhaustively; beyond it graphs are sampled.
pub const EXHAUSTIVE_MAX_N: u32 = 8;
/// Random graphs drawn per vertex count above [`EXHAUSTIVE_MAX_N`].
const SAMPLES_PER_N: usize = 4000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GadgetNeed {
    Pair,
    Triple,
}

impl fmt::Display for GadgetNeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetNeed::Pair => "pair",
            GadgetNeed::Triple => "triple",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no {need} of rigid, connected, non-bipartite, pairwise incomparable graphs with at most {max_n} vertices ({rigid} rigid candidates seen)")]
    NotFound { need: GadgetNeed, max_n: u32, rigid: usize },
    #[error("vertex counts above 16 are not supported by the search")]
    TooLarge,
    #[error("gadget file: {0}")]
    Format(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A building block with its marked vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gadget {
    pub graph: Graph,
    pub v_l: u32,
    pub v_r: u32,
    pub v_p: u32,
}

impl Gadget {
    /// Marks the three lowest-numbered vertices.
    pub fn with_default_marks(graph: Graph) -> Gadget {
        Gadget { graph, v_l: 1, v_r: 2, v_p: 3 }
    }

    pub fn size(&self) -> u32 {
        self.graph.n()
    }
}

/// `I_0, I_1, I_2` (or just `I_1, I_2` for a pair) plus the path length
/// parameter `c_max`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GadgetTriple {
    pub blocks: Vec<Gadget>,
    pub c_max: u32,
}

impl GadgetTriple {
    pub fn new(blocks: Vec<Gadget>) -> GadgetTriple {
        let c_max = blocks.iter().map(Gadget::size).max().unwrap_or(0) + 1;
        GadgetTriple { blocks, c_max }
    }

    pub fn is_triple(&self) -> bool {
        self.blocks.len() == 3
    }

    pub fn i0(&self) -> Option<&Gadget> {
        self.is_triple().then(|| &self.blocks[0])
    }

    pub fn i1(&self) -> &Gadget {
        &self.blocks[self.blocks.len() - 2]
    }

    pub fn i2(&self) -> &Gadget {
        &self.blocks[self.blocks.len() - 1]
    }

    pub fn max_block(&self) -> u32 {
        self.blocks.iter().map(Gadget::size).max().unwrap_or(0)
    }

    /// Re-runs every predicate; returns the list of failures.
    pub fn certify(&self) -> Result<(), Vec<String>> {
        let mut bad = Vec::new();
        if !(2..=3).contains(&self.blocks.len()) {
            bad.push(format!("expected 2 or 3 blocks, found {}", self.blocks.len()));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            let g = &b.graph;
            if !g.is_connected() {
                bad.push(format!("block {i} is disconnected"));
            }
            if g.is_bipartite() {
                bad.push(format!("block {i} is bipartite"));
            }
            if !is_rigid(g) {
                bad.push(format!("block {i} is not rigid"));
            }
            let marks = [b.v_l, b.v_r, b.v_p];
            if marks.iter().any(|&v| v == 0 || v > g.n()) || b.v_l == b.v_r || b.v_l == b.v_p || b.v_r == b.v_p {
                bad.push(format!("block {i} has invalid marked vertices {marks:?}"));
            }
        }
        for i in 0..self.blocks.len() {
            for j in i + 1..self.blocks.len() {
                if !are_incomparable(&self.blocks[i].graph, &self.blocks[j].graph) {
                    bad.push(format!("blocks {i} and {j} are comparable"));
                }
            }
        }
        if self.c_max <= self.max_block() {
            bad.push(format!("c_max {} not above the largest block size {}", self.c_max, self.max_block()));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    /// `cmax <c>`, then per block `block vl <a> vr <b> vp <c>` followed by
    /// the block in graph format.
    pub fn to_text(&self) -> String {
        let mut s = format!("cmax {}\n", self.c_max);
        for b in &self.blocks {
            let _ = writeln!(s, "block vl {} vr {} vp {}", b.v_l, b.v_r, b.v_p);
            s.push_str(&b.graph.to_text());
        }
        s
    }

    pub fn parse(text: &str) -> Result<GadgetTriple, SearchError> {
        let mut c_max = None;
        let mut heads: Vec<[u32; 3]> = Vec::new();
        let mut bodies: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            let num = |s: &str| s.parse::<u32>().map_err(|_| SearchError::Format(format!("line {line}: bad number {s:?}")));
            match toks.as_slice() {
                [] => {}
                [first, ..] if first.starts_with('#') => {}
                ["cmax", c] => c_max = Some(num(c)?),
                ["block", "vl", a, "vr", b, "vp", c] => {
                    heads.push([num(a)?, num(b)?, num(c)?]);
                    bodies.push(String::new());
                }
                _ => {
                    let body = bodies
                        .last_mut()
                        .ok_or_else(|| SearchError::Format(format!("line {line}: graph data before any block")))?;
                    body.push_str(raw);
                    body.push('\n');
                }
            }
        }
        let c_max = c_max.ok_or_else(|| SearchError::Format("missing cmax".into()))?;
        let blocks = heads
            .into_iter()
            .zip(bodies)
            .map(|([v_l, v_r, v_p], body)| Ok(Gadget { graph: Graph::parse(&body)?, v_l, v_r, v_p }))
            .collect::<Result<Vec<_>, SearchError>>()?;
        Ok(GadgetTriple { blocks, c_max })
    }
}

/// Canonical code of a graph with at most 16 vertices: the lexicographically
/// smallest upper-triangle adjacency bitmask over all orderings compatible
/// with colour refinement.
pub fn canonical_code(g: &Graph) -> u128 {
    assert!(g.n() <= 16, "canonical codes cover at most 16 vertices");
    let n = g.n() as usize;
    let adj: Vec<u32> = (0..=n)
        .map(|u| if u == 0 { 0 } else { g.neighbors(u as u32).iter().fold(0u32, |m, &w| m | 1 << (w - 1)) })
        .collect();
    let colors = refine(&adj[1..], vec![0; n]);
    let mut best = u128::MAX;
    canon_search(&adj[1..], colors, &mut best);
    best
}

fn pair_bit(i: usize, j: usize) -> u32 {
    // Position of the pair (i, j), i < j, in row-major upper-triangle order.
    (j * (j - 1) / 2 + i) as u32
}

/// Ordered partition refinement; colours are class ranks.
fn refine(adj: &[u32], mut colors: Vec<u32>) -> Vec<u32> {
    let n = adj.len();
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut s: Vec<u32> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| colors[w]).collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        let next: Vec<u32> = sigs.iter().map(|s| uniq.binary_search(s).expect("present") as u32).collect();
        let before = colors.iter().collect::<BTreeSet<_>>().len();
        colors = next;
        if uniq.len() == before {
            return colors;
        }
    }
}

fn canon_search(adj: &[u32], colors: Vec<u32>, best: &mut u128) {
    let n = adj.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let target = (0..n).filter(|&c| counts[c] > 1).min_by_key(|&c| (counts[c], c));
    let Some(cell) = target else {
        let mut code = 0u128;
        for u in 0..n {
            for w in u + 1..n {
                if adj[u] >> w & 1 == 1 {
                    let (a, b) = (colors[u] as usize, colors[w] as usize);
                    code |= 1 << pair_bit(a.min(b), a.max(b));
                }
            }
        }
        *best = (*best).min(code);
        return;
    };
    for v in (0..n).filter(|&v| colors[v] as usize == cell) {
        let split: Vec<u32> = (0..n)
            .map(|w| 2 * colors[w] + u32::from(w != v && colors[w] as usize == cell))
            .collect();
        canon_search(adj, refine(adj, split), best);
    }
}

fn decode(n: u32, code: u128) -> Graph {
    let mut g = Graph::new(n);
    for j in 1..n as usize {
        for i in 0..j {
            if code >> pair_bit(i, j) & 1 == 1 {
                g.add_edge(i as u32 + 1, j as u32 + 1).expect("in range");
            }
        }
    }
    g
}

fn is_candidate(g: &Graph) -> bool {
    g.n() >= 3 && g.vertices().all(|v| g.degree(v) >= 2) && g.is_connected() && !g.is_bipartite() && is_rigid(g)
}

/// Finds `need` connected, non-bipartite, rigid, pairwise incomparable
/// graphs with at most `max_n` vertices. Vertex counts up to 8 are
/// enumerated up to isomorphism; larger counts are sampled from `seed`.
pub fn search_gadgets(max_n: u32, need: GadgetNeed, seed: u64) -> Result<GadgetTriple, SearchError> {
    if max_n > 16 {
        return Err(SearchError::TooLarge);
    }
    let mut rigid: Vec<Graph> = Vec::new();
    let mut level: BTreeSet<u128> = BTreeSet::from([0]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 2..=max_n {
        let mut fresh: Vec<Graph> = Vec::new();
        if n <= EXHAUSTIVE_MAX_N {
            let mut next = BTreeSet::new();
            for &code in &level {
                let base = decode(n - 1, code);
                for mask in 0u32..1 << (n - 1) {
                    let mut g = base.clone();
                    g.add_vertex();
                    for w in 0..n - 1 {
                        if mask >> w & 1 == 1 {
                            g.add_edge(w + 1, n).expect("in range");
                        }
                    }
                    next.insert(canonical_code(&g));
                }
            }
            level = next;
            fresh.extend(level.iter().map(|&c| decode(n, c)).filter(is_candidate));
        } else {
            let mut seen = BTreeSet::new();
            for _ in 0..SAMPLES_PER_N {
                let mut g = Graph::new(n);
                for u in 1..=n {
                    for v in u + 1..=n {
                        if rng.gen_bool(0.5) {
                            g.add_edge(u, v).expect("in range");
                        }
                    }
                }
                let code = canonical_code(&g);
                if seen.insert(code) {
                    let canon = decode(n, code);
                    if is_candidate(&canon) {
                        fresh.push(canon);
                    }
                }
            }
            fresh.sort_by_key(canonical_code);
        }
        rigid.extend(fresh);
        if let Some(found) = pick(&rigid, need) {
            let triple = GadgetTriple::new(found.into_iter().map(|i| Gadget::with_default_marks(rigid[i].clone())).collect());
            debug_assert!(triple.certify().is_ok());
            return Ok(triple);
        }
    }
    Err(SearchError::NotFound { need, max_n, rigid: rigid.len() })
}

/// Lexicographically first index tuple of pairwise incomparable graphs.
fn pick(graphs: &[Graph], need: GadgetNeed) -> Option<Vec<usize>> {
    let k = graphs.len();
    let inc = |i: usize, j: usize| are_incomparable(&graphs[i], &graphs[j]);
    for i in 0..k {
        for j in i + 1..k {
            if !inc(i, j) {
                continue;
            }
            if need == GadgetNeed::Pair {
                return Some(vec![i, j]);
            }
            for l in j + 1..k {
                if inc(i, l) && inc(j, l) {
                    return Some(vec![i, j, l]);
                }
            }
        }
    }
    None
}
