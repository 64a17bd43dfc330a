//! Exhaustive counters used as ground truth for the coefficient identities.
//! Nothing here shares code with the family evaluators.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::families::Cnf;
use crate::graph::{Graph, Hypergraph3};
use crate::rings::{Field, FieldElem, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what}: size {size} exceeds the oracle budget {max}")]
pub struct OracleError {
    pub what: &'static str,
    pub size: u32,
    pub max: u32,
}

/// An exact count together with its residue in the prime subfield.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CountResult {
    pub exact: BigUint,
    pub modp: FieldElem,
}

impl CountResult {
    pub fn new(exact: impl Into<BigUint>, field: &Field) -> CountResult {
        let exact = exact.into();
        let r = &exact % BigUint::from(field.p());
        let r = u32::try_from(&r).expect("residue below p");
        CountResult { exact, modp: field.from_int(r as i64) }
    }
}

impl fmt::Display for CountResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exact={} modp={:?}", self.exact, self.modp)
    }
}

pub const SAT_MAX_VARS: u32 = 24;
pub const SUBSET_MAX_VERTICES: u32 = 16;
pub const WALK_MAX_LEN: u32 = 8;
pub const TDM_MAX_PART: u32 = 3;

fn budget(what: &'static str, size: u32, max: u32) -> Result<(), OracleError> {
    if size > max {
        Err(OracleError { what, size, max })
    } else {
        Ok(())
    }
}

/// Satisfying assignments of a 3-CNF formula.
pub fn count_sat3(phi: &Cnf, field: &Field) -> Result<CountResult, OracleError> {
    budget("sat", phi.n, SAT_MAX_VARS)?;
    let n = phi.n as usize;
    let mut bits = vec![false; n];
    let mut count = 0u64;
    for a in 0u64..1 << n {
        for (i, b) in bits.iter_mut().enumerate() {
            *b = a >> i & 1 == 1;
        }
        count += phi.clauses.iter().all(|c| c.satisfied_by(&bits)) as u64;
    }
    Ok(CountResult::new(count, field))
}

fn adjacency_masks(a: &Graph) -> Vec<u32> {
    (1..=a.n()).map(|u| a.neighbors(u).iter().fold(0u32, |m, &w| m | 1 << (w - 1))).collect()
}

/// Subsets of size `k` of the vertex set satisfying `ok`.
fn count_subsets(a: &Graph, k: u32, what: &'static str, ok: impl Fn(u32, &[u32]) -> bool) -> Result<u64, OracleError> {
    budget(what, a.n(), SUBSET_MAX_VERTICES)?;
    let adj = adjacency_masks(a);
    Ok((0u32..1 << a.n()).filter(|s| s.count_ones() == k && ok(*s, &adj)).count() as u64)
}

/// Vertex covers of size exactly `k`.
pub fn count_vc(a: &Graph, k: u32, field: &Field) -> Result<CountResult, OracleError> {
    let edges: Vec<(u32, u32)> = a.edges().collect();
    let c = count_subsets(a, k, "vc", |s, _| edges.iter().all(|&(u, v)| (s >> (u - 1) | s >> (v - 1)) & 1 == 1))?;
    Ok(CountResult::new(c, field))
}

/// Cliques with exactly `k` vertices.
pub fn count_clique(a: &Graph, k: u32, field: &Field) -> Result<CountResult, OracleError> {
    let c = count_subsets(a, k, "clique", |s, adj| {
        (0..a.n()).filter(|v| s >> v & 1 == 1).all(|v| s & !(1 << v) & !adj[v as usize] == 0)
    })?;
    Ok(CountResult::new(c, field))
}

/// Independent sets with exactly `k` vertices.
pub fn count_independent_sets(a: &Graph, k: u32, field: &Field) -> Result<CountResult, OracleError> {
    let c = count_subsets(a, k, "independent set", |s, adj| (0..a.n()).filter(|v| s >> v & 1 == 1).all(|v| s & adj[v as usize] == 0))?;
    Ok(CountResult::new(c, field))
}

/// Hamiltonian cycles as undirected vertex cycles, i.e. up to rotation and
/// reflection. Graphs with fewer than three vertices have none.
pub fn count_hc(a: &Graph, field: &Field) -> Result<CountResult, OracleError> {
    let n = a.n();
    budget("hc", n, WALK_MAX_LEN)?;
    if n < 3 {
        return Ok(CountResult::new(0u32, field));
    }
    // Directed Hamiltonian cycles through vertex 1, each seen twice.
    fn extend(a: &Graph, path: &mut Vec<u32>, used: &mut [bool], n: u32) -> u64 {
        let last = *path.last().expect("nonempty");
        if path.len() == n as usize {
            return a.has_edge(last, 1) as u64;
        }
        let mut total = 0;
        for &w in a.neighbors(last) {
            if !used[w as usize] {
                used[w as usize] = true;
                path.push(w);
                total += extend(a, path, used, n);
                path.pop();
                used[w as usize] = false;
            }
        }
        total
    }
    let mut used = vec![false; n as usize + 1];
    used[1] = true;
    let directed = extend(a, &mut vec![1], &mut used, n);
    Ok(CountResult::new(directed / 2, field))
}

/// Perfect 3D matchings: sets of `n` pairwise disjoint hyperedges.
pub fn count_3dm(h: &Hypergraph3, field: &Field) -> Result<CountResult, OracleError> {
    let n = h.n();
    budget("3dm", n, TDM_MAX_PART)?;
    fn pick(h: &Hypergraph3, a: u32, used_b: u32, used_c: u32) -> u64 {
        if a > h.n() {
            return 1;
        }
        let mut total = 0;
        for b in 1..=h.n() {
            for c in 1..=h.n() {
                if used_b >> b & 1 == 0 && used_c >> c & 1 == 0 && h.contains((a, b, c)) {
                    total += pick(h, a + 1, used_b | 1 << b, used_c | 1 << c);
                }
            }
        }
        total
    }
    Ok(CountResult::new(pick(h, 1, 0, 0), field))
}

/// Clows of length `len` in `a`: closed walks whose minimum vertex (the
/// head) appears exactly once.
pub fn count_clows(a: &Graph, len: u32, field: &Field) -> Result<CountResult, OracleError> {
    budget("clow", len, WALK_MAX_LEN)?;
    budget("clow vertices", a.n(), SUBSET_MAX_VERTICES)?;
    fn walk(a: &Graph, head: u32, at: u32, left: u32) -> u64 {
        if left == 0 {
            return a.has_edge(at, head) as u64;
        }
        a.neighbors(at).iter().filter(|&&w| w > head).map(|&w| walk(a, head, w, left - 1)).sum()
    }
    let count: u64 = if len < 2 { 0 } else { a.vertices().map(|h| walk(a, h, h, len - 1)).sum() };
    Ok(CountResult::new(count, field))
}
