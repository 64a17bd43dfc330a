//! Shared generators for the integration suites.
#![allow(dead_code)]

use homforge_core::graph::Graph;
use homforge_core::rings::{Field, FieldElem};
use proptest::prelude::*;
use rand::Rng;

/// The four small fields used throughout: F_2, F_3, F_4, F_5.
pub fn small_fields() -> Vec<Field> {
    ["2", "3", "2^2", "5"].iter().map(|s| Field::parse(s, None).unwrap()).collect()
}

pub fn random_elem(rng: &mut impl Rng, f: &Field) -> FieldElem {
    f.elem(rng.gen_range(0..f.q())).unwrap()
}

/// G(n, p) on `1..=n`.
pub fn random_graph(rng: &mut impl Rng, n: u32, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Graph from an upper-triangle bit list.
pub fn graph_from_bits(n: u32, bits: &[bool]) -> Graph {
    let mut g = Graph::new(n);
    let mut i = 0;
    for u in 1..=n {
        for v in u + 1..=n {
            if bits[i] {
                g.add_edge(u, v).unwrap();
            }
            i += 1;
        }
    }
    g
}

/// Graphs on `lo..=hi` vertices.
pub fn graphs(lo: u32, hi: u32) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        let pairs = (n * n.saturating_sub(1) / 2) as usize;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

/// Adjacency matrix indexed from 0.
pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n() as usize;
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u as usize - 1][v as usize - 1] = true;
        a[v as usize - 1][u as usize - 1] = true;
    }
    a
}
