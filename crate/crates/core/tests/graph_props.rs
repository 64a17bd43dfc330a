mod common;

use common::graphs;
use homforge_core::graph::{enumerate_homs, Graph, Homomorphism, Hypergraph3, INF};
use proptest::prelude::*;

const CAP: usize = 1 << 16;

proptest! {
    #[test]
    fn adding_edges_never_adds_homs(g in graphs(1, 6), h in graphs(1, 5), u in 1u32..=6, v in 1u32..=6) {
        let before = enumerate_homs(&g, &h, CAP).unwrap();
        let mut g2 = g.clone();
        let (u, v) = (u.min(g.n()), v.min(g.n()));
        prop_assume!(u != v);
        g2.add_edge(u, v).unwrap();
        let after = enumerate_homs(&g2, &h, CAP).unwrap();
        prop_assert!(after.len() <= before.len());
        prop_assert!(after.iter().all(|m| before.contains(m)));
    }

    #[test]
    fn every_hom_preserves_edges_and_distances(g in graphs(1, 6), h in graphs(1, 5)) {
        let homs = enumerate_homs(&g, &h, CAP).unwrap();
        let (dg, dh) = (g.distances(), h.distances());
        for m in &homs {
            prop_assert!(m.is_valid(&g, &h));
            for u in 1..=g.n() {
                for v in 1..=g.n() {
                    let d = dg[u as usize][v as usize];
                    if d != INF {
                        prop_assert!(dh[m.image(u) as usize][m.image(v) as usize] <= d);
                    }
                }
            }
        }
        // Exhaustive cross-check of the count.
        let mut count = 0;
        let n = g.n() as usize;
        let mut map = vec![1u32; n];
        'outer: loop {
            if (Homomorphism { map: map.clone() }).is_valid(&g, &h) {
                count += 1;
            }
            for slot in map.iter_mut() {
                if *slot < h.n() {
                    *slot += 1;
                    continue 'outer;
                }
                *slot = 1;
            }
            break;
        }
        prop_assert_eq!(homs.len(), count);
    }

    #[test]
    fn homs_compose(g in graphs(1, 5), h in graphs(1, 4), k in graphs(1, 4)) {
        let gh = enumerate_homs(&g, &h, CAP).unwrap();
        let hk = enumerate_homs(&h, &k, CAP).unwrap();
        for phi in gh.iter().take(20) {
            for psi in hk.iter().take(20) {
                prop_assert!(phi.then(psi).is_valid(&g, &k));
            }
        }
    }

    #[test]
    fn graph_text_round_trip(g in graphs(0, 9)) {
        prop_assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn hypergraph_text_round_trip(n in 1u32..=3, bits in proptest::collection::vec(any::<bool>(), 27)) {
        let mut h = Hypergraph3::new(n);
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    if bits[((a - 1) * 9 + (b - 1) * 3 + (c - 1)) as usize] {
                        h.add_edge(a, b, c).unwrap();
                    }
                }
            }
        }
        prop_assert_eq!(Hypergraph3::parse(&h.to_text()).unwrap(), h);
    }
}
