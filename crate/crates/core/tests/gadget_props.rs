use homforge_core::gadgets::{
    build_gk, build_gm, embed_bp, verify_cycle_identity, verify_gadget_bijection, EmbedMode, LayeredBP, Recovery,
    HOM_CAP, PAIR_FIXTURE, TRIPLE_FIXTURE,
};
use homforge_core::graph::{count_homs_upto, GadgetTriple, Graph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Source-to-sink path count by a forward sweep over the arcs.
fn path_count(bp: &LayeredBP) -> usize {
    let mut cur = vec![0usize; bp.layers()[0].len() + 1];
    cur[1] = 1;
    for layer in 1..bp.num_layers() {
        let mut next = vec![0usize; bp.layers()[layer].len() + 1];
        for a in bp.arcs().iter().filter(|a| a.layer == layer) {
            next[a.to as usize] += cur[a.from as usize];
        }
        cur = next;
    }
    cur[1]
}

fn random_bp(seed: u64, layers: usize, width: usize) -> LayeredBP {
    LayeredBP::random(&mut ChaCha8Rng::seed_from_u64(seed), layers, width)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cycle_identity_on_random_programs(seed in any::<u64>(), layers in prop::sample::select(vec![3usize, 5, 7]), width in 1usize..=3) {
        let bp = random_bp(seed, layers, width);
        let r = verify_cycle_identity(&bp, 5, HOM_CAP).unwrap();
        prop_assert!(r.identity);
        prop_assert!(r.passed(), "{:?}", r.recovery);
        prop_assert_eq!(r.paths, path_count(&bp));
        // Each path closes into l rotations in two directions.
        let emb = embed_bp(&bp, EmbedMode::Cycle, None).unwrap();
        let homs = count_homs_upto(&Graph::cycle(layers as u32), &emb.b.graph, HOM_CAP);
        prop_assert_eq!(homs, 2 * layers * r.paths);
        prop_assert_eq!(r.homs, homs);
        let padded = matches!(r.recovery, Recovery::Checked { padded: true, .. });
        prop_assert_eq!(padded, layers == 5);
    }

    #[test]
    fn padding_keeps_the_path_polynomial(seed in any::<u64>(), layers in 2usize..=6, width in 1usize..=3) {
        let bp = random_bp(seed, layers, width);
        prop_assert_eq!(bp.padded().path_polynomial(), bp.path_polynomial());
        prop_assert_eq!(bp.padded().num_layers(), layers + 2);
        prop_assert_eq!(LayeredBP::parse(&bp.to_text()).unwrap(), bp);
    }

    #[test]
    fn path_gadget_distances(k in 1u32..=6) {
        let t = GadgetTriple::parse(TRIPLE_FIXTURE).unwrap();
        let c = t.max_block();
        let g = build_gk(k, t.i1(), t.i2(), c).unwrap();
        let mark = |s| g.mark(s).unwrap() as usize;
        let du = g.graph.bfs(mark("u") as u32);
        prop_assert_eq!(du[mark("a")], c);
        prop_assert_eq!(du[mark("b")], c + k - 1);
        prop_assert_eq!(du[mark("v")], k - 1 + 2 * c);
        prop_assert!(g.graph.is_connected());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn gadget_bijection_on_random_programs(seed in any::<u64>(), layers in 3usize..=4, width in 1usize..=2) {
        let pair = GadgetTriple::parse(PAIR_FIXTURE).unwrap();
        let bp = random_bp(seed, layers, width);
        let r = verify_gadget_bijection(&bp, pair.i1(), pair.i2(), HOM_CAP).unwrap();
        prop_assert!(r.passed(), "{r:?}");
        prop_assert_eq!(r.homs, path_count(&bp));
    }
}

#[test]
fn odd_cycle_self_maps() {
    for l in (3..=11).step_by(2) {
        assert_eq!(count_homs_upto(&Graph::cycle(l), &Graph::cycle(l), HOM_CAP), 2 * l as usize);
    }
}

#[test]
fn tree_gadget_anchor_distances() {
    let t = GadgetTriple::parse(TRIPLE_FIXTURE).unwrap();
    for m in [2, 4] {
        let g = build_gm(m, &t).unwrap();
        let dist = g.graph.distances();
        for p in &g.paths {
            let (a, b) = (p.vertices[0], *p.vertices.last().unwrap());
            assert_eq!(dist[a as usize][b as usize], t.c_max + 1);
        }
        assert!(g.graph.is_connected());
    }
}
