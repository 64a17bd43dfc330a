mod common;

use common::graphs;
use homforge_core::decomp::{
    cycle_decomp, gadget_decomp, greedy_decomposition, make_nice, treewidth_exact, validate_nice, NiceTreeDecomp,
};
use homforge_core::gadgets::{build_gk, PAIR_FIXTURE};
use homforge_core::graph::{GadgetTriple, Graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn make_nice_keeps_width(g in graphs(1, 9)) {
        let td = greedy_decomposition(&g);
        prop_assert!(td.validate(&g).is_empty());
        let nice = make_nice(&td, &g).unwrap();
        prop_assert!(validate_nice(&nice, &g).is_empty());
        prop_assert_eq!(nice.width(), td.width());
        prop_assert_eq!(NiceTreeDecomp::parse(&nice.to_text()).unwrap(), nice);
    }

    #[test]
    fn exact_width_is_a_lower_bound(g in graphs(1, 9)) {
        let (tw, d) = treewidth_exact(&g).unwrap();
        prop_assert!(validate_nice(&d, &g).is_empty());
        prop_assert_eq!(d.width(), tw);
        prop_assert!(tw <= greedy_decomposition(&g).width());
    }
}

#[test]
fn cycles_and_path_gadgets_need_no_joins() {
    for n in 3..=12 {
        let d = cycle_decomp(n).unwrap();
        assert!(validate_nice(&d, &Graph::cycle(n)).is_empty());
        assert_eq!(d.join_count(), 0);
        assert_eq!(d.width(), 2);
    }
    let pair = GadgetTriple::parse(PAIR_FIXTURE).unwrap();
    for k in [1, 2, 5] {
        let gk = build_gk(k, pair.i1(), pair.i2(), pair.max_block()).unwrap();
        let d = gadget_decomp(&gk.graph, &gk.layout()).unwrap();
        assert!(validate_nice(&d, &gk.graph).is_empty());
        assert_eq!(d.join_count(), 0);
    }
}
