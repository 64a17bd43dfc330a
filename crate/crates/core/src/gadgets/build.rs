use super::{Assembler, GadgetError, GadgetGraph, PathConvention, Side, Weight};
use crate::graph::{Gadget, GadgetTriple};

/// Template used at tree depth `d`: `I_0` at the root, then `I_1` and `I_2`
/// alternately.
pub(crate) fn level_template(d: usize) -> usize {
    match d {
        0 => 0,
        d if d % 2 == 1 => 1,
        _ => 2,
    }
}

/// The tree gadget `G_m`: a perfect binary tree with `m` leaves whose nodes
/// are copies of `I_0` (root) and `I_1`/`I_2` (alternating by level). A left
/// (right) child is joined from the parent's `v_l` (`v_r`) to its own `v_p`
/// by a path with `c_max` interior vertices.
pub fn build_gm(m: u32, triple: &GadgetTriple) -> Result<GadgetGraph, GadgetError> {
    if m == 0 || !m.is_power_of_two() {
        return Err(GadgetError::NotPowerOfTwo(m));
    }
    if !triple.is_triple() {
        return Err(GadgetError::Precondition(format!("G_m needs three blocks, got {}", triple.blocks.len())));
    }
    let mut asm = Assembler::new();
    // Heap numbering: node 1 is the root, node i has children 2i and 2i+1.
    let nodes = 2 * m - 1;
    let mut block_of = vec![usize::MAX; nodes as usize + 1];
    for i in 1..=nodes {
        let depth = (31 - i.leading_zeros()) as usize;
        let role: String = if i == 1 {
            "root".into()
        } else {
            (0..depth).rev().map(|b| if i >> b & 1 == 0 { 'L' } else { 'R' }).collect()
        };
        let t = level_template(depth);
        block_of[i as usize] = asm.block(&triple.blocks[t], t, role);
    }
    for i in 2..=nodes {
        let (parent, child) = (block_of[i as usize / 2], block_of[i as usize]);
        let (pt, ct) = (&asm.blocks()[parent], &asm.blocks()[child]);
        let (pg, cg) = (&triple.blocks[pt.template], &triple.blocks[ct.template]);
        let side = if i % 2 == 0 { Side::Left } else { Side::Right };
        let anchor = pt.image(if side == Side::Left { pg.v_l } else { pg.v_r });
        let end = ct.image(cg.v_p);
        let seq = asm.path(anchor, end, triple.c_max + 1, Weight::one());
        asm.connect(seq, Some(parent), Some(child), side);
    }
    Ok(asm.finish(triple.c_max, PathConvention::InteriorVertices))
}

/// The path gadget `G_k`: `I_1` and `I_2` joined between `u = v_l(I_1)` and
/// `v = v_l(I_2)` by a path of `(k-1) + 2 c_max` edges whose vertices at
/// distance `c_max` and `c_max + k - 1` from `u` are marked `a` and `b`.
pub fn build_gk(k: u32, i1: &Gadget, i2: &Gadget, c_max: u32) -> Result<GadgetGraph, GadgetError> {
    if k == 0 || c_max == 0 {
        return Err(GadgetError::Precondition(format!("G_k needs k >= 1 and c_max >= 1, got k = {k}, c_max = {c_max}")));
    }
    let mut asm = Assembler::new();
    let b1 = asm.block(i1, 1, "I1");
    let b2 = asm.block(i2, 2, "I2");
    let u = asm.blocks()[b1].image(i1.v_l);
    let v = asm.blocks()[b2].image(i2.v_l);
    let seq = asm.path(u, v, k - 1 + 2 * c_max, Weight::one());
    asm.mark("u", u);
    asm.mark("v", v);
    asm.mark("a", seq[c_max as usize]);
    asm.mark("b", seq[(c_max + k - 1) as usize]);
    asm.connect(seq, Some(b1), Some(b2), Side::Chain);
    Ok(asm.finish(c_max, PathConvention::Edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{gadget_decomp, validate_nice};

    fn triple() -> GadgetTriple {
        GadgetTriple::parse(include_str!("../../fixtures/triple.gad")).unwrap()
    }

    #[test]
    fn gm_shape() {
        let t = triple();
        for m in [1, 2, 4, 8] {
            let g = build_gm(m, &t).unwrap();
            let blocks = 2 * m - 1;
            assert_eq!(g.blocks.len() as u32, blocks);
            assert_eq!(g.paths.len() as u32, blocks - 1);
            assert_eq!(g.graph.n(), 8 * blocks + (blocks - 1) * t.c_max);
            let templates: Vec<usize> = g.blocks.iter().map(|b| b.template).collect();
            match m {
                2 => assert_eq!(templates, vec![0, 1, 1]),
                4 => assert_eq!(&templates[3..], &[2, 2, 2, 2]),
                _ => {}
            }
            let d = gadget_decomp(&g.graph, &g.layout()).unwrap();
            assert!(validate_nice(&d, &g.graph).is_empty());
            assert!(d.width() <= 7);
            // Anchors sit c_max + 1 apart along every connecting path.
            for p in &g.paths {
                let (a, b) = (p.vertices[0], *p.vertices.last().unwrap());
                assert_eq!(p.vertices.len() as u32, t.c_max + 2);
                assert_eq!(g.graph.bfs(a)[b as usize], t.c_max + 1);
            }
        }
        assert!(matches!(build_gm(6, &t), Err(GadgetError::NotPowerOfTwo(6))));
    }

    #[test]
    fn gk_shape() {
        let t = triple();
        let (i1, i2) = (t.i1(), t.i2());
        let g1 = build_gk(1, i1, i2, 8).unwrap();
        assert_eq!(g1.mark("a"), g1.mark("b"));
        assert_eq!(g1.paths[0].vertices.len(), 17);
        let g3 = build_gk(3, i1, i2, 8).unwrap();
        let (u, a, b) = (g3.mark("u").unwrap(), g3.mark("a").unwrap(), g3.mark("b").unwrap());
        let du = g3.graph.bfs(u);
        assert_eq!((du[a as usize], du[b as usize]), (8, 10));
        assert_eq!(g3.graph.bfs(a)[b as usize], 2);
        let d = gadget_decomp(&g3.graph, &g3.layout()).unwrap();
        assert!(validate_nice(&d, &g3.graph).is_empty());
        assert_eq!(d.join_count(), 0);
    }

    #[test]
    fn block_copies_match_templates() {
        let t = triple();
        let g = build_gm(4, &t).unwrap();
        for b in &g.blocks {
            let tmpl = &t.blocks[b.template].graph;
            for (u, v) in tmpl.edges() {
                assert!(g.graph.has_edge(b.image(u), b.image(v)));
            }
            let inside = g.graph.edges().filter(|(u, v)| b.vertices.contains(u) && b.vertices.contains(v)).count();
            assert_eq!(inside, tmpl.m());
        }
    }
}
