use std::collections::{BTreeMap, VecDeque};

use super::build::level_template;
use super::{build_gm, Assembler, GadgetError, GadgetGraph, PathConvention, Side, Term, Weight};
use crate::circuit::{Circuit, Gate, VarLabel};
use crate::graph::{for_each_hom, GadgetTriple};

/// Deliberate construction faults, for negative controls.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JnFault {
    /// Level-1 nodes get the level-2 block.
    WrongLevel,
}

/// Checks the normal form used by [`build_jn`] and returns the number of
/// multiplication levels:
///
/// * the output is a multiplication gate;
/// * every multiplication gate has two children, both additions;
/// * every addition gate has only multiplication children or only inputs;
/// * no constants; the circuit is multiplicatively disjoint;
/// * every gate sits at one level and all inputs at the deepest one.
pub fn normal_form_depth(c: &Circuit) -> Result<usize, Vec<String>> {
    let gates = c.gates();
    let mut bad = Vec::new();
    if !matches!(gates[c.output()], Gate::Mul(_)) {
        bad.push(format!("output gate {} is not a multiplication", c.output()));
        return Err(bad);
    }
    let live = c.reachable();
    for (id, g) in gates.iter().enumerate().filter(|(id, _)| live[*id]) {
        match g {
            Gate::Const(_) => bad.push(format!("gate {id} is a constant")),
            Gate::Input(_) => {}
            Gate::Mul(cs) => {
                if cs.len() != 2 {
                    bad.push(format!("multiplication gate {id} has fan-in {}", cs.len()));
                }
                if let Some(ch) = cs.iter().find(|&&ch| !matches!(gates[ch], Gate::Add(_))) {
                    bad.push(format!("multiplication gate {id} has non-addition child {ch}"));
                }
            }
            Gate::Add(cs) => {
                let muls = cs.iter().filter(|&&ch| matches!(gates[ch], Gate::Mul(_))).count();
                let ins = cs.iter().filter(|&&ch| matches!(gates[ch], Gate::Input(_))).count();
                if muls != cs.len() && ins != cs.len() {
                    bad.push(format!("addition gate {id} mixes child kinds"));
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    if !c.check_mult_disjoint() {
        bad.push("circuit is not multiplicatively disjoint".into());
    }
    let mut level: BTreeMap<usize, usize> = BTreeMap::from([(c.output(), 0)]);
    let mut queue = VecDeque::from([c.output()]);
    while let Some(g) = queue.pop_front() {
        let d = level[&g];
        if let Gate::Mul(cs) = &gates[g] {
            for &a in cs {
                for &x in gates[a].children() {
                    match level.get(&x) {
                        Some(&e) if e != d + 1 => bad.push(format!("gate {x} reached at levels {e} and {}", d + 1)),
                        Some(_) => {}
                        None => {
                            level.insert(x, d + 1);
                            queue.push_back(x);
                        }
                    }
                }
            }
        }
    }
    let input_levels: Vec<usize> =
        level.iter().filter(|(g, _)| matches!(gates[**g], Gate::Input(_))).map(|(_, &d)| d).collect();
    let depth = input_levels.iter().copied().max().unwrap_or(0);
    if input_levels.iter().any(|&d| d != depth) {
        bad.push("inputs sit at different depths".into());
    }
    if bad.is_empty() {
        Ok(depth)
    } else {
        Err(bad)
    }
}

/// The graph `J_n`: multiplication and input gates are doubled into left
/// and right copies, the left copy of the output is the root, and every
/// copy reachable from it becomes a block (`I_0` at the root, then `I_1`
/// and `I_2` by level). A child copy hangs from the parent's `v_l` or `v_r`
/// (by its side) at its own `v_p` through `c_max` interior vertices; path
/// edges touching an input block carry the input's label.
pub fn build_jn(c: &Circuit, triple: &GadgetTriple, fault: Option<JnFault>) -> Result<GadgetGraph, GadgetError> {
    normal_form_depth(c).map_err(GadgetError::NormalForm)?;
    if !triple.is_triple() {
        return Err(GadgetError::Precondition(format!("J_n needs three blocks, got {}", triple.blocks.len())));
    }
    let gates = c.gates();
    let mut asm = Assembler::new();
    let mut copies: BTreeMap<(usize, Side), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut add_copy = |asm: &mut Assembler, queue: &mut VecDeque<(usize, Side, usize, usize)>, g: usize, side: Side, depth: usize| {
        *copies.entry((g, side)).or_insert_with(|| {
            let mut t = level_template(depth);
            if fault == Some(JnFault::WrongLevel) && depth == 1 {
                t = 2;
            }
            let tag = if side == Side::Left { 'L' } else { 'R' };
            let b = asm.block(&triple.blocks[t], t, format!("g{g}{tag}"));
            queue.push_back((g, side, depth, b));
            b
        })
    };
    add_copy(&mut asm, &mut queue, c.output(), Side::Left, 0);
    while let Some((g, _, depth, parent)) = queue.pop_front() {
        let Gate::Mul(cs) = &gates[g] else { continue };
        for (a, child_side) in [(cs[0], Side::Left), (cs[1], Side::Right)] {
            for &x in gates[a].children() {
                let child = add_copy(&mut asm, &mut queue, x, child_side, depth + 1);
                let (pt, ct) = (&asm.blocks()[parent], &asm.blocks()[child]);
                let (pg, cg) = (&triple.blocks[pt.template], &triple.blocks[ct.template]);
                let anchor = pt.image(if child_side == Side::Left { pg.v_l } else { pg.v_r });
                let end = ct.image(cg.v_p);
                let last = match &gates[x] {
                    Gate::Input(l) => Weight::Var(l.clone()),
                    _ => Weight::one(),
                };
                let seq = asm.path(anchor, end, triple.c_max + 1, last);
                asm.connect(seq, Some(parent), Some(child), child_side);
            }
        }
    }
    Ok(asm.finish(triple.c_max, PathConvention::InteriorVertices))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseHomReport {
    pub depth: usize,
    pub m: u32,
    pub parse_terms: Vec<Term>,
    pub hom_terms: Vec<Term>,
}

impl ParseHomReport {
    pub fn equal(&self) -> bool {
        self.parse_terms == self.hom_terms
    }
}

/// Compares the monomial multiset of the parse trees of `c` with that of
/// `Hom(G_m, J_n)`, where `m = 2^depth`.
pub fn verify_parse_hom_bijection(
    c: &Circuit,
    triple: &GadgetTriple,
    fault: Option<JnFault>,
    cap: usize,
) -> Result<ParseHomReport, GadgetError> {
    triple.certify().map_err(GadgetError::Certification)?;
    let depth = normal_form_depth(c).map_err(GadgetError::NormalForm)?;
    let m = 1u32 << depth;
    let mut parse_terms: Vec<Term> = c
        .enumerate_parse_trees(cap)
        .map_err(|_| GadgetError::Budget { cap })?
        .into_iter()
        .map(|t| (t.coeff, t.monomial))
        .collect();
    parse_terms.sort();
    let gm = build_gm(m, triple)?;
    let jn = build_jn(c, triple, fault)?;
    let mut hom_terms = Vec::new();
    let mut over = false;
    for_each_hom(&gm.graph, &jn.graph, |map| {
        if hom_terms.len() == cap {
            over = true;
            return false;
        }
        hom_terms.push(jn.hom_term(&gm.graph, map));
        true
    });
    if over {
        return Err(GadgetError::Budget { cap });
    }
    hom_terms.sort();
    Ok(ParseHomReport { depth, m, parse_terms, hom_terms })
}

/// Small normal-form circuits used as fixtures, with names.
pub fn fixture_circuits() -> Vec<(&'static str, Circuit)> {
    struct B(Vec<Gate>);
    impl B {
        fn input(&mut self, name: &str) -> usize {
            self.0.push(Gate::Input(VarLabel::free(name)));
            self.0.len() - 1
        }
        fn add(&mut self, cs: &[usize]) -> usize {
            self.0.push(Gate::Add(cs.to_vec()));
            self.0.len() - 1
        }
        fn mul(&mut self, a: usize, b: usize) -> usize {
            self.0.push(Gate::Mul(vec![a, b]));
            self.0.len() - 1
        }
        /// `(l_1 + ... ) * (r_1 + ...)` over fresh input gates.
        fn product(&mut self, left: &[&str], right: &[&str]) -> usize {
            let l: Vec<usize> = left.iter().map(|n| self.input(n)).collect();
            let r: Vec<usize> = right.iter().map(|n| self.input(n)).collect();
            let (a, b) = (self.add(&l), self.add(&r));
            self.mul(a, b)
        }
        fn done(self, out: usize) -> Circuit {
            Circuit::new(self.0, out).expect("fixture is well formed")
        }
    }
    let mut out = Vec::new();

    let mut b = B(Vec::new());
    let g = b.product(&["a", "b"], &["c", "d"]);
    out.push(("sum-times-sum", b.done(g)));

    // Two distinct input gates share the label x.
    let mut b = B(Vec::new());
    let g = b.product(&["x", "w"], &["x", "v"]);
    out.push(("repeated-label", b.done(g)));

    // (g1 + g2) * g3 where g1 and g2 share input gates.
    let mut b = B(Vec::new());
    let (x1, x2, x3, x4, x5) = (b.input("x1"), b.input("x2"), b.input("x3"), b.input("x4"), b.input("x5"));
    let (a1, b1) = (b.add(&[x1, x2]), b.add(&[x3, x4]));
    let g1 = b.mul(a1, b1);
    let (a2, b2) = (b.add(&[x1, x5]), b.add(&[x4]));
    let g2 = b.mul(a2, b2);
    let g3 = b.product(&["x6"], &["x7", "x8"]);
    let (l, r) = (b.add(&[g1, g2]), b.add(&[g3]));
    let root = b.mul(l, r);
    out.push(("shared-inputs", b.done(root)));

    // g1 * (g2 + g3) with a label repeated across sides.
    let mut b = B(Vec::new());
    let g1 = b.product(&["a", "b"], &["c"]);
    let g2 = b.product(&["d"], &["e", "a"]);
    let g3 = b.product(&["f", "b"], &["h"]);
    let (l, r) = (b.add(&[g1]), b.add(&[g2, g3]));
    let root = b.mul(l, r);
    out.push(("unary-left", b.done(root)));

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn triple() -> GadgetTriple {
        GadgetTriple::parse(include_str!("../../fixtures/triple.gad")).unwrap()
    }

    #[test]
    fn fixtures_are_in_normal_form() {
        let depths: Vec<usize> = fixture_circuits().iter().map(|(_, c)| normal_form_depth(c).unwrap()).collect();
        assert_eq!(depths, vec![1, 1, 2, 2]);
        let counts: Vec<u128> = fixture_circuits().iter().map(|(_, c)| c.parse_tree_count()).collect();
        assert_eq!(counts, vec![4, 4, 12, 8]);
    }

    #[test]
    fn normal_form_violations() {
        let mut b = CircuitBuilder::new();
        let x = b.input(VarLabel::free("x"));
        let c = b.finish(x).unwrap();
        assert!(normal_form_depth(&c).is_err());
        let mut b = CircuitBuilder::new();
        let (x, y) = (b.input(VarLabel::free("x")), b.input(VarLabel::free("w")));
        let m = b.mul(vec![x, y]);
        let c = b.finish(m).unwrap();
        let err = normal_form_depth(&c).unwrap_err();
        assert!(err.iter().any(|e| e.contains("non-addition child")), "{err:?}");
    }

    #[test]
    fn jn_of_a_single_product() {
        let (_, c) = &fixture_circuits()[0];
        let j = build_jn(c, &triple(), None).unwrap();
        // Root plus a_L, b_L, c_R, d_R.
        assert_eq!(j.blocks.len(), 5);
        assert_eq!(j.paths.len(), 4);
        let sides: Vec<Side> = j.paths.iter().map(|p| p.side).collect();
        assert_eq!(sides, vec![Side::Left, Side::Left, Side::Right, Side::Right]);
        let labelled: Vec<String> = j.weights.values().map(|w| w.to_string()).collect();
        assert_eq!(labelled.len(), 4);
        for name in ["a", "b", "c", "d"] {
            assert!(labelled.contains(&name.to_string()));
        }
    }

    #[test]
    fn single_product_bijection() {
        let (_, c) = &fixture_circuits()[0];
        let r = verify_parse_hom_bijection(c, &triple(), None, 10_000).unwrap();
        assert_eq!(r.m, 2);
        assert_eq!(r.hom_terms.len(), 4);
        assert!(r.equal());
        let r = verify_parse_hom_bijection(c, &triple(), Some(JnFault::WrongLevel), 10_000).unwrap();
        assert!(!r.equal());
    }

    #[test]
    fn every_fixture_bijects() {
        let t = triple();
        for (name, c) in fixture_circuits() {
            let r = verify_parse_hom_bijection(&c, &t, None, 10_000).unwrap();
            assert_eq!(r.parse_terms.len() as u128, c.parse_tree_count(), "{name}");
            assert!(r.equal(), "{name}: {:?} vs {:?}", r.parse_terms, r.hom_terms);
        }
    }
}
