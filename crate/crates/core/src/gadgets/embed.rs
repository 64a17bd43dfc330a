use std::collections::BTreeMap;

use super::{build_gk, Assembler, GadgetError, GadgetGraph, LayeredBP, PathConvention, Side, Term, Weight};
use crate::circuit::{SparsePoly, VarLabel};
use crate::graph::{for_each_hom, Gadget, GadgetTriple, Graph};
use crate::rings::{Field, FieldElem, Integers, Ring};

#[derive(Clone, Copy, Debug)]
pub enum EmbedMode<'a> {
    /// `I_1(u) - (s) B' (t) - (v) I_2` with paths of `c_max` edges.
    Gadget { i1: &'a Gadget, i2: &'a Gadget, c_max: u32 },
    /// The program graph plus an `(s, t)` edge of weight `y`.
    Cycle,
}

/// A weighting of the complete host graph that picks out `b`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub host_size: u32,
    /// `Ye:a:b` for every pair of host vertices; absent edges get 0.
    pub host: BTreeMap<VarLabel, Weight>,
    pub b: GadgetGraph,
}

/// Builds the host graph `B` for `bp` and the matching assignment of the
/// edge variables of the complete graph on `host_size` vertices (default:
/// exactly `|V(B)|`).
pub fn embed_bp(bp: &LayeredBP, mode: EmbedMode<'_>, host_size: Option<u32>) -> Result<Embedding, GadgetError> {
    let mut asm = Assembler::new();
    let (graph, labels) = bp.underlying();
    let b = match mode {
        EmbedMode::Gadget { i1, i2, c_max } => {
            if c_max == 0 {
                return Err(GadgetError::Precondition("c_max must be positive".into()));
            }
            let b1 = asm.block(i1, 1, "I1");
            let u = asm.blocks()[b1].image(i1.v_l);
            let mut interior = Vec::new();
            for _ in 1..c_max {
                interior.push(asm.vertex());
            }
            let base = asm.vertex() - 1;
            for _ in 1..graph.n() {
                asm.vertex();
            }
            let (s, t) = (base + bp.source_vertex(), base + bp.sink_vertex());
            for (x, y) in graph.edges() {
                asm.edge(base + x, base + y, labels[&(x, y)].clone());
            }
            let mut left = vec![u];
            left.extend(&interior);
            left.push(s);
            for w in left.windows(2) {
                asm.edge(w[0], w[1], Weight::one());
            }
            asm.connect(left, Some(b1), None, Side::Chain);
            let mut right = vec![t];
            for _ in 1..c_max {
                right.push(asm.vertex());
            }
            let b2 = asm.block(i2, 2, "I2");
            let v = asm.blocks()[b2].image(i2.v_l);
            right.push(v);
            for w in right.windows(2) {
                asm.edge(w[0], w[1], Weight::one());
            }
            asm.connect(right, None, Some(b2), Side::Chain);
            for (name, x) in [("u", u), ("s", s), ("t", t), ("v", v)] {
                asm.mark(name, x);
            }
            asm.finish(c_max, PathConvention::Edges)
        }
        EmbedMode::Cycle => {
            let l = bp.num_layers();
            if l < 3 || l % 2 == 0 {
                return Err(GadgetError::Precondition(format!("cycle mode needs an odd number of layers >= 3, got {l}")));
            }
            for _ in 0..graph.n() {
                asm.vertex();
            }
            for (x, y) in graph.edges() {
                asm.edge(x, y, labels[&(x, y)].clone());
            }
            let (s, t) = (bp.source_vertex(), bp.sink_vertex());
            asm.edge(s, t, Weight::Var(VarLabel::ScalarY));
            asm.mark("s", s);
            asm.mark("t", t);
            asm.finish(0, PathConvention::Edges)
        }
    };
    let need = b.graph.n();
    let host_size = host_size.unwrap_or(need);
    if host_size < need {
        return Err(GadgetError::HostTooSmall { need, have: host_size });
    }
    let mut host = BTreeMap::new();
    for x in 1..=host_size {
        for y in x + 1..=host_size {
            let w = if b.graph.has_edge(x, y) { b.weight(x, y) } else { Weight::Const(0) };
            host.insert(VarLabel::ye(x, y), w);
        }
    }
    Ok(Embedding { host_size, host, b })
}

/// Calls `visit` on every homomorphism, failing past `cap`.
fn homs_capped(g: &Graph, h: &Graph, cap: usize, mut visit: impl FnMut(&[u32])) -> Result<usize, GadgetError> {
    let mut count = 0;
    let mut over = false;
    for_each_hom(g, h, |map| {
        count += 1;
        if count > cap {
            over = true;
            return false;
        }
        visit(map);
        true
    });
    if over {
        Err(GadgetError::Budget { cap })
    } else {
        Ok(count)
    }
}

fn term_poly(terms: &[Term]) -> SparsePoly<i128> {
    let z = Integers;
    let mut p = SparsePoly::zero();
    for (c, m) in terms {
        p.add_term(&z, m.clone(), *c as i128);
    }
    p
}

/// Outcome of trying to recover `g` from `f` in characteristic `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Recovery {
    /// `2l` is never invertible in characteristic 2.
    NoInverse,
    /// `f(y = (2l)^-1) = g` checked over `F_p`; `padded` means `p` divided
    /// `2l` and the program was lengthened by two layers first.
    Checked { padded: bool, factor: i64, ok: bool },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycleReport {
    pub layers: usize,
    /// `2l`.
    pub factor: i64,
    pub homs: usize,
    pub paths: usize,
    /// `f = 2l * y * g` over the integers.
    pub identity: bool,
    pub prime: u32,
    pub recovery: Recovery,
}

impl CycleReport {
    pub fn passed(&self) -> bool {
        self.identity && !matches!(self.recovery, Recovery::Checked { ok: false, .. })
    }
}

/// `f = sum over Hom(C_l, B)` of edge-weight products, with `B` the cycle
/// embedding of `bp`.
fn cycle_polynomial(bp: &LayeredBP, cap: usize) -> Result<(SparsePoly<i128>, usize), GadgetError> {
    let emb = embed_bp(bp, EmbedMode::Cycle, None)?;
    let c = Graph::cycle(bp.num_layers() as u32);
    let mut terms = Vec::new();
    let homs = homs_capped(&c, &emb.b.graph, cap, |map| terms.push(emb.b.hom_term(&c, map)))?;
    Ok((term_poly(&terms), homs))
}

/// Checks `f_{C_l, B} = (2l) y g` exactly over the integers, then recovers
/// `g` over `F_prime` by substituting `y = (2l)^-1`, padding the program by
/// two layers when `prime` divides `l`.
pub fn verify_cycle_identity(bp: &LayeredBP, prime: u32, cap: usize) -> Result<CycleReport, GadgetError> {
    let field = Field::prime(prime).map_err(|e| GadgetError::Precondition(e.to_string()))?;
    let z = Integers;
    let l = bp.num_layers();
    let g = bp.path_polynomial();
    let (f, homs) = cycle_polynomial(bp, cap)?;
    let factor = 2 * l as i64;
    let y = SparsePoly::var(&z, VarLabel::ScalarY);
    let identity = f == g.mul(&z, &y).scale(&z, &(factor as i128));
    let recovery = if prime == 2 {
        Recovery::NoInverse
    } else {
        let (padded, f_used, factor_used) = if factor % prime as i64 == 0 {
            let longer = bp.padded();
            (true, cycle_polynomial(&longer, cap)?.0, factor + 4)
        } else {
            (false, f, factor)
        };
        let inv = field.inv(field.from_int(factor_used)).expect("p does not divide the factor");
        let reduce = |c: &i128| field.from_int(c.rem_euclid(prime as i128) as i64);
        let mut got: SparsePoly<FieldElem> = SparsePoly::zero();
        for (m, c) in f_used.terms() {
            let e = m.exponent(&VarLabel::ScalarY);
            let rest = m.restrict(|x| *x != VarLabel::ScalarY);
            got.add_term(&field, rest, field.mul(&reduce(c), &field.pow(&inv, e as u64)));
        }
        let want = g.map_coeffs(&field, reduce);
        Recovery::Checked { padded, factor: factor_used, ok: got == want }
    };
    Ok(CycleReport { layers: l, factor, homs, paths: bp.st_paths().len(), identity, prime, recovery })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GadgetReport {
    pub layers: usize,
    pub c_max: u32,
    pub homs: usize,
    pub paths: usize,
    /// Every homomorphism maps `I_1` identically onto the host's `I_1`.
    pub p1: bool,
    /// Likewise for `I_2`.
    pub p2: bool,
    /// Every homomorphism sends `a` to `s` and `b` to `t`.
    pub endpoints: bool,
    pub multiset_equal: bool,
    /// `f_{G_l, B_l} = g` as integer polynomials.
    pub f_equals_g: bool,
}

impl GadgetReport {
    pub fn passed(&self) -> bool {
        self.homs == self.paths && self.p1 && self.p2 && self.endpoints && self.multiset_equal && self.f_equals_g
    }
}

/// Enumerates `Hom(G_l, B_l)` for the path gadget with `l` = number of
/// layers and `c_max = max(|I_1|, |I_2|)`, and compares it with the
/// source-to-sink paths of `bp`.
pub fn verify_gadget_bijection(bp: &LayeredBP, i1: &Gadget, i2: &Gadget, cap: usize) -> Result<GadgetReport, GadgetError> {
    GadgetTriple::new(vec![i1.clone(), i2.clone()]).certify().map_err(GadgetError::Certification)?;
    let l = bp.num_layers();
    if l <= bp.width() {
        return Err(GadgetError::Precondition(format!("{l} layers must exceed the width {}", bp.width())));
    }
    let c_max = i1.size().max(i2.size());
    let gl = build_gk(l as u32, i1, i2, c_max)?;
    let host = embed_bp(bp, EmbedMode::Gadget { i1, i2, c_max }, None)?.b;
    let (gb1, gb2) = (&gl.blocks[0], &gl.blocks[1]);
    let (hb1, hb2) = (&host.blocks[0], &host.blocks[1]);
    let (a, b) = (gl.mark("a").expect("marked"), gl.mark("b").expect("marked"));
    let (s, t) = (host.mark("s").expect("marked"), host.mark("t").expect("marked"));
    let (mut p1, mut p2, mut endpoints) = (true, true, true);
    let mut terms = Vec::new();
    let homs = homs_capped(&gl.graph, &host.graph, cap, |map| {
        let img = |x: u32| map[x as usize - 1];
        p1 &= (1..=i1.size()).all(|x| img(gb1.image(x)) == hb1.image(x));
        p2 &= (1..=i2.size()).all(|x| img(gb2.image(x)) == hb2.image(x));
        endpoints &= img(a) == s && img(b) == t;
        terms.push(host.hom_term(&gl.graph, map));
    })?;
    terms.sort();
    let paths = bp.st_paths();
    Ok(GadgetReport {
        layers: l,
        c_max,
        homs,
        paths: paths.len(),
        p1,
        p2,
        endpoints,
        multiset_equal: terms == paths,
        f_equals_g: term_poly(&terms) == bp.path_polynomial(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Monomial;
    use crate::graph::count_homs_upto;

    const TRIANGLE: &str = "layers 3\nnode 1 1\nnode 2 1\nnode 3 1\narc 1 1 1 X:1\narc 2 1 1 X:2\nsource 1\nsink 1\n";
    const TWO_PATHS: &str = "layers 3\nnode 1 1\nnode 2 1\nnode 2 2\nnode 3 1\n\
        arc 1 1 1 X:1\narc 2 1 1 X:2\narc 1 1 2 X:3\narc 2 2 1 X:4\nsource 1\nsink 1\n";

    fn pair() -> GadgetTriple {
        GadgetTriple::parse(include_str!("../../fixtures/pair.gad")).unwrap()
    }

    #[test]
    fn cycle_embedding_of_a_single_path() {
        let bp = LayeredBP::parse(TRIANGLE).unwrap();
        let emb = embed_bp(&bp, EmbedMode::Cycle, Some(5)).unwrap();
        assert_eq!(emb.b.graph, Graph::cycle(3));
        assert_eq!(emb.b.weight(1, 3), Weight::Var(VarLabel::ScalarY));
        assert_eq!(emb.host.len(), 10);
        assert_eq!(emb.host[&VarLabel::ye(4, 5)], Weight::Const(0));
        assert_eq!(emb.host[&VarLabel::ye(1, 2)], Weight::Var(VarLabel::Xi(1)));
        assert!(matches!(embed_bp(&bp, EmbedMode::Cycle, Some(2)), Err(GadgetError::HostTooSmall { need: 3, have: 2 })));
    }

    #[test]
    fn cycle_identity_examples() {
        let x = |i| VarLabel::Xi(i);
        let r = verify_cycle_identity(&LayeredBP::parse(TRIANGLE).unwrap(), 5, 1000).unwrap();
        assert_eq!((r.factor, r.homs, r.identity), (6, 6, true));
        assert!(r.passed());
        let (f, _) = cycle_polynomial(&LayeredBP::parse(TRIANGLE).unwrap(), 1000).unwrap();
        assert_eq!(f.coefficient(&Monomial::from_factors([x(1), x(2), VarLabel::ScalarY])), Some(&6));
        let r = verify_cycle_identity(&LayeredBP::parse(TWO_PATHS).unwrap(), 5, 1000).unwrap();
        assert_eq!((r.homs, r.paths), (12, 2));
        assert!(r.passed());
        let r = verify_cycle_identity(&LayeredBP::parse(TRIANGLE).unwrap(), 2, 1000).unwrap();
        assert_eq!(r.recovery, Recovery::NoInverse);
        // p = 3 divides 2l = 6, so the program is padded to 5 layers.
        let r = verify_cycle_identity(&LayeredBP::parse(TRIANGLE).unwrap(), 3, 1000).unwrap();
        assert_eq!(r.recovery, Recovery::Checked { padded: true, factor: 10, ok: true });
    }

    #[test]
    fn odd_cycles_wrap_themselves_2l_times() {
        for l in [3, 5, 7] {
            assert_eq!(count_homs_upto(&Graph::cycle(l), &Graph::cycle(l), 1000), 2 * l as usize);
        }
    }

    #[test]
    fn gadget_embedding_size() {
        let p = pair();
        let bp = LayeredBP::parse(TWO_PATHS).unwrap();
        let emb = embed_bp(&bp, EmbedMode::Gadget { i1: p.i1(), i2: p.i2(), c_max: 8 }, None).unwrap();
        assert_eq!(emb.b.graph.n(), 8 + 8 + 2 * 7 + 4);
        assert_eq!(emb.b.graph.bfs(emb.b.mark("u").unwrap())[emb.b.mark("s").unwrap() as usize], 8);
    }

    #[test]
    fn gadget_bijection_on_small_programs() {
        let p = pair();
        for text in [TRIANGLE, TWO_PATHS] {
            let bp = LayeredBP::parse(text).unwrap();
            let r = verify_gadget_bijection(&bp, p.i1(), p.i2(), 10_000).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.homs, bp.st_paths().len());
        }
    }

    #[test]
    fn comparable_pair_is_rejected() {
        let p = pair();
        let bp = LayeredBP::parse(TRIANGLE).unwrap();
        let k3 = Gadget::with_default_marks(Graph::complete(3));
        assert!(matches!(verify_gadget_bijection(&bp, &k3, p.i2(), 100), Err(GadgetError::Certification(_))));
        assert!(matches!(verify_gadget_bijection(&bp, p.i1(), p.i1(), 100), Err(GadgetError::Certification(_))));
    }
}
