//! Dynamic program over a nice tree decomposition that emits an arithmetic
//! circuit for the generalized homomorphism polynomial
//! `sum over phi in Hom(G,H) of prod_u Z_{u,phi(u)} * prod_{uv in E(G)} Y_{phi(u)phi(v)}`.

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, CircuitError, Subst, VarLabel};
use crate::decomp::{validate_nice, NiceTreeDecomp, NodeKind};
use crate::graph::{for_each_hom, Graph};
use crate::rings::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("invalid decomposition: {}", .0.join("; "))]
    InvalidDecomp(Vec<String>),
    #[error("target graph has no vertices")]
    EmptyTarget,
    #[error("mapping table of {0} entries is too large")]
    TooLarge(u128),
    #[error("circuit has {gates} gates, above the bound {bound}")]
    SizeBound { gates: usize, bound: u128 },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompileMeta {
    pub source_vertices: u32,
    pub target_vertices: u32,
    pub target_edges: usize,
    pub width: usize,
    pub gates: usize,
    pub wires: usize,
    pub skew: bool,
    pub joins: usize,
    pub bound: u128,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompiledHom {
    pub circuit: Circuit,
    pub meta: CompileMeta,
}

/// `2|V(G)| * |V(H)|^(tw+1) * (2|V(H)| + 2|E(H)|)`.
pub fn size_bound(g_vertices: u32, h_vertices: u32, h_edges: usize, width: usize) -> u128 {
    let nh = u128::from(h_vertices);
    2 * u128::from(g_vertices) * nh.pow(width as u32 + 1) * (2 * nh + 2 * h_edges as u128)
}

/// Gate ids of `<t, phi>` and `<t, phi>'` for every map `phi` of a bag.
#[derive(Clone)]
struct Table {
    val: Vec<usize>,
    der: Vec<usize>,
}

/// Mixed-radix view of maps from a sorted bag into `1..=base`: digit `i`
/// is `phi(bag[i]) - 1`.
struct Maps<'a> {
    bag: &'a [u32],
    base: usize,
}

impl Maps<'_> {
    fn count(&self) -> usize {
        self.base.pow(self.bag.len() as u32)
    }

    fn decode(&self, mut idx: usize, out: &mut Vec<u32>) {
        out.clear();
        for _ in 0..self.bag.len() {
            out.push((idx % self.base) as u32 + 1);
            idx /= self.base;
        }
    }

    fn encode(&self, images: impl Iterator<Item = u32>) -> usize {
        let mut idx = 0;
        let mut w = 1;
        for h in images {
            idx += (h as usize - 1) * w;
            w *= self.base;
        }
        idx
    }
}

/// Compiles `(G, d, H)` into a circuit over `Z:u:a` and `Ye:a:b` inputs.
pub fn compile(g: &Graph, d: &NiceTreeDecomp, h: &Graph) -> Result<CompiledHom, CompileError> {
    let (circuit, _) = build(g, d, h, false)?;
    let width = d.width();
    let bound = size_bound(g.n(), h.n(), h.m(), width);
    let meta = CompileMeta {
        source_vertices: g.n(),
        target_vertices: h.n(),
        target_edges: h.m(),
        width,
        gates: circuit.gate_count(),
        wires: circuit.wire_count(),
        skew: circuit.check_skew(),
        joins: d.join_count(),
        bound,
    };
    if meta.gates as u128 > bound {
        return Err(CompileError::SizeBound { gates: meta.gates, bound });
    }
    Ok(CompiledHom { circuit, meta })
}

/// Emits the gates bottom-up. Child tables are dropped once their parent is
/// built unless `retain` is set, in which case every node's table is
/// returned alongside the circuit.
fn build(g: &Graph, d: &NiceTreeDecomp, h: &Graph, retain: bool) -> Result<(Circuit, Vec<Option<Table>>), CompileError> {
    let violations = validate_nice(d, g);
    if !violations.is_empty() {
        return Err(CompileError::InvalidDecomp(violations));
    }
    if h.n() == 0 {
        return Err(CompileError::EmptyTarget);
    }
    let base = h.n() as usize;
    let width = d.width();
    let entries = (base as u128).pow(width as u32 + 1);
    if entries > 1 << 24 {
        return Err(CompileError::TooLarge(entries));
    }
    let mut b = CircuitBuilder::new();
    let nodes = d.nodes();
    let mut tables: Vec<Option<Table>> = (0..nodes.len()).map(|_| None).collect();
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for id in d.postorder() {
        let node = &nodes[id];
        let maps = Maps { bag: &node.bag, base };
        let mut val = Vec::with_capacity(maps.count());
        let mut der = Vec::with_capacity(maps.count());
        match node.kind {
            NodeKind::Leaf => {
                let u = node.bag[0];
                for a in 1..=h.n() {
                    val.push(b.input(VarLabel::Z(u, a)));
                    der.push(b.one());
                }
            }
            NodeKind::Introduce(u) => {
                let child = fetch(&mut tables, node.children[0], retain);
                let child_bag = &nodes[node.children[0]].bag;
                let cmaps = Maps { bag: child_bag, base };
                let pos_u = node.bag.binary_search(&u).expect("introduced vertex in bag");
                let nbrs: Vec<usize> = (0..node.bag.len()).filter(|&i| g.has_edge(node.bag[i], u)).collect();
                for idx in 0..maps.count() {
                    maps.decode(idx, &mut phi);
                    let a = phi[pos_u];
                    if nbrs.iter().any(|&i| !h.has_edge(phi[i], a)) {
                        let z = b.zero();
                        val.push(z);
                        der.push(z);
                        continue;
                    }
                    let cidx = cmaps.encode(phi.iter().enumerate().filter(|&(i, _)| i != pos_u).map(|(_, &x)| x));
                    let mut factors = vec![b.input(VarLabel::Z(u, a))];
                    for &i in &nbrs {
                        factors.push(b.input(VarLabel::ye(phi[i], a)));
                    }
                    factors.push(child.val[cidx]);
                    val.push(b.mul(factors));
                    der.push(child.der[cidx]);
                }
            }
            NodeKind::Forget(u) => {
                let child = fetch(&mut tables, node.children[0], retain);
                let child_bag = &nodes[node.children[0]].bag;
                let cmaps = Maps { bag: child_bag, base };
                let pos_u = child_bag.binary_search(&u).expect("forgotten vertex in child bag");
                let nbrs: Vec<usize> = (0..node.bag.len()).filter(|&i| g.has_edge(node.bag[i], u)).collect();
                for idx in 0..maps.count() {
                    maps.decode(idx, &mut phi);
                    let mut sum = Vec::with_capacity(base);
                    let mut dsum = Vec::with_capacity(base);
                    for a in 1..=h.n() {
                        psi.clear();
                        psi.extend_from_slice(&phi);
                        psi.insert(pos_u, a);
                        let cidx = cmaps.encode(psi.iter().copied());
                        sum.push(child.val[cidx]);
                        if nbrs.iter().all(|&i| h.has_edge(phi[i], a)) {
                            let mut factors = vec![b.input(VarLabel::Z(u, a))];
                            for &i in &nbrs {
                                factors.push(b.input(VarLabel::ye(phi[i], a)));
                            }
                            factors.push(child.der[cidx]);
                            dsum.push(b.mul(factors));
                        }
                    }
                    val.push(b.add(sum));
                    der.push(b.add(dsum));
                }
            }
            NodeKind::Join => {
                let left = fetch(&mut tables, node.children[0], retain);
                let right = fetch(&mut tables, node.children[1], retain);
                for idx in 0..maps.count() {
                    val.push(b.mul(vec![left.val[idx], right.der[idx]]));
                    der.push(b.mul(vec![left.der[idx], right.der[idx]]));
                }
            }
        }
        tables[id] = Some(Table { val, der });
    }
    let out = tables[d.root()].as_ref().expect("root table").val[0];
    let circuit = b.finish(out)?;
    Ok((circuit, tables))
}

fn fetch(tables: &mut [Option<Table>], id: usize, retain: bool) -> Table {
    let t = if retain { tables[id].clone() } else { tables[id].take() };
    t.expect("child table built first")
}

/// Sets every placement variable `Z:u:a` to 1.
pub fn specialize_z(c: &CompiledHom) -> Circuit {
    c.circuit.project(|l| if l.is_z() { Subst::One } else { Subst::Var(l.clone()) })
}

/// Applies a substitution `sigma` to the inputs of `c`.
pub fn project(c: &Circuit, sigma: impl FnMut(&VarLabel) -> Subst) -> Circuit {
    c.project(sigma)
}

/// Reference value of the generalized homomorphism polynomial by explicit
/// enumeration of `Hom(G, H)`.
pub fn brute_force_value<R: Ring>(
    ring: &R,
    g: &Graph,
    h: &Graph,
    mut value: impl FnMut(&VarLabel) -> R::Elem,
) -> R::Elem {
    let mut acc = ring.zero();
    let edges: Vec<(u32, u32)> = g.edges().collect();
    for_each_hom(g, h, |m| {
        let mut term = ring.one();
        for u in g.vertices() {
            term = ring.mul(&term, &value(&VarLabel::Z(u, m[u as usize - 1])));
        }
        for &(u, v) in &edges {
            term = ring.mul(&term, &value(&VarLabel::ye(m[u as usize - 1], m[v as usize - 1])));
        }
        ring.add_assign(&mut acc, &term);
        true
    });
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Monomial, SparsePoly};
    use crate::decomp::{cycle_decomp, make_nice, treewidth_exact, TreeDecomp};
    use crate::graph::enumerate_homs;
    use crate::rings::{Field, Integers};

    #[test]
    fn single_edge_into_single_edge() {
        let g = Graph::complete(2);
        let (_, d) = treewidth_exact(&g).unwrap();
        let c = compile(&g, &d, &Graph::complete(2)).unwrap();
        let p = c.circuit.eval_symbolic().unwrap();
        assert_eq!(p.len(), 2);
        let m1 = Monomial::from_factors([VarLabel::Z(1, 1), VarLabel::Z(2, 2), VarLabel::ye(1, 2)]);
        let m2 = Monomial::from_factors([VarLabel::Z(1, 2), VarLabel::Z(2, 1), VarLabel::ye(1, 2)]);
        assert_eq!(p.coefficient(&m1), Some(&1));
        assert_eq!(p.coefficient(&m2), Some(&1));
        let s = specialize_z(&c).eval_symbolic().unwrap();
        assert_eq!(s.coefficient(&Monomial::var(VarLabel::ye(1, 2))), Some(&2));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn triangle_into_triangle() {
        let g = Graph::cycle(3);
        let c = compile(&g, &cycle_decomp(3).unwrap(), &Graph::complete(3)).unwrap();
        assert_eq!(enumerate_homs(&g, &Graph::complete(3), 100).unwrap().len(), 6);
        let s = specialize_z(&c).eval_symbolic().unwrap();
        let all = Monomial::from_factors([VarLabel::ye(1, 2), VarLabel::ye(1, 3), VarLabel::ye(2, 3)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&all), Some(&6));
        assert!(c.meta.skew);
        assert!(c.circuit.is_constant_free());
    }

    #[test]
    fn path_p3_size_bound() {
        let g = Graph::path(3);
        let d = make_nice(&TreeDecomp::path(vec![vec![1, 2], vec![2, 3]]), &g).unwrap();
        let c = compile(&g, &d, &Graph::complete(3)).unwrap();
        assert_eq!(c.meta.bound, 648);
        assert!(c.meta.gates <= 648);
    }

    #[test]
    fn matches_enumeration_over_f5() {
        let f5 = Field::prime(5).unwrap();
        let g = Graph::from_edges(5, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5)]).unwrap();
        let h = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]).unwrap();
        let (_, d) = treewidth_exact(&g).unwrap();
        let c = compile(&g, &d, &h).unwrap();
        let value = |l: &VarLabel| {
            let seed = match l {
                VarLabel::Z(u, a) => 3 * u + a,
                VarLabel::Ye(a, b) => 7 * a + b,
                _ => 0,
            };
            f5.from_int(i64::from(seed % 5))
        };
        let got = c.circuit.eval(&f5, |l| Some(value(l))).unwrap();
        assert_eq!(got, brute_force_value(&f5, &g, &h, value));
    }

    #[test]
    fn join_decompositions_compute_the_same_polynomial() {
        let g = Graph::from_edges(4, [(4, 1), (4, 2), (4, 3)]).unwrap();
        let td = TreeDecomp { bags: vec![vec![4, 1], vec![4, 2], vec![4, 3]], edges: vec![(0, 1), (0, 2)] };
        let joined = make_nice(&td, &g).unwrap();
        let path = make_nice(&TreeDecomp::path(vec![vec![4, 1], vec![4, 2], vec![4, 3]]), &g).unwrap();
        let h = Graph::complete(3);
        let a = compile(&g, &joined, &h).unwrap();
        let b = compile(&g, &path, &h).unwrap();
        assert!(a.meta.joins > 0 && !a.meta.skew);
        assert!(b.meta.skew);
        assert_eq!(a.circuit.eval_symbolic().unwrap(), b.circuit.eval_symbolic().unwrap());
        let ones = project(&a.circuit, |_| Subst::One);
        assert_eq!(ones.eval(&Integers, |_| None).unwrap(), 3 * 2 * 2 * 2);
    }

    #[test]
    fn rejects_invalid_decomposition() {
        let g = Graph::path(3);
        let (_, d) = treewidth_exact(&Graph::path(2)).unwrap();
        assert!(matches!(compile(&g, &d, &Graph::complete(2)), Err(CompileError::InvalidDecomp(_))));
        let (_, d) = treewidth_exact(&g).unwrap();
        assert!(matches!(compile(&g, &d, &Graph::new(0)), Err(CompileError::EmptyTarget)));
    }

    #[test]
    fn derivative_gates_strip_the_bag_factor() {
        let cases = [
            (Graph::from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]).unwrap(), Graph::complete(3)),
            (Graph::from_edges(4, [(4, 1), (4, 2), (4, 3)]).unwrap(), Graph::path(3)),
        ];
        for (g, h) in cases {
            let td = TreeDecomp { bags: vec![vec![1, 2, 3, 4]], edges: vec![] };
            let decomps = [treewidth_exact(&g).unwrap().1, make_nice(&td, &g).unwrap()];
            for d in decomps {
                let (c, tables) = build(&g, &d, &h, true).unwrap();
                for (id, node) in d.nodes().iter().enumerate() {
                    let t = tables[id].as_ref().unwrap();
                    let maps = Maps { bag: &node.bag, base: h.n() as usize };
                    let mut phi = Vec::new();
                    for idx in 0..maps.count() {
                        maps.decode(idx, &mut phi);
                        let image = |u: u32| phi[node.bag.binary_search(&u).unwrap()];
                        let inner: Vec<(u32, u32)> =
                            g.edges().filter(|(u, v)| node.bag.contains(u) && node.bag.contains(v)).collect();
                        if inner.iter().any(|&(u, v)| !h.has_edge(image(u), image(v))) {
                            continue;
                        }
                        let sym = |gate: usize| Circuit::new(c.gates().to_vec(), gate).unwrap().eval_symbolic().unwrap();
                        let mut factor = Monomial::one();
                        for &u in &node.bag {
                            factor.mul_var(VarLabel::Z(u, image(u)), 1);
                        }
                        for &(u, v) in &inner {
                            factor.mul_var(VarLabel::ye(image(u), image(v)), 1);
                        }
                        let scaled = sym(t.der[idx]).mul(&Integers, &SparsePoly::term(&Integers, factor, 1));
                        assert_eq!(sym(t.val[idx]), scaled, "node {id} phi {phi:?}");
                    }
                }
            }
        }
    }
}
