use std::collections::BTreeMap;
use std::fmt;

use super::{eval_definitional, tdm_vertex, Cnf, Family, FamilyError};
use crate::circuit::VarLabel;
use crate::graph::{Graph, Hypergraph3};
use crate::rings::{Field, FieldElem, Ring, TruncRing};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProjValue {
    Zero,
    One,
    Z,
    T,
}

impl fmt::Display for ProjValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjValue::Zero => "0",
            ProjValue::One => "1",
            ProjValue::Z => "z",
            ProjValue::T => "t",
        })
    }
}

/// A counting instance for one of the families.
#[derive(Clone, Debug)]
pub enum Instance {
    Cnf(Cnf),
    /// A graph with a solution size (ignored by the clow family).
    Graph { graph: Graph, k: u32 },
    Hyper(Hypergraph3),
}

/// A substitution of every family variable by `0`, `1`, `z` or `t`, and the
/// monomial `z^(a(q-1)) t^(b(q-1))` whose coefficient is the count.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionSpec {
    pub family: Family,
    pub n: u32,
    /// Variables not listed map to one.
    pub values: BTreeMap<VarLabel, ProjValue>,
    /// `(a, b)` in units of `q - 1`.
    pub target: (u32, u32),
}

impl ProjectionSpec {
    pub fn value(&self, l: &VarLabel) -> ProjValue {
        self.values.get(l).copied().unwrap_or(ProjValue::One)
    }

    pub fn target_degrees(&self, q: u64) -> (u32, u32) {
        let e = (q - 1) as u32;
        (self.target.0 * e, self.target.1 * e)
    }
}

/// The standard projection of `family` for `inst`.
///
/// * sat: `Y_c -> t` for each distinct clause of the formula; target `t^m`.
/// * vc: `Y_v -> t`, `X_e -> z` on edges; target `z^m t^k`.
/// * cis: as vc with target `z^(k choose 2) t^k`; needs `k >= 2`.
/// * clow: as vc with target `z^n t^n`; the coefficient is twice the number
///   of Hamiltonian cycles for `n >= 3`.
/// * tdm: `Y_v -> t`, `X_h -> z` on hyperedges and `0` off them; target
///   `z^n t^(3n)`.
pub fn standard_projection(family: Family, inst: &Instance) -> Result<ProjectionSpec, FamilyError> {
    let mismatch = |n: u32, msg: &str| FamilyError::SizeMismatch { family, n, msg: msg.to_string() };
    let mut values = BTreeMap::new();
    let (n, target) = match (family, inst) {
        (Family::Sat, Instance::Cnf(cnf)) => {
            let distinct = cnf.distinct_clauses();
            for c in &distinct {
                values.insert(VarLabel::Yc(*c), ProjValue::T);
            }
            (cnf.n, (0, distinct.len() as u32))
        }
        (Family::Vc | Family::Cis | Family::Clow, Instance::Graph { graph, k }) => {
            let n = graph.n();
            for (u, v) in graph.edges() {
                values.insert(VarLabel::xe(u, v), ProjValue::Z);
            }
            for v in 1..=n {
                values.insert(VarLabel::Yv(v), ProjValue::T);
            }
            let k = *k;
            if family != Family::Clow && k > n {
                return Err(mismatch(n, &format!("k = {k} exceeds the vertex count")));
            }
            let target = match family {
                Family::Vc => (graph.m() as u32, k),
                Family::Cis => {
                    if k < 2 {
                        return Err(mismatch(n, "the clique projection needs k >= 2"));
                    }
                    (k * (k - 1) / 2, k)
                }
                _ => (n, n),
            };
            (n, target)
        }
        (Family::Tdm, Instance::Hyper(h)) => {
            let n = h.n();
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        let v = if h.contains((a, b, c)) { ProjValue::Z } else { ProjValue::Zero };
                        values.insert(VarLabel::Xh(a, b, c), v);
                    }
                }
            }
            for part in 0..3 {
                for i in 1..=n {
                    values.insert(tdm_vertex(n, part, i), ProjValue::T);
                }
            }
            (n, (n, 3 * n))
        }
        (_, inst) => {
            let n = match inst {
                Instance::Cnf(c) => c.n,
                Instance::Graph { graph, .. } => graph.n(),
                Instance::Hyper(h) => h.n(),
            };
            return Err(mismatch(n, "wrong instance kind"));
        }
    };
    Ok(ProjectionSpec { family, n, values, target })
}

/// Evaluates the projected polynomial in `F_q[z,t]` truncated at the target
/// degrees and returns the target coefficient.
pub fn count_via_coefficient(field: &Field, spec: &ProjectionSpec) -> Result<FieldElem, FamilyError> {
    let q = field.q();
    let (dz, dt) = spec.target_degrees(q);
    let ring = TruncRing::new(field.clone(), dz, dt);
    let (zero, one, z, t) = (ring.zero(), ring.one(), ring.z(), ring.t());
    let poly = eval_definitional(&ring, spec.family, spec.n, q, |l| {
        match spec.value(l) {
            ProjValue::Zero => zero.clone(),
            ProjValue::One => one.clone(),
            ProjValue::Z => z.clone(),
            ProjValue::T => t.clone(),
        }
    })?;
    Ok(ring.coefficient(&poly, dz, dt).expect("target degrees are the caps"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Clause;

    fn graph(n: u32, k: u32, edges: &[(u32, u32)]) -> Instance {
        Instance::Graph { graph: Graph::from_edges(n, edges.iter().copied()).unwrap(), k }
    }

    #[test]
    fn small_counts() {
        let f3 = Field::prime(3).unwrap();
        // Vertex covers of size 3 in K_4: 4, which is 1 mod 3.
        let spec = standard_projection(Family::Vc, &graph(4, 3, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])).unwrap();
        assert_eq!(count_via_coefficient(&f3, &spec).unwrap(), f3.one());
        // One clause (x1 v x1 v x1) over one variable: a single model.
        let cnf = Cnf::new(1, vec![Clause::new(1, 1, 1)]).unwrap();
        let spec = standard_projection(Family::Sat, &Instance::Cnf(cnf)).unwrap();
        assert_eq!(spec.target, (0, 1));
        assert_eq!(count_via_coefficient(&f3, &spec).unwrap(), f3.one());
        // Triangles in K_4.
        let f5 = Field::prime(5).unwrap();
        let spec = standard_projection(Family::Cis, &graph(4, 3, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])).unwrap();
        assert_eq!(count_via_coefficient(&f5, &spec).unwrap(), f5.from_int(4));
        // K_4 has 3 Hamiltonian cycles, each traversed twice from vertex 1.
        let f7 = Field::prime(7).unwrap();
        let spec = standard_projection(Family::Clow, &graph(4, 0, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])).unwrap();
        assert_eq!(count_via_coefficient(&f7, &spec).unwrap(), f7.from_int(6));
    }

    #[test]
    fn tdm_absent_hyperedges_must_vanish() {
        let mut h = Hypergraph3::new(2);
        h.add_edge(1, 1, 1).unwrap();
        h.add_edge(2, 2, 2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let spec = standard_projection(Family::Tdm, &Instance::Hyper(h)).unwrap();
        assert_eq!(count_via_coefficient(&f3, &spec).unwrap(), f3.one());
        // Sending absent hyperedges to one lets every subset of the six
        // absent ones join the matching, giving 64.
        let mut loose = spec.clone();
        for v in loose.values.values_mut() {
            if *v == ProjValue::Zero {
                *v = ProjValue::One;
            }
        }
        let f5 = Field::prime(5).unwrap();
        assert_eq!(count_via_coefficient(&f5, &loose).unwrap(), f5.from_int(64));
        assert_eq!(count_via_coefficient(&f5, &spec).unwrap(), f5.one());
    }

    #[test]
    fn mismatches_are_rejected() {
        let inst = graph(3, 1, &[(1, 2)]);
        assert!(matches!(standard_projection(Family::Cis, &inst), Err(FamilyError::SizeMismatch { .. })));
        assert!(matches!(standard_projection(Family::Sat, &inst), Err(FamilyError::SizeMismatch { .. })));
        assert!(standard_projection(Family::Vc, &graph(3, 4, &[])).is_err());
    }
}
