use super::{Graph, GraphError, INF};

/// An edge-preserving vertex map; `map[u - 1]` is the image of `u`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Homomorphism {
    pub map: Vec<u32>,
}

impl Homomorphism {
    pub fn image(&self, u: u32) -> u32 {
        self.map[u as usize - 1]
    }

    /// Checks the edge-preservation invariant.
    pub fn is_valid(&self, g: &Graph, h: &Graph) -> bool {
        self.map.len() == g.n() as usize
            && self.map.iter().all(|&a| a >= 1 && a <= h.n())
            && g.edges().all(|(u, v)| h.has_edge(self.image(u), self.image(v)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism { map: self.map.iter().map(|&a| other.image(a)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &a)| a as usize == i + 1)
    }
}

/// Backtracking schedule for one `(G, H)` pair.
struct Plan {
    order: Vec<u32>,
    /// Earlier positions adjacent to each position.
    back: Vec<Vec<usize>>,
    /// Earlier non-adjacent positions at finite distance, with that distance.
    reach: Vec<Vec<(usize, u32)>>,
}

impl Plan {
    fn new(g: &Graph) -> Plan {
        let n = g.n() as usize;
        let dg = g.distances();
        let mut placed = vec![false; n + 1];
        let mut assigned_nbrs = vec![0usize; n + 1];
        let mut closeness = vec![INF; n + 1];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            // Heavy vertices first, then most constrained, then nearest to
            // the placed set, then highest degree, then lowest id.
            let next = (1..=g.n())
                .filter(|&x| !placed[x as usize])
                .max_by_key(|&x| {
                    let xi = x as usize;
                    (
                        g.degree(x) >= 3,
                        assigned_nbrs[xi],
                        std::cmp::Reverse(closeness[xi]),
                        g.degree(x),
                        std::cmp::Reverse(x),
                    )
                })
                .expect("unplaced vertex remains");
            placed[next as usize] = true;
            order.push(next);
            for &w in g.neighbors(next) {
                assigned_nbrs[w as usize] += 1;
            }
            for x in 1..=n {
                closeness[x] = closeness[x].min(dg[next as usize][x]);
            }
        }
        let mut back = vec![Vec::new(); n];
        let mut reach = vec![Vec::new(); n];
        for (i, &x) in order.iter().enumerate() {
            for j in 0..i {
                let y = order[j];
                let d = dg[x as usize][y as usize];
                if d == 1 {
                    back[i].push(j);
                } else if d != INF {
                    reach[i].push((j, d));
                }
            }
            // Most recent neighbour first: its image has the smallest
            // candidate list in practice.
            back[i].reverse();
        }
        Plan { order, back, reach }
    }
}

struct Search<'a, F> {
    plan: Plan,
    h: &'a Graph,
    dh: Vec<Vec<u32>>,
    /// Adjacency bit rows of H, `words` u64s per vertex.
    hadj: Vec<u64>,
    words: usize,
    img: Vec<u32>,
    map: Vec<u32>,
    visit: F,
}

impl<F: FnMut(&[u32]) -> bool> Search<'_, F> {
    /// Returns false once the visitor asks to stop.
    fn run(&mut self, i: usize) -> bool {
        if i == self.plan.order.len() {
            for (k, &x) in self.plan.order.iter().enumerate() {
                self.map[x as usize - 1] = self.img[k];
            }
            return (self.visit)(&self.map);
        }
        let candidates: Vec<u32> = match self.plan.back[i].first() {
            Some(&j) => self.h.neighbors(self.img[j]).to_vec(),
            None => (1..=self.h.n()).collect(),
        };
        'cand: for c in candidates {
            for &j in self.plan.back[i].iter().skip(1) {
                let a = self.img[j] as usize * self.words + c as usize / 64;
                if self.hadj[a] & (1 << (c % 64)) == 0 {
                    continue 'cand;
                }
            }
            let row = &self.dh[c as usize];
            for &(j, d) in &self.plan.reach[i] {
                if row[self.img[j] as usize] > d {
                    continue 'cand;
                }
            }
            self.img[i] = c;
            if !self.run(i + 1) {
                return false;
            }
        }
        true
    }
}

/// Calls `visit` on every homomorphism `G -> H` (map indexed by `u - 1`)
/// until it returns false. Visit order is not lexicographic.
pub fn for_each_hom(g: &Graph, h: &Graph, visit: impl FnMut(&[u32]) -> bool) {
    let plan = Plan::new(g);
    let n = g.n() as usize;
    let words = h.n() as usize / 64 + 1;
    let mut hadj = vec![0u64; (h.n() as usize + 1) * words];
    for (a, b) in h.edges() {
        hadj[a as usize * words + b as usize / 64] |= 1 << (b % 64);
        hadj[b as usize * words + a as usize / 64] |= 1 << (a % 64);
    }
    let mut s = Search {
        plan,
        h,
        dh: h.distances(),
        hadj,
        words,
        img: vec![0; n],
        map: vec![0; n],
        visit,
    };
    s.run(0);
}

/// All homomorphisms in lexicographic order of their maps; fails once more
/// than `cap` have been found.
pub fn enumerate_homs(g: &Graph, h: &Graph, cap: usize) -> Result<Vec<Homomorphism>, GraphError> {
    let mut out = Vec::new();
    let mut over = false;
    for_each_hom(g, h, |m| {
        if out.len() == cap {
            over = true;
            return false;
        }
        out.push(Homomorphism { map: m.to_vec() });
        true
    });
    if over {
        return Err(GraphError::CapExceeded { partial: out.len(), cap });
    }
    out.sort();
    Ok(out)
}

/// Counts homomorphisms, stopping at `limit`.
pub fn count_homs_upto(g: &Graph, h: &Graph, limit: usize) -> usize {
    let mut count = 0;
    for_each_hom(g, h, |_| {
        count += 1;
        count < limit
    });
    count
}

pub fn hom_exists(g: &Graph, h: &Graph) -> bool {
    count_homs_upto(g, h, 1) == 1
}

/// True iff the identity is the only endomorphism.
pub fn is_rigid(g: &Graph) -> bool {
    count_homs_upto(g, g, 2) == 1
}

/// True iff there is no homomorphism in either direction.
pub fn are_incomparable(g: &Graph, h: &Graph) -> bool {
    !hom_exists(g, h) && !hom_exists(h, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tries all `|V(H)|^|V(G)|` maps.
    fn brute_force(g: &Graph, h: &Graph) -> Vec<Vec<u32>> {
        let n = g.n() as usize;
        let mut out = Vec::new();
        let mut map = vec![1u32; n];
        if h.n() == 0 && n > 0 {
            return out;
        }
        loop {
            if g.edges().all(|(u, v)| h.has_edge(map[u as usize - 1], map[v as usize - 1])) {
                out.push(map.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if map[i] < h.n() {
                    map[i] += 1;
                    break;
                }
                map[i] = 1;
            }
        }
    }

    #[test]
    fn small_counts() {
        let k2 = Graph::complete(2);
        let k3 = Graph::complete(3);
        assert_eq!(enumerate_homs(&k2, &k3, 100).unwrap().len(), 6);
        assert_eq!(enumerate_homs(&k3, &k3, 100).unwrap().len(), 6);
        let c5 = Graph::cycle(5);
        let homs = enumerate_homs(&c5, &k3, 100).unwrap();
        assert_eq!(homs.len(), brute_force(&c5, &k3).len());
        assert_eq!(homs.len(), 30);
    }

    #[test]
    fn matches_brute_force_in_order() {
        let g = Graph::from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (2, 5)]).unwrap();
        let h = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]).unwrap();
        let fast: Vec<Vec<u32>> = enumerate_homs(&g, &h, 10_000).unwrap().into_iter().map(|x| x.map).collect();
        assert_eq!(fast, brute_force(&g, &h));
    }

    #[test]
    fn cap_reports_partial_count() {
        let err = enumerate_homs(&Graph::cycle(5), &Graph::complete(3), 10).unwrap_err();
        assert_eq!(err, GraphError::CapExceeded { partial: 10, cap: 10 });
    }

    #[test]
    fn rigidity_examples() {
        assert!(is_rigid(&Graph::new(1)));
        assert!(!is_rigid(&Graph::complete(2)));
        assert!(!is_rigid(&Graph::cycle(4)));
    }

    #[test]
    fn incomparability_examples() {
        assert!(!are_incomparable(&Graph::complete(3), &Graph::complete(4)));
        assert!(!are_incomparable(&Graph::complete(3), &Graph::cycle(5)));
        assert!(!hom_exists(&Graph::complete(3), &Graph::cycle(5)));
        assert!(are_incomparable(&Graph::complete(3), &Graph::grotzsch()));
    }

    #[test]
    fn disconnected_sources_and_empty_targets() {
        let mut g = Graph::complete(2);
        g.add_vertex();
        assert_eq!(enumerate_homs(&g, &Graph::complete(3), 100).unwrap().len(), 18);
        assert_eq!(enumerate_homs(&Graph::new(0), &Graph::new(0), 5).unwrap().len(), 1);
        assert_eq!(enumerate_homs(&Graph::new(1), &Graph::new(0), 5).unwrap().len(), 0);
    }
}
