use std::collections::BTreeSet;

use super::{make_nice, DecompError, NiceTreeDecomp, TreeDecomp};
use crate::graph::Graph;

/// Largest graph accepted by [`treewidth_exact`].
pub const EXACT_MAX_N: u32 = 12;

/// Exact treewidth by dynamic programming over vertex subsets (the
/// elimination-ordering recurrence), with a witness nice decomposition.
pub fn treewidth_exact(g: &Graph) -> Result<(usize, NiceTreeDecomp), DecompError> {
    let n = g.n();
    if n == 0 {
        return Err(DecompError::NoVertices);
    }
    if n > EXACT_MAX_N {
        return Err(DecompError::TooLarge { n, max: EXACT_MAX_N });
    }
    let n = n as usize;
    let adj: Vec<u32> = (1..=n as u32)
        .map(|u| g.neighbors(u).iter().fold(0u32, |m, &w| m | 1 << (w - 1)))
        .collect();
    let full = (1u32 << n) - 1;
    // best[s]: minimal width of eliminating s first; choice[s]: last vertex.
    let mut best = vec![0u32; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    for s in 1..=full {
        let mut b = u32::MAX;
        for v in 0..n {
            if s >> v & 1 == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let w = best[rest as usize].max(q_size(&adj, rest, v, full));
            if w < b {
                b = w;
                choice[s as usize] = v as u8;
            }
        }
        best[s as usize] = b;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as u32;
        order.push(v + 1);
        s &= !(1 << v);
    }
    order.reverse();
    let td = decomposition_from_order(g, &order);
    let width = best[full as usize] as usize;
    debug_assert_eq!(td.width(), width);
    let nice = make_nice(&td, g)?;
    Ok((width, nice))
}

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q_size(adj: &[u32], s: u32, v: usize, full: u32) -> u32 {
    let mut seen = 1u32 << v;
    let mut frontier = 1u32 << v;
    let mut out = 0u32;
    while frontier != 0 {
        let mut next = 0u32;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[u];
        }
        next &= !seen & full;
        seen |= next;
        out |= next & !s;
        frontier = next & s;
    }
    out.count_ones()
}

/// Tree decomposition induced by eliminating vertices in `order`.
pub(crate) fn decomposition_from_order(g: &Graph, order: &[u32]) -> TreeDecomp {
    let n = g.n() as usize;
    let mut nbrs: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n + 1];
    for (u, v) in g.edges() {
        nbrs[u as usize].insert(v);
        nbrs[v as usize].insert(u);
    }
    let mut pos = vec![0usize; n + 1];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut higher: Vec<Vec<u32>> = Vec::with_capacity(n);
    for &v in order {
        let later: Vec<u32> = nbrs[v as usize].iter().copied().filter(|&w| pos[w as usize] > pos[v as usize]).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    nbrs[a as usize].insert(b);
                }
            }
        }
        let mut bag = later.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        higher.push(later);
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, later) in higher.iter().enumerate() {
        match later.iter().min_by_key(|&&w| pos[w as usize]) {
            Some(&w) => edges.push((i, pos[w as usize])),
            None => roots.push(i),
        }
    }
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    TreeDecomp { bags, edges }
}

/// Min-degree elimination heuristic; works for any size.
pub fn greedy_decomposition(g: &Graph) -> TreeDecomp {
    let n = g.n() as usize;
    let mut nbrs: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n + 1];
    for (u, v) in g.edges() {
        nbrs[u as usize].insert(v);
        nbrs[v as usize].insert(u);
    }
    let mut alive: BTreeSet<u32> = g.vertices().collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = alive.iter().min_by_key(|&&v| (nbrs[v as usize].len(), v)) {
        let ns: Vec<u32> = nbrs[v as usize].iter().copied().collect();
        for &a in &ns {
            nbrs[a as usize].remove(&v);
            for &b in &ns {
                if a != b {
                    nbrs[a as usize].insert(b);
                }
            }
        }
        alive.remove(&v);
        order.push(v);
    }
    decomposition_from_order(g, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate_nice;

    fn tw(g: &Graph) -> usize {
        let (w, d) = treewidth_exact(g).unwrap();
        assert!(validate_nice(&d, g).is_empty(), "{:?}", validate_nice(&d, g));
        assert_eq!(d.width(), w);
        w
    }

    #[test]
    fn known_treewidths() {
        assert_eq!(tw(&Graph::path(5)), 1);
        assert_eq!(tw(&Graph::from_edges(4, [(1, 2), (1, 3), (1, 4)]).unwrap()), 1);
        assert_eq!(tw(&Graph::complete(4)), 3);
        assert_eq!(tw(&Graph::cycle(5)), 2);
        assert_eq!(tw(&Graph::new(3)), 0);
    }

    /// Minimum over all elimination orderings of the largest degree at
    /// elimination time.
    fn brute_force_tw(g: &Graph) -> usize {
        fn go(adj: Vec<u32>, alive: u32, acc: usize, best: &mut usize) {
            if alive == 0 {
                *best = (*best).min(acc);
                return;
            }
            for v in 0..adj.len() {
                if alive >> v & 1 == 0 {
                    continue;
                }
                let nb = adj[v] & alive & !(1 << v);
                let w = acc.max(nb.count_ones() as usize);
                if w >= *best {
                    continue;
                }
                let mut next = adj.clone();
                for u in 0..adj.len() {
                    if nb >> u & 1 == 1 {
                        next[u] |= nb & !(1 << u);
                    }
                }
                go(next, alive & !(1 << v), w, best);
            }
        }
        let adj: Vec<u32> =
            (1..=g.n()).map(|u| g.neighbors(u).iter().fold(0u32, |m, &w| m | 1 << (w - 1))).collect();
        let mut best = usize::MAX;
        go(adj, (1 << g.n()) - 1, 0, &mut best);
        best
    }

    #[test]
    fn agrees_with_ordering_brute_force() {
        let graphs = [
            Graph::cycle(5),
            Graph::complete(4),
            Graph::from_edges(6, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 4), (1, 5)]).unwrap(),
            Graph::from_edges(7, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 4), (1, 7)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(tw(g), brute_force_tw(g));
        }
    }

    #[test]
    fn size_limit() {
        assert!(matches!(treewidth_exact(&Graph::path(13)), Err(DecompError::TooLarge { n: 13, max: 12 })));
        assert!(matches!(treewidth_exact(&Graph::new(0)), Err(DecompError::NoVertices)));
    }

    #[test]
    fn greedy_is_valid() {
        let g = Graph::grotzsch();
        let td = greedy_decomposition(&g);
        assert!(td.validate(&g).is_empty());
        let d = make_nice(&td, &g).unwrap();
        assert!(validate_nice(&d, &g).is_empty());
        assert_eq!(d.width(), td.width());
    }
}
