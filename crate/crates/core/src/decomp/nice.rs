use std::collections::BTreeSet;

use super::{DecompError, NiceTreeDecomp, NodeKind};
use crate::graph::Graph;

/// An arbitrary (not necessarily nice) tree decomposition: bags plus
/// undirected tree edges between bag indices.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TreeDecomp {
    pub bags: Vec<Vec<u32>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomp {
    /// A path decomposition: consecutive bags adjacent.
    pub fn path(bags: Vec<Vec<u32>>) -> TreeDecomp {
        let edges = (1..bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomp { bags, edges }
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks tree shape, vertex and edge coverage and connectivity.
    pub fn validate(&self, g: &Graph) -> Vec<String> {
        let mut bad = Vec::new();
        let k = self.bags.len();
        if k == 0 {
            bad.push("no bags".to_string());
            return bad;
        }
        if self.edges.len() != k - 1 {
            bad.push(format!("{} tree edges for {k} bags", self.edges.len()));
        }
        let adj = self.adjacency();
        if adj.is_none() {
            bad.push("tree edge refers to a missing bag".into());
            return bad;
        }
        let adj = adj.expect("checked");
        if reach(&adj, 0, |_| true).len() != k {
            bad.push("bags do not form a connected tree".into());
        }
        for (i, b) in self.bags.iter().enumerate() {
            if let Some(v) = b.iter().find(|&&v| v == 0 || v > g.n()) {
                bad.push(format!("bag {i}: vertex {v} is not in the graph"));
            }
        }
        for v in g.vertices() {
            let holding: Vec<usize> = (0..k).filter(|&i| self.bags[i].contains(&v)).collect();
            match holding.first() {
                None => bad.push(format!("vertex {v} in no bag")),
                Some(&start) => {
                    if reach(&adj, start, |i| self.bags[i].contains(&v)).len() != holding.len() {
                        bad.push(format!("bags containing vertex {v} are not connected"));
                    }
                }
            }
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                bad.push(format!("edge ({u},{v}) in no bag"));
            }
        }
        bad
    }

    fn adjacency(&self) -> Option<Vec<Vec<usize>>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a >= adj.len() || b >= adj.len() {
                return None;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        Some(adj)
    }
}

fn reach(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if allowed(j) && seen.insert(j) {
                stack.push(j);
            }
        }
    }
    seen
}

/// Converts a valid tree decomposition into a nice one of the same width,
/// rooted above bag 0. Leaves get a chain of introduce nodes, children are
/// reconciled with their parent bag by forgets then introduces, and several
/// children are merged by a chain of joins.
pub fn make_nice(td: &TreeDecomp, g: &Graph) -> Result<NiceTreeDecomp, DecompError> {
    if g.n() == 0 {
        return Err(DecompError::NoVertices);
    }
    let bad = td.validate(g);
    if !bad.is_empty() {
        return Err(DecompError::Invalid(bad));
    }
    let adj = td.adjacency().expect("validated");
    let bags: Vec<Vec<u32>> = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    let mut out = NiceTreeDecomp::default();
    // Iterative post-order over the rooted tree.
    let mut parent = vec![usize::MAX; bags.len()];
    let mut order = Vec::with_capacity(bags.len());
    let mut stack = vec![0usize];
    parent[0] = 0;
    while let Some(i) = stack.pop() {
        order.push(i);
        for &j in &adj[i] {
            if parent[j] == usize::MAX {
                parent[j] = i;
                stack.push(j);
            }
        }
    }
    let mut built: Vec<Option<usize>> = vec![None; bags.len()];
    for &i in order.iter().rev() {
        let target = &bags[i];
        let mut subs: Vec<usize> = Vec::new();
        for &j in &adj[i] {
            if parent[j] == i && j != i {
                if let Some(node) = built[j] {
                    subs.push(morph(&mut out, node, target));
                }
            }
        }
        built[i] = match subs.split_first() {
            Some((&first, rest)) => {
                let mut acc = first;
                for &s in rest {
                    acc = out.push(target.clone(), NodeKind::Join, vec![acc, s]);
                }
                Some(acc)
            }
            None => grow_leaf(&mut out, target),
        };
    }
    let top = built[0].expect("graph has vertices, so some bag is nonempty");
    let root = morph(&mut out, top, &[]);
    out.set_root(root);
    Ok(out)
}

/// Leaf on the first vertex of `bag` followed by introduces; `None` for an
/// empty bag.
fn grow_leaf(out: &mut NiceTreeDecomp, bag: &[u32]) -> Option<usize> {
    let (&first, rest) = bag.split_first()?;
    let mut node = out.push(vec![first], NodeKind::Leaf, vec![]);
    let mut cur = vec![first];
    for &v in rest {
        cur.push(v);
        cur.sort_unstable();
        node = out.push(cur.clone(), NodeKind::Introduce(v), vec![node]);
    }
    Some(node)
}

/// Forgets then introduces vertices until the bag of `node` equals `target`.
fn morph(out: &mut NiceTreeDecomp, mut node: usize, target: &[u32]) -> usize {
    let mut cur = out.nodes()[node].bag.clone();
    let gone: Vec<u32> = cur.iter().copied().filter(|v| !target.contains(v)).collect();
    for v in gone {
        cur.retain(|&x| x != v);
        node = out.push(cur.clone(), NodeKind::Forget(v), vec![node]);
    }
    let fresh: Vec<u32> = target.iter().copied().filter(|v| !cur.contains(v)).collect();
    for v in fresh {
        cur.push(v);
        cur.sort_unstable();
        node = out.push(cur.clone(), NodeKind::Introduce(v), vec![node]);
    }
    node
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate_nice;

    #[test]
    fn path_p3() {
        let g = Graph::path(3);
        let d = make_nice(&TreeDecomp::path(vec![vec![1, 2], vec![2, 3]]), &g).unwrap();
        assert!(validate_nice(&d, &g).is_empty());
        assert_eq!(d.width(), 1);
        assert!(d.is_path());
    }

    #[test]
    fn star_k13() {
        let g = Graph::from_edges(4, [(4, 1), (4, 2), (4, 3)]).unwrap();
        let td = TreeDecomp { bags: vec![vec![4, 1], vec![4, 2], vec![4, 3]], edges: vec![(0, 1), (0, 2)] };
        let d = make_nice(&td, &g).unwrap();
        assert!(validate_nice(&d, &g).is_empty(), "{:?}", validate_nice(&d, &g));
        assert_eq!(d.width(), 1);
        assert_eq!(d.join_count(), 1);
    }

    #[test]
    fn already_nice_shape_keeps_width() {
        let g = Graph::complete(2);
        let td = TreeDecomp::path(vec![vec![1], vec![1, 2], vec![2], vec![]]);
        let d = make_nice(&td, &g).unwrap();
        assert!(validate_nice(&d, &g).is_empty());
        assert_eq!(d.width(), 1);
    }

    #[test]
    fn invalid_input_is_rejected() {
        let g = Graph::path(3);
        let td = TreeDecomp::path(vec![vec![1, 2], vec![3]]);
        match make_nice(&td, &g) {
            Err(DecompError::Invalid(v)) => assert!(v.contains(&"edge (2,3) in no bag".to_string())),
            other => panic!("unexpected {other:?}"),
        }
        let td = TreeDecomp::path(vec![vec![1, 2], vec![2, 3], vec![1]]);
        assert!(make_nice(&td, &g).is_err());
    }

    #[test]
    fn empty_bags_inside_the_tree() {
        let mut g = Graph::new(2);
        g.add_edge(1, 2).unwrap();
        g.add_vertex();
        let td = TreeDecomp::path(vec![vec![1, 2], vec![], vec![3]]);
        let d = make_nice(&td, &g).unwrap();
        assert!(validate_nice(&d, &g).is_empty(), "{:?}", validate_nice(&d, &g));
    }
}
