use super::{make_nice, DecompError, NiceTreeDecomp, TreeDecomp};
use crate::graph::Graph;

/// Construction metadata of a gadget graph made of vertex-disjoint blocks
/// connected in a tree shape by simple paths.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BlockPathLayout {
    pub blocks: Vec<Vec<u32>>,
    /// Full vertex sequence of each connecting path; the endpoints lie in
    /// blocks and the interior vertices in no block.
    pub paths: Vec<Vec<u32>>,
}

/// Decomposition with one bag per block and one bag per path edge, rooted
/// at block 0. Width is `max(largest block - 1, 1)`; a chain of blocks gives
/// a decomposition without join nodes.
pub fn gadget_decomp(g: &Graph, layout: &BlockPathLayout) -> Result<NiceTreeDecomp, DecompError> {
    let err = |m: String| DecompError::Layout(m);
    if layout.blocks.is_empty() {
        return Err(err("no blocks".into()));
    }
    let mut owner = vec![usize::MAX; g.n() as usize + 1];
    for (i, b) in layout.blocks.iter().enumerate() {
        for &v in b {
            if v == 0 || v > g.n() {
                return Err(err(format!("block {i} names vertex {v} outside the graph")));
            }
            if owner[v as usize] != usize::MAX {
                return Err(err(format!("vertex {v} belongs to two blocks")));
            }
            owner[v as usize] = i;
        }
    }
    let mut bags: Vec<Vec<u32>> = layout.blocks.clone();
    let mut edges = Vec::new();
    for (pi, path) in layout.paths.iter().enumerate() {
        let (Some(&a), Some(&b)) = (path.first(), path.last()) else {
            return Err(err(format!("path {pi} is empty")));
        };
        if path.len() < 2 {
            return Err(err(format!("path {pi} has no edge")));
        }
        for &v in [a, b].iter() {
            if v == 0 || v > g.n() || owner[v as usize] == usize::MAX {
                return Err(err(format!("path {pi} endpoint {v} is not in a block")));
            }
        }
        let mut prev = owner[a as usize];
        for w in path.windows(2) {
            bags.push(vec![w[0], w[1]]);
            let id = bags.len() - 1;
            edges.push((prev, id));
            prev = id;
        }
        edges.push((prev, owner[b as usize]));
    }
    make_nice(&TreeDecomp { bags, edges }, g)
}

/// Width-2 nice path decomposition of the cycle `1, 2, ..., n`.
pub fn cycle_decomp(n: u32) -> Result<NiceTreeDecomp, DecompError> {
    if n < 3 {
        return Err(DecompError::Layout(format!("cycles need at least 3 vertices, got {n}")));
    }
    let bags = (2..n).map(|i| vec![1, i, i + 1]).collect();
    make_nice(&TreeDecomp::path(bags), &Graph::cycle(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate_nice;

    #[test]
    fn cycle_seven() {
        let d = cycle_decomp(7).unwrap();
        assert!(validate_nice(&d, &Graph::cycle(7)).is_empty());
        assert_eq!(d.width(), 2);
        assert!(d.is_path());
    }

    #[test]
    fn two_triangles_and_a_path() {
        // Triangles {1,2,3} and {4,5,6} joined by 1-7-8-4.
        let g = Graph::from_edges(8, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 7), (7, 8), (8, 4)]).unwrap();
        let layout = BlockPathLayout { blocks: vec![vec![1, 2, 3], vec![4, 5, 6]], paths: vec![vec![1, 7, 8, 4]] };
        let d = gadget_decomp(&g, &layout).unwrap();
        assert!(validate_nice(&d, &g).is_empty());
        assert_eq!(d.width(), 2);
        assert!(d.is_path());
    }

    #[test]
    fn inconsistent_layout_is_rejected() {
        let g = Graph::cycle(3);
        let layout = BlockPathLayout { blocks: vec![vec![1, 2]], paths: vec![] };
        assert!(matches!(gadget_decomp(&g, &layout), Err(DecompError::Invalid(_))));
        let layout = BlockPathLayout { blocks: vec![vec![1, 2, 3]], paths: vec![vec![1, 9]] };
        assert!(matches!(gadget_decomp(&g, &layout), Err(DecompError::Layout(_))));
    }
}
