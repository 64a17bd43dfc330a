//! Nice tree decompositions: validation, width, conversion from arbitrary
//! tree decompositions, exact treewidth for small graphs and structural
//! decompositions for block-and-path gadgets.

mod exact;
mod layout;
mod nice;

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use thiserror::Error;

use crate::graph::Graph;

pub use exact::{greedy_decomposition, treewidth_exact, EXACT_MAX_N};
pub use layout::{cycle_decomp, gadget_decomp, BlockPathLayout};
pub use nice::{make_nice, TreeDecomp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("invalid tree decomposition: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("exact treewidth is limited to {max} vertices (graph has {n}); use a structural decomposition instead")]
    TooLarge { n: u32, max: u32 },
    #[error("graph has no vertices")]
    NoVertices,
    #[error("gadget layout: {0}")]
    Layout(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    Leaf,
    Introduce(u32),
    Forget(u32),
    Join,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Leaf => write!(f, "leaf"),
            NodeKind::Introduce(v) => write!(f, "intro:{v}"),
            NodeKind::Forget(v) => write!(f, "forget:{v}"),
            NodeKind::Join => write!(f, "join"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompNode {
    /// Sorted, duplicate-free.
    pub bag: Vec<u32>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// A rooted decomposition whose nodes are stored children-first, so the
/// root is normally the last node.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NiceTreeDecomp {
    nodes: Vec<DecompNode>,
    root: usize,
}

impl NiceTreeDecomp {
    pub fn from_parts(nodes: Vec<DecompNode>, root: usize) -> Self {
        NiceTreeDecomp { nodes, root }
    }

    pub fn nodes(&self) -> &[DecompNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn join_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Join).count()
    }

    pub fn is_path(&self) -> bool {
        self.join_count() == 0
    }

    /// Node ids with every child before its parent, ending at the root.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        let mut seen = vec![false; self.nodes.len()];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                out.push(id);
                continue;
            }
            if id >= self.nodes.len() || seen[id] {
                continue;
            }
            seen[id] = true;
            stack.push((id, true));
            for &c in self.nodes[id].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    pub(crate) fn push(&mut self, bag: Vec<u32>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.nodes.push(DecompNode { bag, kind, children });
        self.nodes.len() - 1
    }

    pub(crate) fn set_root(&mut self, root: usize) {
        self.root = root;
    }

    /// Every violated condition, as readable messages; empty iff `self` is a
    /// nice tree decomposition of `g`.
    pub fn validate(&self, g: &Graph) -> Vec<String> {
        validate_nice(self, g)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (id, node) in self.nodes.iter().enumerate() {
            let _ = write!(s, "bag {id} {}", node.kind);
            for v in &node.bag {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        for (id, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                let _ = writeln!(s, "child {id} {c}");
            }
        }
        let _ = writeln!(s, "root {}", self.root);
        s
    }

    pub fn parse(text: &str) -> Result<NiceTreeDecomp, DecompError> {
        let mut nodes: Vec<DecompNode> = Vec::new();
        let mut root = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| DecompError::Parse { line, msg };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad number {s:?}")));
            match toks.as_slice() {
                ["bag", id, kind, verts @ ..] => {
                    if num(id)? != nodes.len() {
                        return Err(err(format!("bag ids must be dense and ordered; expected {}", nodes.len())));
                    }
                    let kind = match kind.split_once(':') {
                        None if *kind == "leaf" => NodeKind::Leaf,
                        None if *kind == "join" => NodeKind::Join,
                        Some(("intro", v)) => NodeKind::Introduce(num(v)? as u32),
                        Some(("forget", v)) => NodeKind::Forget(num(v)? as u32),
                        _ => return Err(err(format!("bad node kind {kind:?}"))),
                    };
                    let mut bag = verts.iter().map(|v| num(v).map(|x| x as u32)).collect::<Result<Vec<_>, _>>()?;
                    bag.sort_unstable();
                    if bag.windows(2).any(|w| w[0] == w[1]) {
                        return Err(err("repeated vertex in bag".into()));
                    }
                    nodes.push(DecompNode { bag, kind, children: Vec::new() });
                }
                ["child", p, k] => {
                    let (p, k) = (num(p)?, num(k)?);
                    let node = nodes.get_mut(p).ok_or_else(|| err(format!("unknown parent {p}")))?;
                    node.children.push(k);
                }
                ["root", id] => root = Some(num(id)?),
                _ => return Err(err(format!("unrecognized line {body:?}"))),
            }
        }
        let root = root.ok_or(DecompError::Parse { line: 0, msg: "missing root record".into() })?;
        Ok(NiceTreeDecomp { nodes, root })
    }
}

/// Checks the nice-decomposition conditions against `g`; returns the list
/// of violations (empty when valid).
pub fn validate_nice(d: &NiceTreeDecomp, g: &Graph) -> Vec<String> {
    let mut bad = Vec::new();
    let nodes = &d.nodes;
    if d.root >= nodes.len() {
        bad.push(format!("root {} does not exist", d.root));
        return bad;
    }
    // Tree shape: every node has one parent except the root, and all are
    // reachable from the root.
    let mut parent: Vec<Option<usize>> = vec![None; nodes.len()];
    for (id, node) in nodes.iter().enumerate() {
        for &c in &node.children {
            if c >= nodes.len() {
                bad.push(format!("node {id} has unknown child {c}"));
            } else if c == d.root {
                bad.push(format!("root {c} appears as a child of {id}"));
            } else if let Some(p) = parent[c] {
                bad.push(format!("node {c} has two parents ({p} and {id})"));
            } else {
                parent[c] = Some(id);
            }
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    let order = d.postorder();
    if order.len() != nodes.len() {
        bad.push(format!("{} nodes unreachable from the root", nodes.len() - order.len()));
        return bad;
    }
    if !nodes[d.root].bag.is_empty() {
        bad.push(format!("root bag {:?} is not empty", nodes[d.root].bag));
    }
    for (id, node) in nodes.iter().enumerate() {
        if let Some(&v) = node.bag.iter().find(|&&v| v == 0 || v > g.n()) {
            bad.push(format!("node {id}: vertex {v} is not in the graph"));
        }
        let child_bags: Vec<&Vec<u32>> = node.children.iter().map(|&c| &nodes[c].bag).collect();
        let bag: BTreeSet<u32> = node.bag.iter().copied().collect();
        match node.kind {
            NodeKind::Leaf => {
                if !child_bags.is_empty() {
                    bad.push(format!("leaf {id} has children"));
                }
                if node.bag.len() != 1 {
                    bad.push(format!("leaf {id} bag has {} vertices, expected 1", node.bag.len()));
                }
            }
            NodeKind::Introduce(v) | NodeKind::Forget(v) => {
                let kind = node.kind;
                let [child] = child_bags.as_slice() else {
                    bad.push(format!("{kind} node {id} has {} children, expected 1", child_bags.len()));
                    continue;
                };
                let mut expect: BTreeSet<u32> = child.iter().copied().collect();
                let changed = if matches!(kind, NodeKind::Introduce(_)) { expect.insert(v) } else { expect.remove(&v) };
                if !changed || expect != bag {
                    bad.push(format!("{kind} node {id}: bag {:?} does not match child bag {:?}", node.bag, child));
                }
            }
            NodeKind::Join => {
                if child_bags.len() != 2 {
                    bad.push(format!("join node {id} has {} children, expected 2", child_bags.len()));
                } else if child_bags.iter().any(|b| **b != node.bag) {
                    bad.push(format!(
                        "join node {id}: child bags {:?} and {:?} differ from {:?}",
                        child_bags[0], child_bags[1], node.bag
                    ));
                }
            }
        }
    }
    for v in g.vertices() {
        // Connected occurrence: exactly one node holding v whose parent
        // does not hold v.
        let tops = (0..nodes.len())
            .filter(|&id| nodes[id].bag.binary_search(&v).is_ok())
            .filter(|&id| parent[id].is_none_or(|p| nodes[p].bag.binary_search(&v).is_err()))
            .count();
        match tops {
            0 => bad.push(format!("vertex {v} in no bag")),
            1 => {}
            _ => bad.push(format!("bags containing vertex {v} are not connected")),
        }
    }
    for (u, v) in g.edges() {
        if !nodes.iter().any(|n| n.bag.binary_search(&u).is_ok() && n.bag.binary_search(&v).is_ok()) {
            bad.push(format!("edge ({u},{v}) in no bag"));
        }
    }
    bad
}
