//! Hardness constructions built from rigid, pairwise incomparable blocks:
//! the tree gadget `G_m`, the path gadget `G_k`, branching-program hosts and
//! the circuit graph `J_n`, together with the desk-scale checks that
//! homomorphisms into these hosts are exactly the intended objects.

mod bp;
mod build;
mod embed;
mod jn;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Monomial, VarLabel};
use crate::decomp::BlockPathLayout;
use crate::graph::{Gadget, Graph, GraphError};

pub use bp::{Arc, LayeredBP};
pub use build::{build_gk, build_gm};
pub use embed::{embed_bp, verify_cycle_identity, verify_gadget_bijection, CycleReport, EmbedMode, Embedding, GadgetReport, Recovery};
pub use jn::{build_jn, fixture_circuits, normal_form_depth, verify_parse_hom_bijection, JnFault, ParseHomReport};

/// Certified pair found by the gadget search, in gadget-file format.
pub const PAIR_FIXTURE: &str = include_str!("../../fixtures/pair.gad");
/// Certified triple found by the gadget search, in gadget-file format.
pub const TRIPLE_FIXTURE: &str = include_str!("../../fixtures/triple.gad");

/// Default cap on homomorphisms enumerated by the verifiers.
pub const HOM_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("m = {0} is not a power of two")]
    NotPowerOfTwo(u32),
    #[error("gadget blocks fail certification: {}", .0.join("; "))]
    Certification(Vec<String>),
    #[error("circuit is not in normal form: {}", .0.join("; "))]
    NormalForm(Vec<String>),
    #[error("branching program: {0}")]
    Bp(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("host graph has {have} vertices but {need} are required")]
    HostTooSmall { need: u32, have: u32 },
    #[error("{0}")]
    Precondition(String),
    #[error("more than {cap} homomorphisms; raise the cap")]
    Budget { cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An edge weight: an integer constant or a variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Weight {
    Const(i64),
    Var(VarLabel),
}

impl Weight {
    pub fn one() -> Weight {
        Weight::Const(1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Const(c) => write!(f, "{c}"),
            Weight::Var(l) => write!(f, "{l}"),
        }
    }
}

impl FromStr for Weight {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(c) = s.parse::<i64>() {
            return Ok(Weight::Const(c));
        }
        s.parse::<VarLabel>().map(Weight::Var).map_err(|e| e.to_string())
    }
}

/// A coefficient and a monomial; the weight of a path or a homomorphism.
pub type Term = (i64, Monomial);

/// Multiplies `w` into `t`.
pub(crate) fn absorb(t: &mut Term, w: &Weight) {
    match w {
        Weight::Const(c) => t.0 *= c,
        Weight::Var(l) => t.1.mul_var(l.clone(), 1),
    }
}

/// How a construction counts the length of its connecting paths.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathConvention {
    /// `c_max` interior vertices, so `c_max + 1` edges (tree gadgets).
    InteriorVertices,
    /// `c_max` edges (path gadgets).
    Edges,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    Left,
    Right,
    Chain,
}

/// A copy of a template block; `vertices[i]` is the copy of template vertex
/// `i + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub template: usize,
    pub role: String,
    pub vertices: Vec<u32>,
}

impl Block {
    pub fn image(&self, template_vertex: u32) -> u32 {
        self.vertices[template_vertex as usize - 1]
    }
}

/// A connecting path, listed with both endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Connection {
    pub vertices: Vec<u32>,
    pub parent: Option<usize>,
    pub child: Option<usize>,
    pub side: Side,
}

/// A graph assembled from blocks and paths, with edge weights (unlisted
/// edges weigh 1) and named vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub weights: BTreeMap<(u32, u32), Weight>,
    pub blocks: Vec<Block>,
    pub paths: Vec<Connection>,
    pub marks: BTreeMap<String, u32>,
    pub c_max: u32,
    pub convention: PathConvention,
}

impl GadgetGraph {
    pub fn weight(&self, u: u32, v: u32) -> Weight {
        self.weights.get(&(u.min(v), u.max(v))).cloned().unwrap_or(Weight::Const(1))
    }

    pub fn mark(&self, name: &str) -> Option<u32> {
        self.marks.get(name).copied()
    }

    /// Blocks and block-to-block paths, for [`crate::decomp::gadget_decomp`].
    pub fn layout(&self) -> BlockPathLayout {
        BlockPathLayout {
            blocks: self.blocks.iter().map(|b| b.vertices.clone()).collect(),
            paths: self.paths.iter().filter(|p| p.parent.is_some() && p.child.is_some()).map(|p| p.vertices.clone()).collect(),
        }
    }

    /// Weight of a homomorphism `src -> self` given as a map indexed by
    /// `u - 1`: the product of the weights of the image edges.
    pub fn hom_term(&self, src: &Graph, map: &[u32]) -> Term {
        let mut t = (1, Monomial::one());
        for (u, v) in src.edges() {
            absorb(&mut t, &self.weight(map[u as usize - 1], map[v as usize - 1]));
        }
        t
    }
}

/// Incremental assembly of a [`GadgetGraph`].
pub(crate) struct Assembler {
    n: u32,
    edges: Vec<(u32, u32)>,
    weights: BTreeMap<(u32, u32), Weight>,
    blocks: Vec<Block>,
    paths: Vec<Connection>,
    marks: BTreeMap<String, u32>,
}

impl Assembler {
    pub(crate) fn new() -> Self {
        Assembler { n: 0, edges: Vec::new(), weights: BTreeMap::new(), blocks: Vec::new(), paths: Vec::new(), marks: BTreeMap::new() }
    }

    pub(crate) fn vertex(&mut self) -> u32 {
        self.n += 1;
        self.n
    }

    pub(crate) fn edge(&mut self, u: u32, v: u32, w: Weight) {
        self.edges.push((u, v));
        if w != Weight::Const(1) {
            self.weights.insert((u.min(v), u.max(v)), w);
        }
    }

    pub(crate) fn block(&mut self, g: &Gadget, template: usize, role: impl Into<String>) -> usize {
        let base = self.n;
        self.n += g.size();
        for (u, v) in g.graph.edges() {
            self.edges.push((base + u, base + v));
        }
        self.blocks.push(Block { template, role: role.into(), vertices: (base + 1..=self.n).collect() });
        self.blocks.len() - 1
    }

    /// Path from `a` to `b` with `edges` edges; the last edge gets `last`.
    pub(crate) fn path(&mut self, a: u32, b: u32, edges: u32, last: Weight) -> Vec<u32> {
        let mut seq = vec![a];
        for _ in 1..edges {
            let v = self.vertex();
            seq.push(v);
        }
        seq.push(b);
        for (i, w) in seq.windows(2).enumerate() {
            let wt = if i + 1 == seq.len() - 1 { last.clone() } else { Weight::one() };
            self.edge(w[0], w[1], wt);
        }
        seq
    }

    pub(crate) fn connect(&mut self, vertices: Vec<u32>, parent: Option<usize>, child: Option<usize>, side: Side) {
        self.paths.push(Connection { vertices, parent, child, side });
    }

    pub(crate) fn mark(&mut self, name: impl Into<String>, v: u32) {
        self.marks.insert(name.into(), v);
    }

    pub(crate) fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub(crate) fn finish(self, c_max: u32, convention: PathConvention) -> GadgetGraph {
        let graph = Graph::from_edges(self.n, self.edges).expect("assembled edges are in range and loop-free");
        GadgetGraph { graph, weights: self.weights, blocks: self.blocks, paths: self.paths, marks: self.marks, c_max, convention }
    }
}
