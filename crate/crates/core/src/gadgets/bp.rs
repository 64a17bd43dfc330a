use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use rand::Rng;

use super::{absorb, GadgetError, Term, Weight};
use crate::circuit::{Monomial, SparsePoly, VarLabel};
use crate::graph::Graph;
use crate::rings::Integers;

/// An arc from node `from` of layer `layer` to node `to` of layer
/// `layer + 1` (layers are 1-based).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arc {
    pub layer: usize,
    pub from: u32,
    pub to: u32,
    pub label: Weight,
}

/// A layered algebraic branching program. The source is a node of the first
/// layer and the sink a node of the last.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LayeredBP {
    layers: Vec<Vec<u32>>,
    arcs: Vec<Arc>,
    source: u32,
    sink: u32,
}

impl LayeredBP {
    pub fn new(layers: Vec<Vec<u32>>, arcs: Vec<Arc>, source: u32, sink: u32) -> Result<LayeredBP, GadgetError> {
        let mut layers = layers;
        for l in &mut layers {
            l.sort_unstable();
            l.dedup();
        }
        let bp = LayeredBP { layers, arcs, source, sink };
        bp.check()?;
        Ok(bp)
    }

    fn check(&self) -> Result<(), GadgetError> {
        let err = |m: String| Err(GadgetError::Bp(m));
        let k = self.layers.len();
        if k < 2 {
            return err(format!("{k} layers; need at least 2"));
        }
        if !self.layers[0].contains(&self.source) {
            return err(format!("source {} is not a node of layer 1", self.source));
        }
        if !self.layers[k - 1].contains(&self.sink) {
            return err(format!("sink {} is not a node of layer {k}", self.sink));
        }
        let mut seen = BTreeSet::new();
        for a in &self.arcs {
            if a.layer == 0 || a.layer >= k {
                return err(format!("arc leaves layer {} but arcs must join consecutive layers of 1..={k}", a.layer));
            }
            if !self.layers[a.layer - 1].contains(&a.from) || !self.layers[a.layer].contains(&a.to) {
                return err(format!("arc {} {} {} names an undeclared node", a.layer, a.from, a.to));
            }
            match &a.label {
                Weight::Var(VarLabel::ScalarY) => return err("label y is reserved for the cycle-closing edge".into()),
                Weight::Const(0) => return err(format!("arc {} {} {} has label 0; omit it instead", a.layer, a.from, a.to)),
                _ => {}
            }
            if !seen.insert((a.layer, a.from, a.to)) {
                return err(format!("duplicate arc {} {} {}", a.layer, a.from, a.to));
            }
        }
        Ok(())
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<u32>] {
        &self.layers
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn width(&self) -> usize {
        self.layers.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> u32 {
        self.layers.iter().map(|l| l.len() as u32).sum()
    }

    /// Global vertex id (1-based, layer by layer) of node `idx` of `layer`.
    pub fn vertex(&self, layer: usize, idx: u32) -> u32 {
        let before: usize = self.layers[..layer - 1].iter().map(Vec::len).sum();
        let pos = self.layers[layer - 1].binary_search(&idx).expect("declared node");
        (before + pos + 1) as u32
    }

    pub fn source_vertex(&self) -> u32 {
        self.vertex(1, self.source)
    }

    pub fn sink_vertex(&self) -> u32 {
        self.vertex(self.layers.len(), self.sink)
    }

    /// Underlying undirected graph on the global vertex ids, and arc labels
    /// keyed by `(min, max)` vertex pair.
    pub fn underlying(&self) -> (Graph, BTreeMap<(u32, u32), Weight>) {
        let mut g = Graph::new(self.node_count());
        let mut w = BTreeMap::new();
        for a in &self.arcs {
            let (u, v) = (self.vertex(a.layer, a.from), self.vertex(a.layer + 1, a.to));
            g.add_edge(u, v).expect("distinct layers");
            w.insert((u.min(v), u.max(v)), a.label.clone());
        }
        (g, w)
    }

    /// The term of every source-to-sink path, by depth-first enumeration.
    pub fn st_paths(&self) -> Vec<Term> {
        let mut out_arcs: BTreeMap<(usize, u32), Vec<&Arc>> = BTreeMap::new();
        for a in &self.arcs {
            out_arcs.entry((a.layer, a.from)).or_default().push(a);
        }
        let last = self.layers.len();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, u32, Term)> = vec![(1, self.source, (1, Monomial::one()))];
        while let Some((layer, node, term)) = stack.pop() {
            if layer == last {
                if node == self.sink {
                    out.push(term);
                }
                continue;
            }
            for a in out_arcs.get(&(layer, node)).into_iter().flatten() {
                let mut t = term.clone();
                absorb(&mut t, &a.label);
                stack.push((layer + 1, a.to, t));
            }
        }
        out.sort();
        out
    }

    /// The path polynomial `g`, computed layer by layer.
    pub fn path_polynomial(&self) -> SparsePoly<i128> {
        let z = Integers;
        let mut cur: BTreeMap<u32, SparsePoly<i128>> = BTreeMap::new();
        cur.insert(self.source, SparsePoly::constant(&z, 1));
        for layer in 1..self.layers.len() {
            let mut next: BTreeMap<u32, SparsePoly<i128>> = BTreeMap::new();
            for a in self.arcs.iter().filter(|a| a.layer == layer) {
                let Some(p) = cur.get(&a.from) else { continue };
                let factor = match &a.label {
                    Weight::Const(c) => SparsePoly::constant(&z, *c as i128),
                    Weight::Var(l) => SparsePoly::var(&z, l.clone()),
                };
                next.entry(a.to).or_insert_with(SparsePoly::zero).add_assign(&z, &p.mul(&z, &factor));
            }
            cur = next;
        }
        cur.remove(&self.sink).unwrap_or_else(SparsePoly::zero)
    }

    /// The same program with two extra single-node layers after the sink,
    /// joined by arcs of weight 1. The path polynomial is unchanged.
    pub fn padded(&self) -> LayeredBP {
        let mut layers = self.layers.clone();
        layers.push(vec![1]);
        layers.push(vec![1]);
        let k = self.layers.len();
        let mut arcs = self.arcs.clone();
        arcs.push(Arc { layer: k, from: self.sink, to: 1, label: Weight::one() });
        arcs.push(Arc { layer: k + 1, from: 1, to: 1, label: Weight::one() });
        LayeredBP { layers, arcs, source: self.source, sink: 1 }
    }

    /// A random program with one source and one sink, `1..=width` nodes in
    /// every inner layer and a fresh variable `X:i` on every arc. Every node
    /// lies on some source-to-sink path.
    pub fn random(rng: &mut impl Rng, layers: usize, width: usize) -> LayeredBP {
        assert!(layers >= 2 && width >= 1);
        let sizes: Vec<u32> =
            (0..layers).map(|i| if i == 0 || i + 1 == layers { 1 } else { rng.gen_range(1..=width as u32) }).collect();
        let mut arcs = Vec::new();
        let mut next_var = 1;
        for l in 0..layers - 1 {
            let (a, b) = (sizes[l], sizes[l + 1]);
            let mut chosen: BTreeSet<(u32, u32)> = BTreeSet::new();
            for i in 1..=a {
                for j in 1..=b {
                    if rng.gen_bool(0.5) {
                        chosen.insert((i, j));
                    }
                }
            }
            for i in 1..=a {
                if !chosen.iter().any(|&(x, _)| x == i) {
                    chosen.insert((i, rng.gen_range(1..=b)));
                }
            }
            for j in 1..=b {
                if !chosen.iter().any(|&(_, y)| y == j) {
                    chosen.insert((rng.gen_range(1..=a), j));
                }
            }
            for (i, j) in chosen {
                arcs.push(Arc { layer: l + 1, from: i, to: j, label: Weight::Var(VarLabel::Xi(next_var)) });
                next_var += 1;
            }
        }
        let layers = sizes.iter().map(|&s| (1..=s).collect()).collect();
        LayeredBP { layers, arcs, source: 1, sink: 1 }
    }

    /// `layers L`, `node l i`, `arc l i j label`, `source i`, `sink i`;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<LayeredBP, GadgetError> {
        let mut count: Option<usize> = None;
        let mut layers: Vec<Vec<u32>> = Vec::new();
        let mut arcs = Vec::new();
        let (mut source, mut sink) = (None, None);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| GadgetError::Parse { line, msg };
            let body = raw.split('#').next().unwrap_or("").trim();
            let toks: Vec<&str> = body.split_whitespace().collect();
            let num = |s: &str| s.parse::<u32>().map_err(|_| err(format!("bad number {s:?}")));
            let layer_of = |s: &str| -> Result<usize, GadgetError> {
                let l = num(s)? as usize;
                match count {
                    None => Err(err("`layers` must come first".into())),
                    Some(k) if l == 0 || l > k => Err(err(format!("layer {l} outside 1..={k}"))),
                    Some(_) => Ok(l),
                }
            };
            match toks.as_slice() {
                [] => {}
                ["layers", k] => {
                    if count.is_some() {
                        return Err(err("repeated `layers`".into()));
                    }
                    let k = num(k)? as usize;
                    count = Some(k);
                    layers = vec![Vec::new(); k];
                }
                ["node", l, i] => {
                    let l = layer_of(l)?;
                    layers[l - 1].push(num(i)?);
                }
                ["arc", l, i, j, label] => {
                    let layer = layer_of(l)?;
                    if Some(layer) == count {
                        return Err(err(format!("arc leaves the last layer {layer}")));
                    }
                    let label: Weight = label.parse().map_err(|e| err(format!("bad label: {e}")))?;
                    arcs.push(Arc { layer, from: num(i)?, to: num(j)?, label });
                }
                ["source", i] => source = Some(num(i)?),
                ["sink", i] => sink = Some(num(i)?),
                _ => return Err(err(format!("unrecognised record {body:?}"))),
            }
        }
        if count.is_none() {
            return Err(GadgetError::Parse { line: 0, msg: "missing `layers`".into() });
        }
        let source = source.ok_or(GadgetError::Parse { line: 0, msg: "missing `source`".into() })?;
        let sink = sink.ok_or(GadgetError::Parse { line: 0, msg: "missing `sink`".into() })?;
        LayeredBP::new(layers, arcs, source, sink)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("layers {}\n", self.layers.len());
        for (l, nodes) in self.layers.iter().enumerate() {
            for i in nodes {
                let _ = writeln!(s, "node {} {i}", l + 1);
            }
        }
        for a in &self.arcs {
            let _ = writeln!(s, "arc {} {} {} {}", a.layer, a.from, a.to, a.label);
        }
        let _ = writeln!(s, "source {}\nsink {}", self.source, self.sink);
        s
    }
}
