use std::collections::HashMap;

use super::{Circuit, CircuitError, Gate, VarLabel};

/// Incremental circuit construction with light folding.
///
/// Constants and inputs are shared per value/label. Sums drop zero operands
/// and products drop unit operands; a product with a zero operand becomes the
/// shared zero gate, and single-operand results alias their operand.
#[derive(Default, Debug)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    consts: HashMap<i64, usize>,
    inputs: HashMap<VarLabel, usize>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn constant(&mut self, c: i64) -> usize {
        if let Some(&id) = self.consts.get(&c) {
            return id;
        }
        let id = self.push(Gate::Const(c));
        self.consts.insert(c, id);
        id
    }

    pub fn zero(&mut self) -> usize {
        self.constant(0)
    }

    pub fn one(&mut self) -> usize {
        self.constant(1)
    }

    pub fn input(&mut self, label: VarLabel) -> usize {
        if let Some(&id) = self.inputs.get(&label) {
            return id;
        }
        let id = self.push(Gate::Input(label.clone()));
        self.inputs.insert(label, id);
        id
    }

    fn is_const(&self, id: usize, c: i64) -> bool {
        self.gates[id] == Gate::Const(c)
    }

    pub fn add(&mut self, children: Vec<usize>) -> usize {
        let kept: Vec<usize> = children.into_iter().filter(|&c| !self.is_const(c, 0)).collect();
        match kept.len() {
            0 => self.zero(),
            1 => kept[0],
            _ => self.push(Gate::Add(kept)),
        }
    }

    pub fn mul(&mut self, children: Vec<usize>) -> usize {
        if children.iter().any(|&c| self.is_const(c, 0)) {
            return self.zero();
        }
        let kept: Vec<usize> = children.into_iter().filter(|&c| !self.is_const(c, 1)).collect();
        match kept.len() {
            0 => self.one(),
            1 => kept[0],
            _ => self.push(Gate::Mul(kept)),
        }
    }

    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn finish(self, output: usize) -> Result<Circuit, CircuitError> {
        Circuit::new(self.gates, output)
    }
}
