use super::{Circuit, CircuitError, Gate, Monomial};

/// One parse tree of a multiplicatively disjoint circuit.
///
/// `choices` lists, for every included addition gate, the position of the
/// selected child. `coeff` is the product of constant leaves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseTree {
    pub gates: Vec<usize>,
    pub choices: Vec<(usize, usize)>,
    pub coeff: i64,
    pub monomial: Monomial,
}

impl Circuit {
    /// Number of parse trees per gate, saturating at `u128::MAX`.
    fn parse_tree_counts(&self) -> Vec<u128> {
        let mut counts = vec![0u128; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            counts[id] = match g {
                Gate::Const(_) | Gate::Input(_) => 1,
                Gate::Add(cs) => cs.iter().fold(0u128, |a, &c| a.saturating_add(counts[c])),
                Gate::Mul(cs) => cs.iter().fold(1u128, |a, &c| a.saturating_mul(counts[c])),
            };
        }
        counts
    }

    pub fn parse_tree_count(&self) -> u128 {
        self.parse_tree_counts()[self.output]
    }

    /// Lists every parse tree with its monomial. Children of an addition
    /// gate are distinguished by position, so `Add(g, g)` yields both copies.
    pub fn enumerate_parse_trees(&self, bound: usize) -> Result<Vec<ParseTree>, CircuitError> {
        if !self.check_mult_disjoint() {
            return Err(CircuitError::NotMultDisjoint);
        }
        let count = self.parse_tree_count();
        if count > bound as u128 {
            return Err(CircuitError::TooManyParseTrees { count, bound });
        }
        let mut memo: Vec<Option<Vec<ParseTree>>> = vec![None; self.gates.len()];
        Ok(self.trees_at(self.output, &mut memo))
    }

    fn trees_at(&self, id: usize, memo: &mut Vec<Option<Vec<ParseTree>>>) -> Vec<ParseTree> {
        if let Some(t) = &memo[id] {
            return t.clone();
        }
        let out = match &self.gates[id] {
            Gate::Const(c) => vec![ParseTree {
                gates: vec![id],
                choices: Vec::new(),
                coeff: *c,
                monomial: Monomial::one(),
            }],
            Gate::Input(l) => vec![ParseTree {
                gates: vec![id],
                choices: Vec::new(),
                coeff: 1,
                monomial: Monomial::var(l.clone()),
            }],
            Gate::Add(cs) => {
                let mut out = Vec::new();
                for (pos, &c) in cs.iter().enumerate() {
                    for mut t in self.trees_at(c, memo) {
                        t.gates.push(id);
                        t.choices.push((id, pos));
                        out.push(t);
                    }
                }
                out
            }
            Gate::Mul(cs) => {
                let mut acc = vec![ParseTree {
                    gates: vec![id],
                    choices: Vec::new(),
                    coeff: 1,
                    monomial: Monomial::one(),
                }];
                for &c in cs {
                    let sub = self.trees_at(c, memo);
                    let mut next = Vec::with_capacity(acc.len() * sub.len());
                    for a in &acc {
                        for s in &sub {
                            let mut gates = a.gates.clone();
                            gates.extend_from_slice(&s.gates);
                            let mut choices = a.choices.clone();
                            choices.extend_from_slice(&s.choices);
                            next.push(ParseTree {
                                gates,
                                choices,
                                coeff: a.coeff * s.coeff,
                                monomial: a.monomial.mul(&s.monomial),
                            });
                        }
                    }
                    acc = next;
                }
                acc
            }
        };
        let out: Vec<ParseTree> = out
            .into_iter()
            .map(|mut t| {
                t.gates.sort_unstable();
                t.choices.sort_unstable();
                t
            })
            .collect();
        memo[id] = Some(out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::VarLabel;

    fn v(s: &str) -> VarLabel {
        VarLabel::free(s)
    }

    fn monomials(c: &Circuit) -> Vec<String> {
        let mut m: Vec<String> =
            c.enumerate_parse_trees(100).unwrap().iter().map(|t| t.monomial.to_string()).collect();
        m.sort();
        m
    }

    #[test]
    fn product_has_one_tree() {
        let c = Circuit::new(vec![Gate::Input(v("x")), Gate::Input(v("y1")), Gate::Mul(vec![0, 1])], 2)
            .unwrap();
        assert_eq!(monomials(&c), ["x*y1"]);
    }

    #[test]
    fn sum_has_one_tree_per_child() {
        let c = Circuit::new(vec![Gate::Input(v("x")), Gate::Input(v("y1")), Gate::Add(vec![0, 1])], 2)
            .unwrap();
        assert_eq!(monomials(&c), ["x", "y1"]);
    }

    #[test]
    fn product_of_sums() {
        let c = Circuit::new(
            vec![
                Gate::Input(v("x")),
                Gate::Input(v("y1")),
                Gate::Input(v("u")),
                Gate::Input(v("v")),
                Gate::Add(vec![0, 1]),
                Gate::Add(vec![2, 3]),
                Gate::Mul(vec![4, 5]),
            ],
            6,
        )
        .unwrap();
        assert_eq!(monomials(&c), ["u*x", "u*y1", "v*x", "v*y1"]);
        let trees = c.enumerate_parse_trees(4).unwrap();
        assert!(trees.iter().all(|t| t.gates.len() == 5 && t.choices.len() == 2));
        assert!(matches!(
            c.enumerate_parse_trees(3),
            Err(CircuitError::TooManyParseTrees { count: 4, bound: 3 })
        ));
    }

    #[test]
    fn refuses_shared_products() {
        let c = Circuit::new(vec![Gate::Input(v("x")), Gate::Mul(vec![0, 0])], 1).unwrap();
        assert_eq!(c.enumerate_parse_trees(10), Err(CircuitError::NotMultDisjoint));
    }
}
