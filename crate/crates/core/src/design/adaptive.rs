//! Adaptive local measurement trees.
//!
//! A tree is a convex mixture of orders. Each order is a decision tree whose
//! internal nodes either measure one qubit in a Pauli basis and branch on the
//! outcome, or flip a classical coin. Leaves accept with a fixed probability.

use serde::{Deserialize, Serialize};

use crate::error::{QsvError, Result};
use crate::linalg::{check_qubits, kron, HermitianOperator, TOL};
use crate::pauli::Axis;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AdaptiveNode {
    Accept {
        probability: f64,
    },
    Measure {
        qubit: usize,
        axis: Axis,
        plus: Box<AdaptiveNode>,
        minus: Box<AdaptiveNode>,
    },
    Choice {
        branches: Vec<Branch>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub probability: f64,
    pub node: AdaptiveNode,
}

impl AdaptiveNode {
    pub fn accept() -> Self {
        AdaptiveNode::Accept { probability: 1.0 }
    }

    pub fn reject() -> Self {
        AdaptiveNode::Accept { probability: 0.0 }
    }

    pub fn measure(qubit: usize, axis: Axis, plus: AdaptiveNode, minus: AdaptiveNode) -> Self {
        AdaptiveNode::Measure {
            qubit,
            axis,
            plus: Box::new(plus),
            minus: Box::new(minus),
        }
    }

    pub fn choice(branches: Vec<(f64, AdaptiveNode)>) -> Self {
        AdaptiveNode::Choice {
            branches: branches
                .into_iter()
                .map(|(probability, node)| Branch { probability, node })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveOrder {
    pub weight: f64,
    pub root: AdaptiveNode,
}

/// Mixture of adaptive measurement orders on `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTree", into = "RawTree")]
pub struct AdaptiveTree {
    n: usize,
    orders: Vec<AdaptiveOrder>,
}

#[derive(Serialize, Deserialize)]
struct RawTree {
    n: usize,
    orders: Vec<AdaptiveOrder>,
}

impl TryFrom<RawTree> for AdaptiveTree {
    type Error = QsvError;
    fn try_from(raw: RawTree) -> Result<Self> {
        AdaptiveTree::new(raw.n, raw.orders)
    }
}

impl From<AdaptiveTree> for RawTree {
    fn from(t: AdaptiveTree) -> Self {
        RawTree {
            n: t.n,
            orders: t.orders,
        }
    }
}

/// One root-to-leaf path: the product of coin probabilities, the measured
/// `(qubit, axis, minus)` triples and the leaf's accept probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub weight: f64,
    pub measurements: Vec<(usize, Axis, bool)>,
    pub accept: f64,
}

impl Leaf {
    /// Projector onto the recorded outcomes, identity on unmeasured qubits.
    pub fn projector(&self, n: usize) -> Result<HermitianOperator> {
        let factor = |q: usize| {
            self.measurements
                .iter()
                .find(|(mq, _, _)| *mq == q)
                .map(|&(_, axis, minus)| axis.projector(minus))
                .unwrap_or_else(|| HermitianOperator::pauli(0))
        };
        let mut op = factor(0);
        for q in 1..n {
            op = kron(&op, &factor(q))?;
        }
        Ok(op)
    }
}

fn validate(node: &AdaptiveNode, n: usize, used: &mut Vec<usize>) -> Result<()> {
    match node {
        AdaptiveNode::Accept { probability } => {
            if !(*probability >= 0.0 && *probability <= 1.0) {
                return Err(QsvError::MalformedTree(format!(
                    "accept probability {probability}"
                )));
            }
        }
        AdaptiveNode::Measure {
            qubit, plus, minus, ..
        } => {
            if *qubit >= n {
                return Err(QsvError::MalformedTree(format!(
                    "qubit {qubit} out of range for {n}"
                )));
            }
            if used.contains(qubit) {
                return Err(QsvError::MalformedTree(format!(
                    "qubit {qubit} measured twice on one path"
                )));
            }
            used.push(*qubit);
            validate(plus, n, used)?;
            validate(minus, n, used)?;
            used.pop();
        }
        AdaptiveNode::Choice { branches } => {
            if branches.is_empty() {
                return Err(QsvError::MalformedTree("empty choice".into()));
            }
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            if branches.iter().any(|b| b.probability < 0.0) || (total - 1.0).abs() > TOL {
                return Err(QsvError::MalformedTree(format!(
                    "choice probabilities sum to {total}"
                )));
            }
            for b in branches {
                validate(&b.node, n, used)?;
            }
        }
    }
    Ok(())
}

fn collect_leaves(
    node: &AdaptiveNode,
    weight: f64,
    path: &mut Vec<(usize, Axis, bool)>,
    out: &mut Vec<Leaf>,
) {
    match node {
        AdaptiveNode::Accept { probability } => out.push(Leaf {
            weight,
            measurements: path.clone(),
            accept: *probability,
        }),
        AdaptiveNode::Measure {
            qubit,
            axis,
            plus,
            minus,
        } => {
            path.push((*qubit, *axis, false));
            collect_leaves(plus, weight, path, out);
            path.pop();
            path.push((*qubit, *axis, true));
            collect_leaves(minus, weight, path, out);
            path.pop();
        }
        AdaptiveNode::Choice { branches } => {
            for b in branches {
                if b.probability > 0.0 {
                    collect_leaves(&b.node, weight * b.probability, path, out);
                }
            }
        }
    }
}

impl AdaptiveTree {
    pub fn new(n: usize, orders: Vec<AdaptiveOrder>) -> Result<Self> {
        check_qubits(n)?;
        if orders.is_empty() {
            return Err(QsvError::MalformedTree("no orders".into()));
        }
        let total: f64 = orders.iter().map(|o| o.weight).sum();
        if orders.iter().any(|o| o.weight < 0.0) || (total - 1.0).abs() > TOL {
            return Err(QsvError::MalformedTree(format!(
                "order weights sum to {total}"
            )));
        }
        for o in &orders {
            validate(&o.root, n, &mut Vec::new())?;
        }
        Ok(Self { n, orders })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn orders(&self) -> &[AdaptiveOrder] {
        &self.orders
    }

    /// Leaves of each order, coin probabilities folded into the leaf weight.
    pub fn leaves(&self) -> Vec<Vec<Leaf>> {
        self.orders
            .iter()
            .map(|o| {
                let mut out = Vec::new();
                collect_leaves(&o.root, 1.0, &mut Vec::new(), &mut out);
                out
            })
            .collect()
    }
}

/// Effective operator `Σ_order w Σ_leaf (coin weight)(accept) P_path`.
pub fn evaluate_adaptive(tree: &AdaptiveTree) -> Result<HermitianOperator> {
    let n = tree.qubits();
    let mut omega = HermitianOperator::zeros(n)?;
    for (order, leaves) in tree.orders().iter().zip(tree.leaves()) {
        for leaf in leaves {
            let c = order.weight * leaf.weight * leaf.accept;
            if c != 0.0 {
                omega = &omega + &leaf.projector(n)?.scale(c);
            }
        }
    }
    Ok(omega)
}

/// One-way adaptive protocol for the three-qubit W state.
///
/// A uniformly chosen qubit is measured in Z. On `+` the other two share
/// `(|01⟩+|10⟩)/√2` and are tested with XX or YY, accepting even parity. On `−`
/// they are `|00⟩`: accept outright or test ZZ for `++`, each half the time.
pub fn adaptive_w3() -> AdaptiveTree {
    let parity = |a: usize, b: usize, axis: Axis| {
        AdaptiveNode::measure(
            a,
            axis,
            AdaptiveNode::measure(b, axis, AdaptiveNode::accept(), AdaptiveNode::reject()),
            AdaptiveNode::measure(b, axis, AdaptiveNode::reject(), AdaptiveNode::accept()),
        )
    };
    let orders = (0..3)
        .map(|d| {
            let others: Vec<usize> = (0..3).filter(|&q| q != d).collect();
            let (a, b) = (others[0], others[1]);
            let on_plus = AdaptiveNode::choice(vec![
                (0.5, parity(a, b, Axis::X)),
                (0.5, parity(a, b, Axis::Y)),
            ]);
            let zz = AdaptiveNode::measure(
                a,
                Axis::Z,
                AdaptiveNode::measure(b, Axis::Z, AdaptiveNode::accept(), AdaptiveNode::reject()),
                AdaptiveNode::reject(),
            );
            let on_minus = AdaptiveNode::choice(vec![(0.5, AdaptiveNode::accept()), (0.5, zz)]);
            AdaptiveOrder {
                weight: 1.0 / 3.0,
                root: AdaptiveNode::measure(d, Axis::Z, on_plus, on_minus),
            }
        })
        .collect();
    AdaptiveTree::new(3, orders).expect("fixed tree is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_gap;
    use crate::states::w_state;

    #[test]
    fn w3_tree_gap_and_target() {
        let tree = adaptive_w3();
        let omega = evaluate_adaptive(&tree).unwrap();
        let psi = w_state(3).unwrap();
        assert!((omega.expectation(psi.amplitudes()) - 1.0).abs() < 1e-12);
        assert!((spectral_gap(&omega).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn leaves_form_a_povm() {
        let tree = adaptive_w3();
        let id = HermitianOperator::identity(3).unwrap();
        for leaves in tree.leaves() {
            let mut sum = HermitianOperator::zeros(3).unwrap();
            for leaf in &leaves {
                sum = &sum + &leaf.projector(3).unwrap().scale(leaf.weight);
            }
            assert!(sum.approx_eq(&id, 1e-12));
        }
    }

    #[test]
    fn rejects_repeated_qubit() {
        let root = AdaptiveNode::measure(
            0,
            Axis::Z,
            AdaptiveNode::measure(0, Axis::X, AdaptiveNode::accept(), AdaptiveNode::reject()),
            AdaptiveNode::reject(),
        );
        let r = AdaptiveTree::new(1, vec![AdaptiveOrder { weight: 1.0, root }]);
        assert!(matches!(r, Err(QsvError::MalformedTree(_))));
    }

    #[test]
    fn json_roundtrip_validates() {
        let tree = adaptive_w3();
        let json = serde_json::to_string(&tree).unwrap();
        let back: AdaptiveTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tree);
        let bad = json.replacen("0.3333333333333333", "0.5", 1);
        assert!(serde_json::from_str::<AdaptiveTree>(&bad).is_err());
    }
}
