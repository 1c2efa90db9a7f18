use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{Protocol, ProtocolKind};
use crate::error::{QsvError, Result};
use crate::linalg::{eigh, HermitianOperator, C64, TOL};
use crate::pauli::setting_amplitudes;
use crate::states::StateVector;

/// Outcome probabilities below this are dropped.
const PROB_FLOOR: f64 = 1e-15;

/// State fed to the verifier, one identical copy per test.
#[derive(Debug, Clone)]
pub enum Source {
    Pure(StateVector),
    Mixed(HermitianOperator),
}

impl Source {
    fn qubits(&self) -> usize {
        match self {
            Source::Pure(s) => s.qubits(),
            Source::Mixed(rho) => rho.qubits(),
        }
    }
}

impl From<StateVector> for Source {
    fn from(s: StateVector) -> Self {
        Source::Pure(s)
    }
}

/// Ensemble `{(p_k, |v_k⟩)}` of the source.
fn ensemble(source: &Source) -> Result<Vec<(f64, Vec<C64>)>> {
    match source {
        Source::Pure(s) => Ok(vec![(1.0, s.amplitudes().to_vec())]),
        Source::Mixed(rho) => {
            if (rho.trace() - 1.0).abs() > TOL {
                return Err(QsvError::InvalidParameter(format!(
                    "density matrix has trace {}",
                    rho.trace()
                )));
            }
            let eig = eigh(rho);
            if let Some(&bad) = eig.values.iter().find(|&&l| l < -TOL) {
                return Err(QsvError::InvalidParameter(format!(
                    "density matrix has eigenvalue {bad}"
                )));
            }
            Ok(eig
                .values
                .into_iter()
                .zip(eig.vectors)
                .filter(|(l, _)| *l > PROB_FLOOR)
                .collect())
        }
    }
}

struct Branch {
    outcomes: WeightedIndex<f64>,
    pass: Vec<f64>,
}

/// Per-copy sampler: pick a branch, draw a measurement record, accept with its pass probability.
struct Sampler {
    branches: WeightedIndex<f64>,
    table: Vec<Branch>,
}

fn floor(p: f64) -> f64 {
    if p < PROB_FLOOR {
        0.0
    } else {
        p
    }
}

impl Sampler {
    fn compile(protocol: &Protocol, source: &Source) -> Result<Self> {
        if source.qubits() != protocol.qubits() {
            return Err(QsvError::DimensionMismatch {
                expected: protocol.qubits(),
                found: source.qubits(),
            });
        }
        let states = ensemble(source)?;
        let weights: Vec<f64>;
        let table: Vec<Branch>;
        if let Some(tree) = protocol.adaptive_tree() {
            let n = tree.qubits();
            weights = tree.orders().iter().map(|o| o.weight).collect();
            table = tree
                .leaves()
                .into_iter()
                .map(|leaves| {
                    let mut probs = Vec::with_capacity(leaves.len());
                    for leaf in &leaves {
                        let proj = leaf.projector(n)?;
                        let p: f64 = states.iter().map(|(w, v)| w * proj.expectation(v)).sum();
                        probs.push(floor(leaf.weight * p));
                    }
                    Ok(Branch {
                        outcomes: WeightedIndex::new(&probs)
                            .map_err(|e| QsvError::MalformedTree(e.to_string()))?,
                        pass: leaves.iter().map(|l| l.accept).collect(),
                    })
                })
                .collect::<Result<_>>()?;
        } else {
            weights = protocol.settings().iter().map(|s| s.weight).collect();
            table = protocol
                .settings()
                .par_iter()
                .map(|s| {
                    let mut probs = vec![0.0; 1 << protocol.qubits()];
                    for (w, v) in &states {
                        for (p, a) in probs.iter_mut().zip(setting_amplitudes(v, &s.axes)) {
                            *p += w * a.norm_sqr();
                        }
                    }
                    let probs: Vec<f64> = probs.into_iter().map(floor).collect();
                    Ok(Branch {
                        outcomes: WeightedIndex::new(&probs)
                            .map_err(|e| QsvError::MalformedProtocol(e.to_string()))?,
                        pass: s.pass.clone(),
                    })
                })
                .collect::<Result<_>>()?;
        }
        Ok(Self {
            branches: WeightedIndex::new(&weights)
                .map_err(|e| QsvError::MalformedProtocol(e.to_string()))?,
            table,
        })
    }

    fn copy_passes<R: Rng>(&self, rng: &mut R) -> bool {
        let branch = &self.table[self.branches.sample(rng)];
        let z = branch.pass[branch.outcomes.sample(rng)];
        z >= 1.0 || (z > 0.0 && rng.random::<f64>() < z)
    }
}

/// Number of trials, out of `trials`, in which all `copies` copies pass.
///
/// Trial `t` draws from ChaCha8 seeded with `seed` on stream `t`, so the
/// count does not depend on how trials are scheduled across threads.
pub fn simulate_counts(
    protocol: &Protocol,
    source: &Source,
    copies: u64,
    trials: u64,
    seed: u64,
) -> Result<u64> {
    if copies == 0 || trials == 0 {
        return Err(QsvError::InvalidParameter(
            "copies and trials must be at least 1".into(),
        ));
    }
    let sampler = Sampler::compile(protocol, source)?;
    let accepted = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            (0..copies).all(|_| sampler.copy_passes(&mut rng))
        })
        .count();
    Ok(accepted as u64)
}

/// Fraction of trials in which every copy of `state` passes.
pub fn simulate_verification(
    protocol: &Protocol,
    state: &StateVector,
    copies: u64,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    let hits = simulate_counts(protocol, &Source::Pure(state.clone()), copies, trials, seed)?;
    Ok(hits as f64 / trials as f64)
}

/// As [`simulate_verification`] for a density-matrix source.
pub fn simulate_mixed(
    protocol: &Protocol,
    rho: &HermitianOperator,
    copies: u64,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    let hits = simulate_counts(protocol, &Source::Mixed(rho.clone()), copies, trials, seed)?;
    Ok(hits as f64 / trials as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub protocol: ProtocolKind,
    pub epsilon: f64,
    pub gamma: f64,
    pub nu: f64,
    pub copies: u64,
    pub trials: u64,
    pub seed: u64,
    pub acceptance_rate: f64,
}
