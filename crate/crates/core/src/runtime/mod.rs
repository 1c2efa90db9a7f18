//! Sample complexity, Monte-Carlo verification, fidelity estimation and witnesses.

mod estimate;
mod simulate;
mod witness;

pub use estimate::{
    fidelity_estimate, rescale_for_estimation, rescaled_protocol, EstimationResult,
};
pub use simulate::{
    simulate_counts, simulate_mixed, simulate_verification, SimulationReport, Source,
};
pub use witness::{
    compute_kappa, random_product_state, witness, witness_expectation, witness_from_protocol,
    WitnessDocument, WitnessReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{QsvError, Result};
use crate::linalg::{eigh, HermitianOperator, C64, PROTOCOL_TOL, TOL};
use crate::states::StateVector;

/// Number of copies needed to reject an ε-far state with confidence `1 − γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationPlan {
    pub epsilon: f64,
    pub gamma: f64,
    pub nu: f64,
    pub copies: u64,
}

impl VerificationPlan {
    pub fn new(epsilon: f64, gamma: f64, nu: f64) -> Result<Self> {
        let copies = required_copies(epsilon, gamma, nu)?;
        Ok(Self {
            epsilon,
            gamma,
            nu,
            copies,
        })
    }
}

/// Smallest `N` with `(1 − νε)^N ≤ γ`, i.e. `⌈ln(1/γ) / ln(1/(1−νε))⌉`.
pub fn required_copies(epsilon: f64, gamma: f64, nu: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(QsvError::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(QsvError::InvalidParameter(format!(
            "gamma must lie in (0, 1], got {gamma}"
        )));
    }
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(QsvError::InvalidParameter(format!(
            "nu must lie in (0, 1], got {nu}"
        )));
    }
    let per_copy = -(-nu * epsilon).ln_1p();
    let exact = -gamma.ln() / per_copy;
    // absorb rounding when the ratio is an integer
    Ok((exact - 1e-9 * exact.max(1.0)).ceil().max(0.0) as u64)
}

/// `√(1−ε)|ψ⟩ + √ε|φ⟩` with `φ` in the second eigenspace of `Ω`, orthogonal to `ψ`.
/// A single test passes it with probability exactly `1 − εν`.
pub fn worst_case_bad_state(
    omega: &HermitianOperator,
    psi: &StateVector,
    epsilon: f64,
) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(QsvError::InvalidParameter(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    if omega.dim() != psi.dim() {
        return Err(QsvError::DimensionMismatch {
            expected: omega.dim(),
            found: psi.dim(),
        });
    }
    let eig = eigh(omega);
    if (eig.values[0] - 1.0).abs() > PROTOCOL_TOL {
        return Err(QsvError::InvalidProtocol(eig.values[0]));
    }
    if eig.values.len() < 2 || eig.values[0] - eig.values[1] < TOL {
        return Err(QsvError::DegenerateTopEigenvalue);
    }
    if (omega.expectation(psi.amplitudes()) - 1.0).abs() > TOL {
        return Err(QsvError::InvalidParameter(
            "target is not the accepted eigenvector".into(),
        ));
    }
    let amps = psi.amplitudes();
    let mut phi = eig.vectors[1].clone();
    let overlap: C64 = amps.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
    phi.iter_mut()
        .zip(amps)
        .for_each(|(p, a)| *p -= overlap * a);
    let norm = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    phi.iter_mut().for_each(|p| *p /= norm);

    let (c, s) = ((1.0 - epsilon).sqrt(), epsilon.sqrt());
    let mixed: Vec<C64> = amps.iter().zip(&phi).map(|(a, p)| a * c + p * s).collect();
    StateVector::from_amplitudes(&mixed)
}
