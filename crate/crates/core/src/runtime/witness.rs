use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{QsvError, Result};
use crate::linalg::{
    hermitian_eigenvalues, partial_trace, HermitianOperator, OperatorDocument, C64, PROTOCOL_TOL,
};
use crate::states::StateVector;

/// Largest squared Schmidt coefficient over all bipartitions.
pub fn compute_kappa(psi: &StateVector) -> Result<f64> {
    let n = psi.qubits();
    if n < 2 {
        return Err(QsvError::QubitRange { n, min: 2, max: 8 });
    }
    let rho = psi.projector();
    let mut kappa: f64 = 0.0;
    // subsets containing qubit 0 cover every cut once
    for mask in (1..1usize << n).filter(|m| m & 1 == 1 && *m != (1 << n) - 1) {
        let side: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        let other: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 0).collect();
        let keep = if side.len() <= other.len() {
            side
        } else {
            other
        };
        let reduced = partial_trace(&rho, &keep)?;
        kappa = kappa.max(hermitian_eigenvalues(&reduced).largest());
    }
    Ok(kappa)
}

/// `W = κ𝟙 − |ψ⟩⟨ψ|` with its expectation on the target.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub kappa: f64,
    pub operator: HermitianOperator,
    pub expectation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub kappa: f64,
    pub expectation: f64,
    pub operator: OperatorDocument,
}

impl WitnessReport {
    pub fn to_document(&self) -> WitnessDocument {
        WitnessDocument {
            kappa: self.kappa,
            expectation: self.expectation,
            operator: self.operator.to_document(),
        }
    }
}

pub fn witness(psi: &StateVector) -> Result<WitnessReport> {
    let kappa = compute_kappa(psi)?;
    let id = HermitianOperator::identity(psi.qubits())?;
    let operator = &id.scale(kappa) - &psi.projector();
    let expectation = operator.expectation(psi.amplitudes());
    Ok(WitnessReport {
        kappa,
        operator,
        expectation,
    })
}

/// `tr(Wρ)`.
pub fn witness_expectation(w: &HermitianOperator, rho: &HermitianOperator) -> Result<f64> {
    if w.dim() != rho.dim() {
        return Err(QsvError::DimensionMismatch {
            expected: w.dim(),
            found: rho.dim(),
        });
    }
    Ok(w.trace_product(rho))
}

/// `(κ + (1−ν)/ν)𝟙 − Ω/ν` for a homogeneous `Ω` with gap `ν`.
pub fn witness_from_protocol(
    omega_hom: &HermitianOperator,
    nu: f64,
    kappa: f64,
) -> Result<HermitianOperator> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(QsvError::InvalidParameter(format!(
            "nu must lie in (0, 1], got {nu}"
        )));
    }
    let spec = hermitian_eigenvalues(omega_hom);
    let homogeneous = (spec.largest() - 1.0).abs() <= PROTOCOL_TOL
        && spec.eigenvalues[1..]
            .iter()
            .all(|l| (l - (1.0 - nu)).abs() <= PROTOCOL_TOL);
    if !homogeneous {
        return Err(QsvError::NotHomogeneous(nu));
    }
    let id = HermitianOperator::identity(omega_hom.qubits())?;
    Ok(&id.scale(kappa + (1.0 - nu) / nu) - &omega_hom.scale(1.0 / nu))
}

/// Product of independent single-qubit states, each from a normalized
/// complex Gaussian pair.
pub fn random_product_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector> {
    let mut qubit = || {
        let amps: Vec<C64> = (0..2)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        StateVector::from_amplitudes(&amps)
    };
    let mut state = qubit()?;
    for _ in 1..n {
        state = state.tensor(&qubit()?)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::homogeneous_operator;
    use crate::states::{bell, ghz, w_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kappa_values() {
        assert!((compute_kappa(&bell()).unwrap() - 0.5).abs() < 1e-12);
        for n in 2..=5 {
            assert!((compute_kappa(&ghz(n).unwrap()).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!((compute_kappa(&w_state(3).unwrap()).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let one = StateVector::basis(&[0]).unwrap();
        assert!(compute_kappa(&one).is_err());
    }

    #[test]
    fn w3_witness_values() {
        let psi = w_state(3).unwrap();
        let r = witness(&psi).unwrap();
        assert!((r.expectation + 1.0 / 3.0).abs() < 1e-12);
        let zero = StateVector::basis(&[0, 0, 0]).unwrap().projector();
        assert!((witness_expectation(&r.operator, &zero).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn protocol_witness_identity() {
        let psi = bell();
        let omega = homogeneous_operator(&psi, 2.0 / 3.0).unwrap();
        let w = witness_from_protocol(&omega, 2.0 / 3.0, 0.5).unwrap();
        assert!(w.approx_eq(&witness(&psi).unwrap().operator, 1e-9));

        let proj = psi.projector();
        let w1 = witness_from_protocol(&proj, 1.0, 0.5).unwrap();
        let id = HermitianOperator::identity(2).unwrap();
        assert!(w1.approx_eq(&(&id.scale(0.5) - &proj), 1e-12));

        assert!(matches!(
            witness_from_protocol(&omega, 0.5, 0.5),
            Err(QsvError::NotHomogeneous(_))
        ));
    }

    #[test]
    fn product_states_are_normalized_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_product_state(3, &mut rng).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(compute_kappa(&s).unwrap() > 1.0 - 1e-9);
    }
}
