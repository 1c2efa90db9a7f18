//! Protocol design: locality checks, homogeneous constructions, revision,
//! inhomogeneous and adaptive fallbacks.

mod adaptive;
mod homogeneous;
mod locality;
mod protocol;

pub use adaptive::{
    adaptive_w3, evaluate_adaptive, AdaptiveNode, AdaptiveOrder, AdaptiveTree, Branch, Leaf,
};
pub use homogeneous::{
    general_homogeneous, homogeneous_operator, homogeneous_radius, max_homogeneous_nu, revise,
    revise_design, HomogeneousDesign, Revision,
};
pub use locality::{check, check_local, check_locc, LocalityMode, LocalityVerdict};
pub use protocol::{
    inhomogeneous_fallback, protocol_from_table, stabilizer_protocol, table_settings, Protocol,
    ProtocolDocument, ProtocolKind, Setting, SettingDocument, StabilizerSet,
};

use crate::error::{QsvError, Result};
use crate::linalg::check_qubits;

/// Closed-form `1/ν` of the optimal nonadaptive homogeneous GHZ protocol:
/// `(3ⁿ + 2ⁿ − 1)/2ⁿ`.
pub fn ghz_closed_form(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(QsvError::QubitRange { n, min: 2, max: 8 });
    }
    check_qubits(n)?;
    let (three, two) = (3f64.powi(n as i32), 2f64.powi(n as i32));
    Ok((three + two - 1.0) / two)
}

/// Lower bound on `ν` over all n-qubit states: `1/(2ⁿ − 2^(1−n) + 1)`.
pub fn worst_case_bound(n: usize) -> Result<f64> {
    check_qubits(n)?;
    let two = 2f64.powi(n as i32);
    Ok(1.0 / (two - 2.0 / two + 1.0))
}

/// Lower bound on any entry of a pure-state table under the symmetric
/// transformation: `(2 − 4ⁿ)/(2ⁿ3ⁿ)`.
pub fn min_entry_bound(n: usize) -> Result<f64> {
    check_qubits(n)?;
    let n = n as i32;
    Ok((2.0 - 4f64.powi(n)) / (2f64.powi(n) * 3f64.powi(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((ghz_closed_form(3).unwrap() - 17.0 / 4.0).abs() < 1e-12);
        assert!((1.0 / ghz_closed_form(2).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((worst_case_bound(1).unwrap() - 0.5).abs() < 1e-12);
        assert!((worst_case_bound(2).unwrap() - 2.0 / 9.0).abs() < 1e-12);
        assert!(ghz_closed_form(1).is_err());
        assert!(worst_case_bound(9).is_err());
        assert!((min_entry_bound(1).unwrap() + 1.0 / 3.0).abs() < 1e-12);
    }
}
