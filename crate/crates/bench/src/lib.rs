//! Shared fixtures for the benchmarks.

use qsv_core::design::{max_homogeneous_nu, protocol_from_table, revise_design, Protocol};
use qsv_core::runtime::worst_case_bad_state;
use qsv_core::states::{ghz, w_state};
use qsv_core::{StateVector, Transformation};

/// GHZ target with its revised homogeneous protocol.
pub fn ghz_protocol(n: usize) -> (StateVector, Protocol) {
    let psi = ghz(n).expect("valid size");
    let d = max_homogeneous_nu(&psi, &Transformation::symmetric()).expect("local design");
    let (_, revised) = revise_design(&d).expect("revisable");
    let p = protocol_from_table(&revised.table).expect("complete table");
    (psi, p)
}

/// A state at infidelity `epsilon` that the protocol accepts least often.
pub fn bad_state(protocol: &Protocol, psi: &StateVector, epsilon: f64) -> StateVector {
    worst_case_bad_state(protocol.operator(), psi, epsilon).expect("nondegenerate")
}

pub fn w(n: usize) -> StateVector {
    w_state(n).expect("valid size")
}
