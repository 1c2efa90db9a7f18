use serde::{Deserialize, Serialize};

use crate::design::{table_settings, Protocol};
use crate::error::{QsvError, Result};
use crate::linalg::TOL;
use crate::pauli::{completeness, positivity_min, QuasiProbTable};

/// Fidelity inferred from the pass rate of a homogeneous protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub fidelity: f64,
    pub std_dev: f64,
    pub pass_count: u64,
    pub total: u64,
    pub scale: f64,
}

/// `F = (scale·f − (1−ν))/ν` from `pass_count` passes out of `total` tests.
///
/// The standard deviation is the binomial one, `scale·√(f(1−f))/(ν√N)`. At
/// `scale = 1` it equals `√((1−F)(F+1/ν−1))/√N` and never exceeds `1/(2ν√N)`.
pub fn fidelity_estimate(
    pass_count: u64,
    total: u64,
    nu: f64,
    scale: f64,
) -> Result<EstimationResult> {
    if total == 0 || pass_count > total {
        return Err(QsvError::InvalidParameter(format!(
            "need 0 <= pass_count <= total and total >= 1, got {pass_count}/{total}"
        )));
    }
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(QsvError::InvalidParameter(format!(
            "nu must lie in (0, 1], got {nu}"
        )));
    }
    if scale.is_nan() || scale < 1.0 {
        return Err(QsvError::InvalidParameter(format!(
            "scale must be at least 1, got {scale}"
        )));
    }
    let f = pass_count as f64 / total as f64;
    let fidelity = (scale * f - (1.0 - nu)) / nu;
    let root_n = (total as f64).sqrt();
    let bound = scale / (2.0 * nu * root_n);
    let std_dev = (scale * (f * (1.0 - f)).max(0.0).sqrt() / (nu * root_n)).min(bound);
    Ok(EstimationResult {
        fidelity,
        std_dev,
        pass_count,
        total,
        scale,
    })
}

/// Divides an overcomplete nonnegative table by its completeness `S`, giving
/// completeness 1. The returned scale is `S`.
pub fn rescale_for_estimation(table: &QuasiProbTable) -> Result<(QuasiProbTable, f64)> {
    let pmin = positivity_min(table);
    if pmin < -TOL {
        return Err(QsvError::NegativeEntries(pmin));
    }
    let s = completeness(table);
    if s <= 1.0 + TOL {
        return Err(QsvError::AlreadyComplete(s));
    }
    Ok((table.map(|p| p / s), s))
}

/// Nonadaptive protocol realising a rescaled table. Its operator is `Ω/scale`.
pub fn rescaled_protocol(table: &QuasiProbTable, scale: f64) -> Result<Protocol> {
    Protocol::rescaled(table.qubits(), table_settings(table)?, scale)
}
