//! Homogeneous protocols `(1−ν)𝟙 + ν|ψ⟩⟨ψ|`: largest local radius and the
//! identity-removal revision.

use crate::error::{QsvError, Result};
use crate::linalg::{HermitianOperator, TOL};
use crate::pauli::{completeness, quasi_prob, setting_label, QuasiProbTable, Transformation};
use crate::states::StateVector;

/// Entries of `p(𝟙)` at or below this are treated as zero.
const IDENTITY_SUPPORT_TOL: f64 = 1e-12;

/// A homogeneous protocol together with its quasi-probability table.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousDesign {
    pub nu: f64,
    pub table: QuasiProbTable,
}

impl HomogeneousDesign {
    pub fn efficiency(&self) -> f64 {
        1.0 / self.nu
    }
}

/// `(1−ν)𝟙 + ν|ψ⟩⟨ψ|` for `0 < ν ≤ 1`.
pub fn homogeneous_operator(psi: &StateVector, nu: f64) -> Result<HermitianOperator> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(QsvError::InvalidParameter(format!(
            "spectral gap must lie in (0, 1], got {nu}"
        )));
    }
    let id = HermitianOperator::identity(psi.qubits())?;
    Ok(&id.scale(1.0 - nu) + &psi.projector().scale(nu))
}

/// Largest `ν` keeping `(1−ν)p(𝟙) + νp(ψ)` entrywise nonnegative, without
/// checking completeness.
///
/// With `a = min_{p_i(𝟙) > 0} p_i(ψ)/p_i(𝟙)` the radius is `ν = 1/(1−a)`.
/// Entries where `p_i(𝟙)` vanishes must already be nonnegative in `p(ψ)`.
pub fn homogeneous_radius(psi: &StateVector, t: &Transformation) -> Result<HomogeneousDesign> {
    let n = psi.qubits();
    let p_id = quasi_prob(&HermitianOperator::identity(n)?, t);
    let p_psi = quasi_prob(&psi.projector(), t);
    let width = p_id.outcomes();

    let mut a = f64::INFINITY;
    for (idx, (&pi, &pp)) in p_id.values().iter().zip(p_psi.values()).enumerate() {
        if pi > IDENTITY_SUPPORT_TOL {
            a = a.min(pp / pi);
        } else if pp < -TOL {
            return Err(QsvError::NoLocalHomogeneous {
                setting: setting_label(idx / width, n),
                value: pp,
            });
        }
    }
    // a ≤ 0 for every pure state; a > 0 would put ν above 1
    let nu = if a <= 0.0 { 1.0 / (1.0 - a) } else { 1.0 };
    let table = p_id.combine(1.0 - nu, &p_psi, nu);
    Ok(HomogeneousDesign { nu, table })
}

/// Maximal-`ν` homogeneous protocol that is local under nonadaptive Pauli
/// projections. A completeness violation is returned as an error carrying the
/// positive design so the caller can fall back to an LOCC check.
pub fn max_homogeneous_nu(psi: &StateVector, t: &Transformation) -> Result<HomogeneousDesign> {
    let design = homogeneous_radius(psi, t)?;
    let s = completeness(&design.table);
    if s > 1.0 + TOL {
        return Err(QsvError::CompletenessViolation {
            completeness: s,
            bound: 1.0,
            design: Box::new(design),
        });
    }
    Ok(design)
}

/// Identity weight removed from a table by [`revise`].
#[derive(Debug, Clone, PartialEq)]
pub struct Revision {
    /// `a = Σ_i min_j p_{i,j}`.
    pub a: f64,
    pub table: QuasiProbTable,
}

impl Revision {
    /// `ν' = ν/(1−a)` for a homogeneous input with gap `ν`.
    pub fn revised_nu(&self, nu: f64) -> f64 {
        nu / (1.0 - self.a)
    }
}

/// Removes the identity hidden in each setting: `p'_{i,j} = (p_{i,j} − min_j p_{i,j})/(1−a)`.
///
/// Since the outcomes of one setting sum to 𝟙, the reconstructed operator
/// becomes `(Π − a𝟙)/(1−a)`. `a` may be negative (tables with negative
/// entries, such as a bare target projector), in which case the result is
/// still entrywise nonnegative.
pub fn revise(table: &QuasiProbTable) -> Result<Revision> {
    let mins: Vec<f64> = table
        .rows()
        .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let a: f64 = mins.iter().sum();
    if a >= 1.0 - TOL {
        return Err(QsvError::CannotRevise(a));
    }
    let width = table.outcomes();
    let values = table
        .values()
        .iter()
        .enumerate()
        .map(|(idx, &p)| ((p - mins[idx / width]) / (1.0 - a)).max(0.0))
        .collect();
    Ok(Revision {
        a,
        table: QuasiProbTable::from_values(table.qubits(), values, table.transformation())?,
    })
}

/// Revises a homogeneous design, boosting its gap to `ν/(1−a)`.
pub fn revise_design(design: &HomogeneousDesign) -> Result<(Revision, HomogeneousDesign)> {
    let rev = revise(&design.table)?;
    let nu = rev.revised_nu(design.nu);
    let table = rev.table.clone();
    Ok((rev, HomogeneousDesign { nu, table }))
}

/// Homogeneous protocol for an arbitrary identity row `t₀`: revise the bare
/// target table, giving `(|ψ⟩⟨ψ| − a𝟙)/(1−a)` with `ν = 1/(1−a)`.
pub fn general_homogeneous(
    psi: &StateVector,
    t: &Transformation,
) -> Result<(Revision, HomogeneousDesign)> {
    let target = quasi_prob(&psi.projector(), t);
    let rev = revise(&target)?;
    let nu = rev.revised_nu(1.0);
    let table = rev.table.clone();
    Ok((rev, HomogeneousDesign { nu, table }))
}
