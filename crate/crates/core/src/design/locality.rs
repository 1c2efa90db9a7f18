use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QsvError, Result};
use crate::linalg::TOL;
use crate::pauli::{completeness, positivity_min, QuasiProbTable};

/// Measurement model the completeness bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum LocalityMode {
    Nonadaptive,
    /// Adaptive local measurements with `s`-outcome POVMs.
    Locc {
        s: u32,
    },
}

impl LocalityMode {
    /// `1` nonadaptively, `s^(n−1)` under LOCC.
    pub fn bound(self, n: usize) -> f64 {
        match self {
            LocalityMode::Nonadaptive => 1.0,
            LocalityMode::Locc { s } => (s as f64).powi(n as i32 - 1),
        }
    }
}

impl fmt::Display for LocalityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalityMode::Nonadaptive => write!(f, "nonadaptive"),
            LocalityMode::Locc { s } => write!(f, "locc({s})"),
        }
    }
}

impl FromStr for LocalityMode {
    type Err = QsvError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "nonadaptive" {
            return Ok(LocalityMode::Nonadaptive);
        }
        if s == "locc" {
            return Ok(LocalityMode::Locc { s: 2 });
        }
        s.strip_prefix("locc(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.parse::<u32>().ok())
            .filter(|&k| k >= 2)
            .map(|k| LocalityMode::Locc { s: k })
            .ok_or_else(|| QsvError::Parse {
                pos: 0,
                message: format!("unknown locality mode '{s}' (nonadaptive, locc, locc(<s>))"),
            })
    }
}

impl From<LocalityMode> for String {
    fn from(m: LocalityMode) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for LocalityMode {
    type Error = QsvError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Outcome of the positivity and completeness checks on a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityVerdict {
    pub positivity_min: f64,
    pub completeness: f64,
    pub bound: f64,
    pub local: bool,
    pub mode: LocalityMode,
}

fn verdict(table: &QuasiProbTable, mode: LocalityMode) -> LocalityVerdict {
    let pmin = positivity_min(table);
    let s = completeness(table);
    let bound = mode.bound(table.qubits());
    LocalityVerdict {
        positivity_min: pmin,
        completeness: s,
        bound,
        local: pmin >= -TOL && s <= bound + TOL,
        mode,
    }
}

/// Nonadaptive locality: all entries nonnegative and `S ≤ 1`.
pub fn check_local(table: &QuasiProbTable) -> LocalityVerdict {
    verdict(table, LocalityMode::Nonadaptive)
}

/// LOCC feasibility with `s`-outcome local measurements: nonnegative and `S ≤ s^(n−1)`.
pub fn check_locc(table: &QuasiProbTable, s: u32) -> Result<LocalityVerdict> {
    if s < 2 {
        return Err(QsvError::InvalidParameter(format!(
            "LOCC outcome count must be at least 2, got {s}"
        )));
    }
    Ok(verdict(table, LocalityMode::Locc { s }))
}

pub fn check(table: &QuasiProbTable, mode: LocalityMode) -> Result<LocalityVerdict> {
    match mode {
        LocalityMode::Nonadaptive => Ok(check_local(table)),
        LocalityMode::Locc { s } => check_locc(table, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermitianOperator;
    use crate::pauli::{quasi_prob, Transformation};
    use crate::states::bell;

    #[test]
    fn identity_is_local() {
        let t = quasi_prob(
            &HermitianOperator::identity(2).unwrap(),
            &Transformation::symmetric(),
        );
        let v = check_local(&t);
        assert!(v.local);
        assert!((v.positivity_min - 1.0 / 9.0).abs() < 1e-12);
        assert!((v.completeness - 1.0).abs() < 1e-12);
        assert_eq!(v.bound, 1.0);
    }

    #[test]
    fn negative_entries_fail_any_bound() {
        let t = quasi_prob(&bell().projector(), &Transformation::symmetric());
        assert!(!check_local(&t).local);
        assert!(!check_locc(&t, 7).unwrap().local);
    }

    #[test]
    fn locc_bound_loosens() {
        let t = quasi_prob(
            &HermitianOperator::identity(3).unwrap(),
            &Transformation::symmetric(),
        );
        let v = check_locc(&t, 2).unwrap();
        assert_eq!(v.bound, 4.0);
        assert!(v.local);
        assert!(check_locc(&t, 1).is_err());
    }

    #[test]
    fn mode_strings() {
        assert_eq!(
            "locc".parse::<LocalityMode>().unwrap(),
            LocalityMode::Locc { s: 2 }
        );
        assert_eq!(
            "locc(3)".parse::<LocalityMode>().unwrap(),
            LocalityMode::Locc { s: 3 }
        );
        assert_eq!(LocalityMode::Nonadaptive.to_string(), "nonadaptive");
        assert!("sometimes".parse::<LocalityMode>().is_err());
        let json = serde_json::to_string(&LocalityMode::Locc { s: 2 }).unwrap();
        assert_eq!(json, "\"locc(2)\"");
    }
}
