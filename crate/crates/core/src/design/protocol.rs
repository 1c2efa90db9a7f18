use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adaptive::{evaluate_adaptive, AdaptiveTree};
use super::homogeneous::general_homogeneous;
use crate::error::{QsvError, Result};
use crate::linalg::{check_qubits, spectral_gap, HermitianOperator, C64, TOL, ZERO};
use crate::pauli::{
    completeness, outcome_label, parse_outcome_label, pauli_string_of, positivity_min,
    setting_amplitudes, setting_axes, Axis, QuasiProbTable, Transformation,
};
use crate::states::{PauliLetter, StabilizerGenerators, StateVector};

/// Snapping window for pass probabilities and table entries.
const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    Homogeneous,
    Inhomogeneous,
    Stabilizer,
    Adaptive,
}

/// One local Pauli setting: measured with probability `weight`, outcome `j`
/// accepted with probability `pass[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub weight: f64,
    pub axes: Vec<Axis>,
    pub pass: Vec<f64>,
}

impl Setting {
    pub fn label(&self) -> String {
        self.axes.iter().map(|a| a.as_char()).collect()
    }

    /// `Σ_j pass_j P^j` for this setting.
    pub fn operator(&self) -> HermitianOperator {
        let n = self.axes.len();
        let dim = 1 << n;
        let mut data = vec![ZERO; dim * dim];
        accumulate_setting(&mut data, &self.axes, &self.pass, 1.0);
        HermitianOperator::from_raw(n, data)
    }
}

/// Adds `weight · Σ_j pass_j P^j` to a dense row-major buffer.
///
/// The Walsh–Hadamard transform of the pass vector gives the coefficient of
/// every Pauli string supported on the measured axes.
fn accumulate_setting(acc: &mut [C64], axes: &[Axis], pass: &[f64], weight: f64) {
    let n = axes.len();
    let dim = 1usize << n;
    let mut w = pass.to_vec();
    let mut h = 1;
    while h < dim {
        for block in (0..dim).step_by(2 * h) {
            for k in block..block + h {
                let (a, b) = (w[k], w[k + h]);
                w[k] = a + b;
                w[k + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = weight / dim as f64;
    for (subset, &coef) in w.iter().enumerate() {
        if coef.abs() < SNAP {
            continue;
        }
        let alpha = (0..n)
            .filter(|&q| subset >> (n - 1 - q) & 1 == 1)
            .fold(0usize, |acc, q| {
                acc | (axes[q].index() + 1) << (2 * (n - 1 - q))
            });
        let p = pauli_string_of(alpha, n);
        let (flip, _) = p.masks();
        for b in 0..dim {
            acc[(b ^ flip) * dim + b] += p.phase_on(b, n) * (coef * scale);
        }
    }
}

/// A verification strategy with its effective operator `Ω` and spectral gap.
#[derive(Debug, Clone)]
pub struct Protocol {
    n: usize,
    kind: ProtocolKind,
    settings: Vec<Setting>,
    adaptive: Option<AdaptiveTree>,
    omega: HermitianOperator,
    nu: f64,
    scale: f64,
}

impl Protocol {
    /// Builds a nonadaptive protocol after validating weights and pass vectors.
    pub fn new(n: usize, kind: ProtocolKind, settings: Vec<Setting>) -> Result<Self> {
        Self::build(n, kind, settings, 1.0)
    }

    /// Protocol whose operator is `Ω/scale` for a valid `Ω`, as produced by
    /// rescaling an overcomplete table. The target passes with probability `1/scale`.
    pub fn rescaled(n: usize, settings: Vec<Setting>, scale: f64) -> Result<Self> {
        if scale.is_nan() || scale < 1.0 {
            return Err(QsvError::InvalidParameter(format!(
                "scale must be at least 1, got {scale}"
            )));
        }
        Self::build(n, ProtocolKind::Homogeneous, settings, scale)
    }

    fn build(n: usize, kind: ProtocolKind, settings: Vec<Setting>, scale: f64) -> Result<Self> {
        check_qubits(n)?;
        if settings.is_empty() {
            return Err(QsvError::MalformedProtocol("no settings".into()));
        }
        let dim = 1usize << n;
        for s in &settings {
            if s.axes.len() != n {
                return Err(QsvError::MalformedProtocol(format!(
                    "setting {} has {} axes, expected {n}",
                    s.label(),
                    s.axes.len()
                )));
            }
            if s.pass.len() != dim {
                return Err(QsvError::MalformedProtocol(format!(
                    "setting {} has {} pass entries, expected {dim}",
                    s.label(),
                    s.pass.len()
                )));
            }
            if !(s.weight >= 0.0 && s.weight <= 1.0 + TOL) {
                return Err(QsvError::MalformedProtocol(format!(
                    "setting {} has weight {}",
                    s.label(),
                    s.weight
                )));
            }
            if let Some(z) = s.pass.iter().find(|z| !(**z >= -TOL && **z <= 1.0 + TOL)) {
                return Err(QsvError::MalformedProtocol(format!(
                    "setting {} has pass probability {z}",
                    s.label()
                )));
            }
        }
        let total: f64 = settings.iter().map(|s| s.weight).sum();
        if (total - 1.0).abs() > TOL {
            return Err(QsvError::MalformedProtocol(format!(
                "setting weights sum to {total}, expected 1"
            )));
        }

        let data = settings
            .par_iter()
            .fold(
                || vec![ZERO; dim * dim],
                |mut acc, s| {
                    accumulate_setting(&mut acc, &s.axes, &s.pass, s.weight);
                    acc
                },
            )
            .reduce(
                || vec![ZERO; dim * dim],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        let omega = HermitianOperator::from_raw(n, data);
        let nu = spectral_gap(&omega.scale(scale))?;
        Ok(Self {
            n,
            kind,
            settings,
            adaptive: None,
            omega,
            nu,
            scale,
        })
    }

    /// Protocol realised by an adaptive measurement tree.
    pub fn from_tree(tree: AdaptiveTree) -> Result<Self> {
        let omega = evaluate_adaptive(&tree)?;
        let nu = spectral_gap(&omega)?;
        Ok(Self {
            n: tree.qubits(),
            kind: ProtocolKind::Adaptive,
            settings: Vec::new(),
            adaptive: Some(tree),
            omega,
            nu,
            scale: 1.0,
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ProtocolKind {
        self.kind
    }

    pub fn settings(&self) -> &[Setting] {
        &self.settings
    }

    pub fn adaptive_tree(&self) -> Option<&AdaptiveTree> {
        self.adaptive.as_ref()
    }

    /// Effective operator `Ω`.
    pub fn operator(&self) -> &HermitianOperator {
        &self.omega
    }

    /// Spectral gap `ν = 1 − λ₂(Ω)` of the unscaled operator.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `1` unless built by [`Protocol::rescaled`].
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Pass probability `tr(Ωρ)` of a single copy.
    pub fn pass_probability(&self, rho: &HermitianOperator) -> f64 {
        self.omega.trace_product(rho)
    }

    /// Checks that every branch accepts `ψ` with certainty.
    pub fn check_target(&self, psi: &StateVector) -> Result<()> {
        if psi.qubits() != self.n {
            return Err(QsvError::DimensionMismatch {
                expected: self.n,
                found: psi.qubits(),
            });
        }
        if self.scale != 1.0 {
            return Err(QsvError::MalformedProtocol(format!(
                "rescaled protocol accepts the target with probability 1/{}",
                self.scale
            )));
        }
        for s in &self.settings {
            let p = s.operator().expectation(psi.amplitudes());
            if (p - 1.0).abs() > TOL {
                return Err(QsvError::MalformedProtocol(format!(
                    "setting {} accepts the target with probability {p}",
                    s.label()
                )));
            }
        }
        let p = self.omega.expectation(psi.amplitudes());
        if (p - 1.0).abs() > TOL {
            return Err(QsvError::MalformedProtocol(format!(
                "target passes with probability {p}"
            )));
        }
        Ok(())
    }

    pub fn to_document(&self) -> ProtocolDocument {
        let settings = self
            .settings
            .iter()
            .map(|s| SettingDocument {
                weight: s.weight,
                axes: s.label(),
                pass: s
                    .pass
                    .iter()
                    .enumerate()
                    .map(|(j, &z)| (outcome_label(j, self.n), z))
                    .collect(),
            })
            .collect();
        ProtocolDocument {
            n: self.n,
            kind: self.kind,
            settings,
            adaptive_tree: self.adaptive.clone(),
            nu: self.nu,
            scale: self.scale,
        }
    }

    /// Rebuilds a protocol from its document, recomputing `Ω` and `ν`.
    pub fn from_document(doc: &ProtocolDocument) -> Result<Self> {
        let protocol = match (&doc.adaptive_tree, doc.kind) {
            (Some(tree), _) => {
                if tree.qubits() != doc.n {
                    return Err(QsvError::MalformedProtocol(format!(
                        "tree acts on {} qubits, document says {}",
                        tree.qubits(),
                        doc.n
                    )));
                }
                Self::from_tree(tree.clone())?
            }
            (None, ProtocolKind::Adaptive) => {
                return Err(QsvError::MalformedProtocol(
                    "adaptive protocol without a tree".into(),
                ))
            }
            (None, kind) => {
                let settings = doc
                    .settings
                    .iter()
                    .map(|s| s.to_setting(doc.n))
                    .collect::<Result<Vec<_>>>()?;
                Self::build(doc.n, kind, settings, doc.scale)?
            }
        };
        if (protocol.nu - doc.nu).abs() > 1e-6 {
            return Err(QsvError::MalformedProtocol(format!(
                "recorded gap {} differs from recomputed {}",
                doc.nu, protocol.nu
            )));
        }
        Ok(protocol)
    }
}

/// Serialized protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolDocument {
    pub n: usize,
    pub kind: ProtocolKind,
    pub settings: Vec<SettingDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adaptive_tree: Option<AdaptiveTree>,
    pub nu: f64,
    #[serde(default = "unit", skip_serializing_if = "is_unit")]
    pub scale: f64,
}

fn unit() -> f64 {
    1.0
}

fn is_unit(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingDocument {
    pub weight: f64,
    pub axes: String,
    /// Accept probability per outcome label; omitted outcomes reject.
    pub pass: BTreeMap<String, f64>,
}

impl SettingDocument {
    fn to_setting(&self, n: usize) -> Result<Setting> {
        let axes = self
            .axes
            .chars()
            .map(|c| {
                Axis::from_char(c).ok_or_else(|| {
                    QsvError::MalformedProtocol(format!("bad axis '{c}' in {}", self.axes))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if axes.len() != n {
            return Err(QsvError::MalformedProtocol(format!(
                "setting {} does not act on {n} qubits",
                self.axes
            )));
        }
        let mut pass = vec![0.0; 1 << n];
        for (label, &z) in &self.pass {
            let j = parse_outcome_label(label)
                .filter(|_| label.chars().count() == n)
                .ok_or_else(|| {
                    QsvError::MalformedProtocol(format!("bad outcome label '{label}'"))
                })?;
            pass[j] = z;
        }
        Ok(Setting {
            weight: self.weight,
            axes,
            pass,
        })
    }
}

fn snap_unit(z: f64) -> f64 {
    if z.abs() < SNAP {
        0.0
    } else if (z - 1.0).abs() < SNAP {
        1.0
    } else {
        z.clamp(0.0, 1.0)
    }
}

/// Realises a local table: setting `i` is drawn with `μ_i = max_j p_{i,j}`
/// and outcome `j` accepted with `p_{i,j}/μ_i`.
pub fn protocol_from_table(table: &QuasiProbTable) -> Result<Protocol> {
    Protocol::new(
        table.qubits(),
        ProtocolKind::Homogeneous,
        table_settings(table)?,
    )
}

/// Settings `(μ_i, z_i)` of a nonnegative table with completeness 1.
pub fn table_settings(table: &QuasiProbTable) -> Result<Vec<Setting>> {
    let pmin = positivity_min(table);
    if pmin < -TOL {
        return Err(QsvError::NegativeEntries(pmin));
    }
    let s = completeness(table);
    if (s - 1.0).abs() > TOL {
        return Err(QsvError::MalformedProtocol(format!(
            "table completeness is {s}, a nonadaptive protocol needs exactly 1"
        )));
    }
    let n = table.qubits();
    Ok(table
        .rows()
        .enumerate()
        .filter_map(|(i, row)| {
            let mu = row.iter().copied().fold(0.0, f64::max);
            (mu > SNAP).then(|| Setting {
                weight: mu,
                axes: setting_axes(i, n),
                pass: row.iter().map(|&p| snap_unit(p / mu)).collect(),
            })
        })
        .collect())
}

/// Inhomogeneous protocol for targets without a local homogeneous one.
///
/// A setting is kept when the outcomes in the support of its revised target
/// row contain every outcome `ψ` can produce. Each kept setting accepts
/// exactly those target outcomes, and kept settings are weighted uniformly.
pub fn inhomogeneous_fallback(psi: &StateVector, t: &Transformation) -> Result<Protocol> {
    let n = psi.qubits();
    let (_, design) = general_homogeneous(psi, t)?;
    let settings: Vec<Setting> = design
        .table
        .rows()
        .enumerate()
        .filter_map(|(i, row)| {
            let axes = setting_axes(i, n);
            let born: Vec<bool> = setting_amplitudes(psi.amplitudes(), &axes)
                .iter()
                .map(|a| a.norm_sqr() > TOL)
                .collect();
            let covered = row.iter().zip(&born).all(|(&p, &b)| !b || p > TOL);
            covered.then(|| Setting {
                weight: 0.0,
                axes,
                pass: born.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
            })
        })
        .collect();
    if settings.is_empty() {
        return Err(QsvError::NoProtocol);
    }
    let w = 1.0 / settings.len() as f64;
    let settings = settings
        .into_iter()
        .map(|s| Setting { weight: w, ..s })
        .collect();
    Protocol::new(n, ProtocolKind::Inhomogeneous, settings)
}

/// Which stabilizer elements to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizerSet {
    Generators,
    FullGroup,
}

/// Measures stabilizer elements uniformly at random, accepting on the `+1`
/// eigenvalue. Identity positions are read out in Z and ignored.
pub fn stabilizer_protocol(g: &StabilizerGenerators, set: StabilizerSet) -> Result<Protocol> {
    let n = g.qubits();
    if g.generators().len() != n {
        return Err(QsvError::GeneratorCount {
            expected: n,
            found: g.generators().len(),
        });
    }
    let elements = match set {
        StabilizerSet::Generators => g.generators().to_vec(),
        StabilizerSet::FullGroup => g.nontrivial_elements(),
    };
    let w = 1.0 / elements.len() as f64;
    let settings = elements
        .iter()
        .map(|p| {
            let axes = p
                .letters
                .iter()
                .map(|l| match l {
                    PauliLetter::I | PauliLetter::Z => Axis::Z,
                    PauliLetter::X => Axis::X,
                    PauliLetter::Y => Axis::Y,
                })
                .collect();
            let support = p
                .letters
                .iter()
                .enumerate()
                .filter(|(_, &l)| l != PauliLetter::I)
                .fold(0usize, |acc, (q, _)| acc | 1 << (n - 1 - q));
            let pass = (0..1usize << n)
                .map(|j| {
                    let odd = (j & support).count_ones() % 2 == 1;
                    if odd == p.negative {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            Setting {
                weight: w,
                axes,
                pass,
            }
        })
        .collect();
    Protocol::new(n, ProtocolKind::Stabilizer, settings)
}
