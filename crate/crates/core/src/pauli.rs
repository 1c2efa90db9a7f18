//! Pauli-basis expansion and quasi-probability tables over local Pauli projections.
//!
//! A single-qubit operator is written in the Pauli basis σ₀…σ₃ and each σ_α is
//! re-expressed over the six projectors `[P_X⁰, P_X¹, P_Y⁰, P_Y¹, P_Z⁰, P_Z¹]`
//! through a [`Transformation`]. The n-qubit table is the tensor product of
//! those rows weighted by the Pauli coefficients, scaled by 2⁻ⁿ.
//!
//! Table layout: rows are measurement settings in {X,Y,Z}ⁿ enumerated
//! row-major with qubit 0 slowest; columns are outcomes in {+,−}ⁿ with qubit 0
//! slowest and `+` (the +1 eigenvalue) first.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QsvError, Result};
use crate::format::fmt_sig;
use crate::linalg::{check_qubits, kron, HermitianOperator, C64, TOL, ZERO};
use crate::states::{PauliLetter, PauliString};

/// Local measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> PauliLetter {
        PauliLetter::from_index(self.index() + 1)
    }

    pub fn as_char(self) -> char {
        ['X', 'Y', 'Z'][self.index()]
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => None,
        }
    }

    /// Single-qubit projector onto the `+` (`minus = false`) or `−` eigenvector.
    pub fn projector(self, minus: bool) -> HermitianOperator {
        let id = HermitianOperator::pauli(0);
        let sigma = HermitianOperator::pauli(self.index() + 1);
        let s = if minus { -1.0 } else { 1.0 };
        (&id + &sigma.scale(s)).scale(0.5)
    }
}

/// Axes of setting row `i` for `n` qubits.
pub fn setting_axes(i: usize, n: usize) -> Vec<Axis> {
    (0..n)
        .map(|q| Axis::ALL[(i / 3usize.pow((n - 1 - q) as u32)) % 3])
        .collect()
}

/// Row index of a setting.
pub fn setting_index(axes: &[Axis]) -> usize {
    axes.iter().fold(0, |acc, a| acc * 3 + a.index())
}

pub fn setting_label(i: usize, n: usize) -> String {
    setting_axes(i, n).iter().map(|a| a.as_char()).collect()
}

/// `+`/`−` label of outcome column `j`, qubit 0 first.
pub fn outcome_label(j: usize, n: usize) -> String {
    (0..n)
        .map(|q| if j >> (n - 1 - q) & 1 == 0 { '+' } else { '-' })
        .collect()
}

pub fn parse_outcome_label(label: &str) -> Option<usize> {
    label.chars().try_fold(0usize, |acc, c| match c {
        '+' => Some(acc << 1),
        '-' => Some((acc << 1) | 1),
        _ => None,
    })
}

/// `P^{j₁}_{a₁} ⊗ … ⊗ P^{jₙ}_{aₙ}` for a setting and outcome.
pub fn outcome_projector(axes: &[Axis], outcome: usize) -> Result<HermitianOperator> {
    let n = axes.len();
    check_qubits(n)?;
    let mut op = axes[0].projector(outcome >> (n - 1) & 1 == 1);
    for (q, a) in axes.iter().enumerate().skip(1) {
        op = kron(&op, &a.projector(outcome >> (n - 1 - q) & 1 == 1))?;
    }
    Ok(op)
}

/// Amplitudes of `amps` in the eigenbasis of a setting, indexed like the
/// outcome columns. Squared moduli are the Born probabilities.
pub fn setting_amplitudes(amps: &[C64], axes: &[Axis]) -> Vec<C64> {
    let n = axes.len();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = amps.to_vec();
    for (q, axis) in axes.iter().enumerate() {
        // rows: ⟨+|, ⟨−| of the measured axis
        let m = match axis {
            Axis::X => [
                [C64::new(h, 0.0), C64::new(h, 0.0)],
                [C64::new(h, 0.0), C64::new(-h, 0.0)],
            ],
            Axis::Y => [
                [C64::new(h, 0.0), C64::new(0.0, -h)],
                [C64::new(h, 0.0), C64::new(0.0, h)],
            ],
            Axis::Z => [
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            ],
        };
        let bit = 1 << (n - 1 - q);
        for b in 0..v.len() {
            if b & bit == 0 {
                let (v0, v1) = (v[b], v[b | bit]);
                v[b] = m[0][0] * v0 + m[0][1] * v1;
                v[b | bit] = m[1][0] * v0 + m[1][1] * v1;
            }
        }
    }
    v
}

/// Real coefficients `c_α = tr(op · σ_α₁ ⊗ … ⊗ σ_αₙ)`, indexed base 4 with qubit 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCoefficients {
    n: usize,
    c: Vec<f64>,
}

impl PauliCoefficients {
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    /// Coefficient for the digit string α (each digit in 0..4).
    pub fn get(&self, alpha: &[usize]) -> f64 {
        assert_eq!(alpha.len(), self.n, "index length differs from qubit count");
        self.c[alpha.iter().fold(0, |acc, &d| acc * 4 + d)]
    }

    /// `2⁻ⁿ Σ_α c_α σ_α`.
    pub fn to_operator(&self) -> HermitianOperator {
        let scale = 1.0 / (1u64 << self.n) as f64;
        pauli_sum(
            self.n,
            &self.c.iter().map(|c| c * scale).collect::<Vec<_>>(),
        )
    }
}

pub(crate) fn pauli_string_of(alpha: usize, n: usize) -> PauliString {
    let letters = (0..n)
        .map(|q| PauliLetter::from_index((alpha >> (2 * (n - 1 - q))) & 3))
        .collect();
    PauliString::new(false, letters)
}

/// `Σ_α d_α σ_α` as a dense operator.
pub(crate) fn pauli_sum(n: usize, d: &[f64]) -> HermitianOperator {
    let dim = 1usize << n;
    let mut data = vec![ZERO; dim * dim];
    for (alpha, &coef) in d.iter().enumerate() {
        if coef == 0.0 {
            continue;
        }
        let p = pauli_string_of(alpha, n);
        let (flip, _) = p.masks();
        for b in 0..dim {
            data[(b ^ flip) * dim + b] += p.phase_on(b, n) * coef;
        }
    }
    HermitianOperator::from_raw(n, data)
}

/// Pauli coefficients of an n-qubit Hermitian operator.
pub fn pauli_coefficients(op: &HermitianOperator) -> PauliCoefficients {
    let n = op.qubits();
    let dim = op.dim();
    let c = (0..1usize << (2 * n))
        .into_par_iter()
        .map(|alpha| {
            let p = pauli_string_of(alpha, n);
            let (flip, _) = p.masks();
            let tr: C64 = (0..dim)
                .map(|b| op.get(b, b ^ flip) * p.phase_on(b, n))
                .sum();
            tr.re
        })
        .collect();
    PauliCoefficients { n, c }
}

/// Expansion of σ₀…σ₃ over the six Pauli projectors. Only the identity row
/// varies, through the weights `(α₁, α₂, α₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transformation {
    weights: [f64; 3],
}

impl Transformation {
    /// `t₀ = (α₁, α₁, α₂, α₂, α₃, α₃)`; weights must be nonnegative and sum to 1.
    pub fn new(weights: [f64; 3]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(QsvError::InvalidParameter(format!(
                "transformation weights must be nonnegative, got {weights:?}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > TOL {
            return Err(QsvError::InvalidParameter(format!(
                "transformation weights must sum to 1, got {sum}"
            )));
        }
        Ok(Self { weights })
    }

    /// The symmetric choice 𝟙 = ⅓ Σ P.
    pub fn symmetric() -> Self {
        Self {
            weights: [1.0 / 3.0; 3],
        }
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights
    }

    /// Rows t₀…t₃ over `[P_X⁰, P_X¹, P_Y⁰, P_Y¹, P_Z⁰, P_Z¹]`.
    pub fn rows(&self) -> [[f64; 6]; 4] {
        let [a1, a2, a3] = self.weights;
        [
            [a1, a1, a2, a2, a3, a3],
            [1.0, -1.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, -1.0],
        ]
    }

    /// Largest deviation of `t_k · M̄` from σ_k over k = 0…3.
    pub fn residual(&self) -> f64 {
        let projectors: Vec<HermitianOperator> = Axis::ALL
            .iter()
            .flat_map(|a| [a.projector(false), a.projector(true)])
            .collect();
        self.rows()
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let combo = row.iter().zip(&projectors).fold(
                    HermitianOperator::zeros(1).expect("one qubit"),
                    |acc, (w, p)| &acc + &p.scale(*w),
                );
                combo.max_abs_diff(&HermitianOperator::pauli(k))
            })
            .fold(0.0, f64::max)
    }
}

impl Default for Transformation {
    fn default() -> Self {
        Self::symmetric()
    }
}

/// Quasi-probabilities `p_{i,j}` over 3ⁿ settings × 2ⁿ outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiProbTable {
    n: usize,
    values: Vec<f64>,
    transformation: Transformation,
}

impl QuasiProbTable {
    /// Builds a table from row-major values (`3ⁿ` rows of `2ⁿ`).
    pub fn from_values(n: usize, values: Vec<f64>, transformation: Transformation) -> Result<Self> {
        check_qubits(n)?;
        let expected = 3usize.pow(n as u32) << n;
        if values.len() != expected {
            return Err(QsvError::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(Self {
            n,
            values,
            transformation,
        })
    }

    pub fn zeros(n: usize, transformation: Transformation) -> Result<Self> {
        check_qubits(n)?;
        Self::from_values(n, vec![0.0; 3usize.pow(n as u32) << n], transformation)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn settings(&self) -> usize {
        3usize.pow(self.n as u32)
    }

    pub fn outcomes(&self) -> usize {
        1 << self.n
    }

    pub fn transformation(&self) -> Transformation {
        self.transformation
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, setting: usize, outcome: usize) -> f64 {
        self.values[setting * self.outcomes() + outcome]
    }

    pub fn row(&self, setting: usize) -> &[f64] {
        let w = self.outcomes();
        &self.values[setting * w..(setting + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.outcomes())
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Entry-wise map, keeping the layout.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|&x| f(x)).collect(),
            transformation: self.transformation,
        }
    }

    /// `self·a + other·b`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.n, other.n, "tables have different sizes");
        Self {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            transformation: self.transformation,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Row-major entries as a 2-D vector.
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// CSV in table order: header `setting,<outcome labels>`, one row per setting.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["setting".to_string()];
        header.extend((0..self.outcomes()).map(|j| outcome_label(j, self.n)));
        w.write_record(&header).expect("in-memory write");
        for (i, row) in self.rows().enumerate() {
            let mut rec = vec![setting_label(i, self.n)];
            rec.extend(row.iter().map(|&x| fmt_sig(x)));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
    }

    /// JSON document with explicit setting and outcome labels.
    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            n: self.n,
            weights: self.transformation.weights,
            settings: (0..self.settings())
                .map(|i| setting_label(i, self.n))
                .collect(),
            outcomes: (0..self.outcomes())
                .map(|j| outcome_label(j, self.n))
                .collect(),
            values: self.to_matrix(),
        }
    }

    pub fn from_document(doc: &TableDocument) -> Result<Self> {
        let t = Transformation::new(doc.weights)?;
        let values = doc.values.iter().flatten().copied().collect();
        Self::from_values(doc.n, values, t)
    }
}

impl fmt::Display for QuasiProbTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            write!(f, "{}", setting_label(i, self.n))?;
            for x in row {
                write!(f, " {:>10.6}", x)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Serialized form of a [`QuasiProbTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub n: usize,
    pub weights: [f64; 3],
    pub settings: Vec<String>,
    pub outcomes: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Applies `matrix` (out × in) along every mode of an n-mode tensor with
/// `in_base` entries per mode, qubit 0 the slowest mode.
fn transform_modes(input: &[f64], n: usize, matrix: &[Vec<f64>]) -> Vec<f64> {
    let out_base = matrix.len();
    let in_base = matrix[0].len();
    let mut cur = input.to_vec();
    for q in 0..n {
        let left = out_base.pow(q as u32);
        let right = in_base.pow((n - 1 - q) as u32);
        let mut next = vec![0.0; left * out_base * right];
        for l in 0..left {
            for i in 0..in_base {
                let src = &cur[(l * in_base + i) * right..(l * in_base + i + 1) * right];
                if src.iter().all(|&x| x == 0.0) {
                    continue;
                }
                for (o, row) in matrix.iter().enumerate() {
                    let m = row[i];
                    if m == 0.0 {
                        continue;
                    }
                    let dst = &mut next[(l * out_base + o) * right..(l * out_base + o + 1) * right];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += m * s;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// Flat index over {0..6}ⁿ (digit = 2·axis + outcome bit) to (setting, outcome).
fn split_flat(flat: usize, n: usize) -> (usize, usize) {
    let mut setting = 0;
    let mut outcome = 0;
    for q in 0..n {
        let digit = (flat / 6usize.pow((n - 1 - q) as u32)) % 6;
        setting = setting * 3 + digit / 2;
        outcome = (outcome << 1) | (digit % 2);
    }
    (setting, outcome)
}

/// Quasi-probability table `p = 2⁻ⁿ Σ_α c_α t_α₁ ⊗ … ⊗ t_αₙ`.
pub fn quasi_prob(op: &HermitianOperator, t: &Transformation) -> QuasiProbTable {
    let n = op.qubits();
    let coeffs = pauli_coefficients(op);
    let scale = 1.0 / (1u64 << n) as f64;
    let scaled: Vec<f64> = coeffs.c.iter().map(|c| c * scale).collect();
    // 6 × 4: column α holds t_α
    let rows = t.rows();
    let matrix: Vec<Vec<f64>> = (0..6)
        .map(|k| (0..4).map(|a| rows[a][k]).collect())
        .collect();
    let flat = transform_modes(&scaled, n, &matrix);
    let mut values = vec![0.0; flat.len()];
    let width = 1 << n;
    for (idx, v) in flat.into_iter().enumerate() {
        let (s, o) = split_flat(idx, n);
        values[s * width + o] = v;
    }
    QuasiProbTable {
        n,
        values,
        transformation: *t,
    }
}

/// `Σ_{i,j} p_{i,j} P^{j₁}_{i₁} ⊗ … ⊗ P^{jₙ}_{iₙ}`.
pub fn reconstruct(table: &QuasiProbTable) -> HermitianOperator {
    let n = table.n;
    let width = table.outcomes();
    let mut flat = vec![0.0; table.values.len()];
    for (idx, slot) in flat.iter_mut().enumerate() {
        let (s, o) = split_flat(idx, n);
        *slot = table.values[s * width + o];
    }
    // P_k^b = (σ₀ + (−1)^b σ_k)/2, as a 4 × 6 map
    let mut matrix = vec![vec![0.0; 6]; 4];
    for k in 0..3 {
        for b in 0..2 {
            matrix[0][2 * k + b] = 0.5;
            matrix[k + 1][2 * k + b] = if b == 0 { 0.5 } else { -0.5 };
        }
    }
    let d = transform_modes(&flat, n, &matrix);
    pauli_sum(n, &d)
}

/// `S = Σ_i max_j p_{i,j}`.
pub fn completeness(table: &QuasiProbTable) -> f64 {
    table
        .rows()
        .map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .sum()
}

/// `min_{i,j} p_{i,j}`.
pub fn positivity_min(table: &QuasiProbTable) -> f64 {
    table.values.iter().copied().fold(f64::INFINITY, f64::min)
}
