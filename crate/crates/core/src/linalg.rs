//! Dense complex operator algebra on n-qubit Hilbert spaces.
//!
//! Matrices are stored row-major. Basis index bits follow the tensor
//! convention of [`kron`]: qubit 0 is the most significant bit, so the first
//! Kronecker factor indexes the slowest-varying blocks.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QsvError, Result};

pub type C64 = Complex64;

/// Largest supported register size.
pub const MAX_QUBITS: usize = 8;

/// Tolerance for Hermiticity and other algebraic identities.
pub const TOL: f64 = 1e-9;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this.
const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Bit mask selecting `qubit` inside a basis index of an `n`-qubit register.
#[inline]
pub(crate) fn qubit_mask(qubit: usize, n: usize) -> usize {
    1 << (n - 1 - qubit)
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(QsvError::QubitRange {
            n,
            min: 1,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(QsvError::BadDimension(dim));
    }
    let n = dim.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

/// A Hermitian operator on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    n: usize,
    data: Vec<C64>,
}

impl HermitianOperator {
    /// Builds an operator from row-major entries, rejecting non-Hermitian input.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        let n = qubits_for_dim(dim)?;
        if data.len() != dim * dim {
            return Err(QsvError::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let op = Self { n, data };
        let deviation = op.hermiticity_deviation();
        if deviation > TOL {
            return Err(QsvError::NonHermitian { deviation });
        }
        Ok(op.symmetrized())
    }

    /// Builds an operator with real entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Internal constructor for data already known to be Hermitian.
    pub(crate) fn from_raw(n: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), 1 << (2 * n));
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Self::from_raw(n, vec![ZERO; 1 << (2 * n)]))
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut op = Self::zeros(n)?;
        let dim = op.dim();
        for i in 0..dim {
            op.data[i * dim + i] = ONE;
        }
        Ok(op)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = qubits_for_dim(values.len())?;
        let dim = values.len();
        let mut data = vec![ZERO; dim * dim];
        for (i, &v) in values.iter().enumerate() {
            data[i * dim + i] = C64::new(v, 0.0);
        }
        Ok(Self::from_raw(n, data))
    }

    /// Rank-one operator |v⟩⟨v| (not normalized).
    pub fn outer(v: &[C64]) -> Result<Self> {
        let n = qubits_for_dim(v.len())?;
        let dim = v.len();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = v[r] * v[c].conj();
            }
        }
        Ok(Self::from_raw(n, data))
    }

    /// Single-qubit Pauli matrix σ_k, with σ_0 the identity.
    pub fn pauli(k: usize) -> Self {
        let i = C64::i();
        let data = match k {
            0 => vec![ONE, ZERO, ZERO, ONE],
            1 => vec![ZERO, ONE, ONE, ZERO],
            2 => vec![ZERO, -i, i, ZERO],
            3 => vec![ONE, ZERO, ZERO, -ONE],
            _ => panic!("Pauli index {k} out of range 0..4"),
        };
        Self::from_raw(1, data)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).sum()
    }

    /// `tr(self · other)`, real for Hermitian pairs.
    pub fn trace_product(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "operator dimensions differ");
        let dim = self.dim();
        let mut acc = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                acc += (self.data[r * dim + c] * other.data[c * dim + r]).re;
            }
        }
        acc
    }

    /// `A · v`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let dim = self.dim();
        assert_eq!(
            v.len(),
            dim,
            "vector length differs from operator dimension"
        );
        (0..dim)
            .map(|r| {
                self.data[r * dim..(r + 1) * dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &[C64]) -> f64 {
        let av = self.apply(v);
        v.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Matrix product, which must again be Hermitian (e.g. commuting projectors).
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(QsvError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * other.data[k * dim + c];
                }
            }
        }
        Self::new(dim, data)
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_raw(self.n, self.data.iter().map(|x| x * factor).collect())
    }

    fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..dim {
            for c in r..dim {
                let d = (self.data[r * dim + c] - self.data[c * dim + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    fn symmetrized(mut self) -> Self {
        let dim = self.dim();
        for r in 0..dim {
            self.data[r * dim + r].im = 0.0;
            for c in r + 1..dim {
                let avg = (self.data[r * dim + c] + self.data[c * dim + r].conj()) * 0.5;
                self.data[r * dim + c] = avg;
                self.data[c * dim + r] = avg.conj();
            }
        }
        self
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.n, other.n, "operator dimensions differ");
        Self::from_raw(
            self.n,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<&HermitianOperator> for f64 {
    type Output = HermitianOperator;
    fn mul(self, rhs: &HermitianOperator) -> HermitianOperator {
        rhs.scale(self)
    }
}

/// Kronecker product `a ⊗ b`; `a` indexes the slowest-varying blocks.
pub fn kron(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    let n = a.n + b.n;
    check_qubits(n)?;
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    let mut data = vec![ZERO; dim * dim];
    for ar in 0..da {
        for ac in 0..da {
            let x = a.data[ar * da + ac];
            if x == ZERO {
                continue;
            }
            for br in 0..db {
                for bc in 0..db {
                    data[(ar * db + br) * dim + ac * db + bc] = x * b.data[br * db + bc];
                }
            }
        }
    }
    Ok(HermitianOperator::from_raw(n, data))
}

/// Eigenvalues sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn second(&self) -> Option<f64> {
        self.eigenvalues.get(1).copied()
    }

    /// `1 − λ₂`; meaningful only when the largest eigenvalue is 1.
    pub fn gap(&self) -> f64 {
        1.0 - self.second().unwrap_or(self.largest())
    }
}

/// Dense JSON form: real and imaginary parts, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDocument {
    pub n: usize,
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
}

impl HermitianOperator {
    pub fn to_document(&self) -> OperatorDocument {
        let dim = self.dim();
        let part = |f: fn(&C64) -> f64| {
            (0..dim)
                .map(|r| self.data[r * dim..(r + 1) * dim].iter().map(f).collect())
                .collect()
        };
        OperatorDocument {
            n: self.n,
            real: part(|z| z.re),
            imag: part(|z| z.im),
        }
    }

    pub fn from_document(doc: &OperatorDocument) -> Result<Self> {
        let dim = doc.real.len();
        if doc.imag.len() != dim || doc.real.iter().chain(&doc.imag).any(|row| row.len() != dim) {
            return Err(QsvError::InvalidParameter(
                "operator rows are not square".into(),
            ));
        }
        let data = doc
            .real
            .iter()
            .flatten()
            .zip(doc.imag.iter().flatten())
            .map(|(&re, &im)| C64::new(re, im))
            .collect();
        let op = Self::new(dim, data)?;
        if op.n != doc.n {
            return Err(QsvError::DimensionMismatch {
                expected: 1 << doc.n,
                found: dim,
            });
        }
        Ok(op)
    }
}

/// Full eigendecomposition: eigenvalues descending, eigenvectors as columns
/// `vectors[k]` matching `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
/// `a_pq` and then applies a real Givens rotation in the (p, q) plane.
fn jacobi(h: &HermitianOperator, want_vectors: bool) -> (Vec<f64>, Option<Vec<C64>>) {
    let dim = h.dim();
    let mut a = h.data.clone();
    let mut v = want_vectors.then(|| {
        let mut id = vec![ZERO; dim * dim];
        for i in 0..dim {
            id[i * dim + i] = ONE;
        }
        id
    });

    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                if r != c {
                    s += a[r * dim + c].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&a) < JACOBI_OFF_TOL {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a[p * dim + p].re;
                let aqq = a[q * dim + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let g00 = C64::new(c, 0.0);
                let g01 = C64::new(s, 0.0);
                let g10 = -phase.conj() * s;
                let g11 = phase.conj() * c;

                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = akp * g00 + akq * g10;
                    a[k * dim + q] = akp * g01 + akq * g11;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = g00.conj() * apk + g10.conj() * aqk;
                    a[q * dim + k] = g01.conj() * apk + g11.conj() * aqk;
                }
                a[p * dim + q] = ZERO;
                a[q * dim + p] = ZERO;
                a[p * dim + p].im = 0.0;
                a[q * dim + q].im = 0.0;

                if let Some(v) = v.as_mut() {
                    for k in 0..dim {
                        let vkp = v[k * dim + p];
                        let vkq = v[k * dim + q];
                        v[k * dim + p] = vkp * g00 + vkq * g10;
                        v[k * dim + q] = vkp * g01 + vkq * g11;
                    }
                }
            }
        }
    }
    ((0..dim).map(|i| a[i * dim + i].re).collect(), v)
}

/// Eigenvalues of a Hermitian operator in non-increasing order.
pub fn hermitian_eigenvalues(h: &HermitianOperator) -> Spectrum {
    let (mut values, _) = jacobi(h, false);
    values.sort_by(|x, y| y.total_cmp(x));
    Spectrum {
        eigenvalues: values,
    }
}

/// Eigenvalues and orthonormal eigenvectors, sorted by eigenvalue descending.
pub fn eigh(h: &HermitianOperator) -> Eigen {
    let dim = h.dim();
    let (values, vecs) = jacobi(h, true);
    let vecs = vecs.expect("eigenvectors requested");
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| values[y].total_cmp(&values[x]));
    Eigen {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..dim).map(|r| vecs[r * dim + k]).collect())
            .collect(),
    }
}

/// Tolerance on the top eigenvalue of a protocol operator.
pub const PROTOCOL_TOL: f64 = 1e-6;

/// Spectral gap `ν = 1 − λ₂` of a protocol operator whose largest eigenvalue is 1.
pub fn spectral_gap(omega: &HermitianOperator) -> Result<f64> {
    let spectrum = hermitian_eigenvalues(omega);
    if (spectrum.largest() - 1.0).abs() > PROTOCOL_TOL {
        return Err(QsvError::InvalidProtocol(spectrum.largest()));
    }
    Ok(spectrum.gap())
}

/// Traces out every qubit not listed in `keep`.
pub fn partial_trace(rho: &HermitianOperator, keep: &[usize]) -> Result<HermitianOperator> {
    let n = rho.qubits();
    if keep.is_empty() {
        return Err(QsvError::InvalidSubset("empty subset".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(QsvError::InvalidSubset("repeated qubit index".into()));
    }
    if let Some(&bad) = kept.iter().find(|&&q| q >= n) {
        return Err(QsvError::InvalidSubset(format!(
            "qubit {bad} out of range for {n} qubits"
        )));
    }
    let tr = rho.trace();
    if (tr - 1.0).abs() > TOL {
        return Err(QsvError::InvalidParameter(format!(
            "partial trace needs a unit-trace operator, trace is {tr}"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let k = kept.len();
    let scatter = |bits: usize, qubits: &[usize]| -> usize {
        let m = qubits.len();
        qubits
            .iter()
            .enumerate()
            .filter(|(pos, _)| bits & (1 << (m - 1 - pos)) != 0)
            .fold(0, |acc, (_, &q)| acc | qubit_mask(q, n))
    };
    let kdim = 1 << k;
    let mut out = vec![ZERO; kdim * kdim];
    let dim = rho.dim();
    for r in 0..kdim {
        let rf = scatter(r, &kept);
        for c in 0..kdim {
            let cf = scatter(c, &kept);
            let mut acc = ZERO;
            for t in 0..1usize << traced.len() {
                let tf = scatter(t, &traced);
                acc += rho.data[(rf | tf) * dim + (cf | tf)];
            }
            out[r * kdim + c] = acc;
        }
    }
    Ok(HermitianOperator::from_raw(k, out))
}

/// Which eigenspace of an involution to project onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Tolerance for accepting an eigenvalue as ±1.
const INVOLUTION_TOL: f64 = 1e-6;

/// Projector `(𝟙 ± O)/2` onto the ±1 eigenspace of an observable with spectrum in {±1}.
pub fn eigenspace_projector(
    observable: &HermitianOperator,
    sign: Sign,
) -> Result<HermitianOperator> {
    let spectrum = hermitian_eigenvalues(observable);
    if let Some(&bad) = spectrum
        .eigenvalues
        .iter()
        .find(|&&e| (e.abs() - 1.0).abs() > INVOLUTION_TOL)
    {
        return Err(QsvError::NotInvolution(bad));
    }
    let id = HermitianOperator::identity(observable.qubits())?;
    Ok((&id + &observable.scale(sign.value())).scale(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(bits: &[u8]) -> Vec<C64> {
        let n = bits.len();
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let mut v = vec![ZERO; 1 << n];
        v[idx] = ONE;
        v
    }

    #[test]
    fn kron_identities() {
        let id = HermitianOperator::pauli(0);
        assert!(kron(&id, &id)
            .unwrap()
            .approx_eq(&HermitianOperator::identity(2).unwrap(), 0.0));

        let xz = kron(&HermitianOperator::pauli(1), &HermitianOperator::pauli(3)).unwrap();
        assert_eq!(xz.get(0, 2), ONE);
        assert_eq!(xz.get(1, 3), -ONE);
        for i in 0..4 {
            assert_eq!(xz.get(i, i), ZERO);
        }

        let p0 = HermitianOperator::outer(&ket(&[0])).unwrap();
        let p1 = HermitianOperator::outer(&ket(&[1])).unwrap();
        let d = kron(&p0, &p1).unwrap();
        assert!(d.approx_eq(
            &HermitianOperator::diagonal(&[0.0, 1.0, 0.0, 0.0]).unwrap(),
            0.0
        ));
    }

    #[test]
    fn kron_respects_qubit_cap() {
        let big = HermitianOperator::identity(5).unwrap();
        assert!(matches!(kron(&big, &big), Err(QsvError::QubitRange { .. })));
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = HermitianOperator::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, QsvError::NonHermitian { .. }));
        assert!(matches!(
            HermitianOperator::from_real(3, &[0.0; 9]),
            Err(QsvError::BadDimension(3))
        ));
    }

    #[test]
    fn pauli_spectra() {
        assert_eq!(
            hermitian_eigenvalues(&HermitianOperator::pauli(3)).eigenvalues,
            vec![1.0, -1.0]
        );
        let y = hermitian_eigenvalues(&HermitianOperator::pauli(2));
        assert!((y.eigenvalues[0] - 1.0).abs() < 1e-12 && (y.eigenvalues[1] + 1.0).abs() < 1e-12);
        let id = hermitian_eigenvalues(&HermitianOperator::identity(2).unwrap());
        assert_eq!(id.eigenvalues, vec![1.0; 4]);
    }

    #[test]
    fn identity_has_zero_gap() {
        assert_eq!(
            spectral_gap(&HermitianOperator::identity(3).unwrap()).unwrap(),
            0.0
        );
    }

    #[test]
    fn gap_rejects_invalid_protocol() {
        let half = HermitianOperator::identity(1).unwrap().scale(0.5);
        assert!(matches!(
            spectral_gap(&half),
            Err(QsvError::InvalidProtocol(_))
        ));
    }

    #[test]
    fn eigenvectors_diagonalize() {
        let h = HermitianOperator::new(
            2,
            vec![
                C64::new(2.0, 0.0),
                C64::new(1.0, -1.0),
                C64::new(1.0, 1.0),
                C64::new(-1.0, 0.0),
            ],
        )
        .unwrap();
        let e = eigh(&h);
        for (val, vec) in e.values.iter().zip(&e.vectors) {
            let hv = h.apply(vec);
            for (a, b) in hv.iter().zip(vec) {
                assert!((a - b * val).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn partial_trace_cases() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = vec![C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)];
        let rho = HermitianOperator::outer(&phi).unwrap();
        let red = partial_trace(&rho, &[0]).unwrap();
        assert!(red.approx_eq(&HermitianOperator::identity(1).unwrap().scale(0.5), 1e-12));

        let rho00 = HermitianOperator::outer(&ket(&[0, 0])).unwrap();
        let red = partial_trace(&rho00, &[1]).unwrap();
        assert!(red.approx_eq(&HermitianOperator::outer(&ket(&[0])).unwrap(), 1e-12));

        assert!(matches!(
            partial_trace(&rho, &[]),
            Err(QsvError::InvalidSubset(_))
        ));
        assert!(matches!(
            partial_trace(&rho, &[2]),
            Err(QsvError::InvalidSubset(_))
        ));
    }

    #[test]
    fn partial_trace_of_w3() {
        // brute force: ⟨a|ρ_A|b⟩ = Σ_t ψ(a,t) ψ*(b,t) over the two traced qubits
        let amp = 1.0 / 3f64.sqrt();
        let mut w = vec![ZERO; 8];
        for idx in [1usize, 2, 4] {
            w[idx] = C64::new(amp, 0.0);
        }
        let mut expect = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for t in 0..4 {
                    expect[a][b] += (w[(a << 2) | t] * w[(b << 2) | t].conj()).re;
                }
            }
        }
        let red = partial_trace(&HermitianOperator::outer(&w).unwrap(), &[0]).unwrap();
        assert!((expect[0][0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((red.get(0, 0).re - expect[0][0]).abs() < 1e-12);
        assert!((red.get(1, 1).re - expect[1][1]).abs() < 1e-12);
        assert!(red.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn projectors() {
        let p = eigenspace_projector(&HermitianOperator::pauli(3), Sign::Plus).unwrap();
        assert!(p.approx_eq(&HermitianOperator::diagonal(&[1.0, 0.0]).unwrap(), 1e-12));

        let xx = kron(&HermitianOperator::pauli(1), &HermitianOperator::pauli(1)).unwrap();
        let pxx = eigenspace_projector(&xx, Sign::Plus).unwrap();
        assert!((pxx.trace() - 2.0).abs() < 1e-12);
        assert!(pxx.product(&pxx).unwrap().approx_eq(&pxx, 1e-9));

        let err = eigenspace_projector(
            &HermitianOperator::identity(1).unwrap().scale(0.5),
            Sign::Plus,
        );
        assert!(matches!(err, Err(QsvError::NotInvolution(_))));
    }
}
