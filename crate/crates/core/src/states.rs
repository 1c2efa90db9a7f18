//! Target states: Bell, GHZ, Dicke/W, stabilizer and graph states, raw amplitudes.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{QsvError, Result};
use crate::linalg::{check_qubits, qubit_mask, HermitianOperator, C64, MAX_QUBITS, ONE, TOL, ZERO};

/// Normalized pure state on `n` qubits, global phase fixed so that the first
/// nonzero amplitude is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

/// Amplitudes below this magnitude do not fix the global phase.
const PHASE_EPS: f64 = 1e-12;

impl StateVector {
    /// Normalizes `raw`; its length must be a power of two between 2 and 2^8.
    pub fn from_amplitudes(raw: &[C64]) -> Result<Self> {
        let len = raw.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QsvError::BadDimension(len));
        }
        let n = len.trailing_zeros() as usize;
        check_qubits(n)?;
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(QsvError::ZeroVector);
        }
        let mut amps: Vec<C64> = raw.iter().map(|a| a / norm).collect();
        if let Some(first) = amps.iter().find(|a| a.norm() > PHASE_EPS) {
            let phase = first.conj() / first.norm();
            for a in amps.iter_mut() {
                *a *= phase;
            }
        }
        Ok(Self { n, amps })
    }

    pub fn from_real(raw: &[f64]) -> Result<Self> {
        Self::from_amplitudes(&raw.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Computational basis state; `bits[0]` is qubit 0.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        check_qubits(bits.len())?;
        let idx = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        let mut amps = vec![ZERO; 1 << bits.len()];
        amps[idx] = ONE;
        Ok(Self {
            n: bits.len(),
            amps,
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// |ψ⟩⟨ψ|.
    pub fn projector(&self) -> HermitianOperator {
        HermitianOperator::outer(&self.amps).expect("state dimension already validated")
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return 0.0;
        }
        self.inner(other).norm_sqr()
    }

    /// Haar-distributed pure state from normalized complex Gaussian amplitudes.
    pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n)?;
        let amps: Vec<C64> = (0..1usize << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::from_amplitudes(&amps)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_qubits(self.n + other.n)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            n: self.n + other.n,
            amps,
        })
    }
}

/// |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell() -> StateVector {
    ghz(2).expect("two qubits are in range")
}

/// (|0…0⟩ + |1…1⟩)/√2 for 2 ≤ n ≤ 8.
pub fn ghz(n: usize) -> Result<StateVector> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(QsvError::QubitRange {
            n,
            min: 2,
            max: MAX_QUBITS,
        });
    }
    let mut amps = vec![ZERO; 1 << n];
    amps[0] = ONE;
    amps[(1 << n) - 1] = ONE;
    StateVector::from_amplitudes(&amps)
}

/// Equal superposition of all weight-`k` basis strings, 1 ≤ k < n ≤ 8.
pub fn dicke(n: usize, k: usize) -> Result<StateVector> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(QsvError::QubitRange {
            n,
            min: 2,
            max: MAX_QUBITS,
        });
    }
    if k == 0 || k >= n {
        return Err(QsvError::InvalidParameter(format!(
            "Dicke excitation count {k} must satisfy 1 <= k < {n}"
        )));
    }
    let amps: Vec<C64> = (0..1usize << n)
        .map(|idx| {
            if idx.count_ones() as usize == k {
                ONE
            } else {
                ZERO
            }
        })
        .collect();
    StateVector::from_amplitudes(&amps)
}

/// W_n = Dicke(n, 1).
pub fn w_state(n: usize) -> Result<StateVector> {
    dicke(n, 1)
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    /// Index into σ₀…σ₃.
    pub fn index(self) -> usize {
        match self {
            PauliLetter::I => 0,
            PauliLetter::X => 1,
            PauliLetter::Y => 2,
            PauliLetter::Z => 3,
        }
    }

    pub fn from_index(k: usize) -> Self {
        [
            PauliLetter::I,
            PauliLetter::X,
            PauliLetter::Y,
            PauliLetter::Z,
        ][k]
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.index()]
    }

    /// (x, z) symplectic bits.
    fn xz(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    /// `self · other = i^k · result`.
    fn mul(self, other: Self) -> (u8, Self) {
        use PauliLetter::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// Hermitian Pauli string with a ± sign, e.g. `-XYI`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub negative: bool,
    pub letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(negative: bool, letters: Vec<PauliLetter>) -> Self {
        Self { negative, letters }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(false, vec![PauliLetter::I; n])
    }

    pub fn qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != PauliLetter::I && **b != PauliLetter::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Product of two commuting strings (the phase is then ±1).
    pub fn product(&self, other: &Self) -> Self {
        debug_assert!(self.commutes_with(other));
        let mut power = 0u8;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                power += k;
                p
            })
            .collect();
        let phase_negative = power % 4 == 2;
        Self::new(self.negative ^ other.negative ^ phase_negative, letters)
    }

    /// `P|v⟩` without forming the matrix.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.qubits();
        let mut out = vec![ZERO; v.len()];
        let (flip, _) = self.masks();
        for (b, &amp) in v.iter().enumerate() {
            out[b ^ flip] += amp * self.phase_on(b, n);
        }
        out
    }

    /// Bit-flip and phase masks over basis indices.
    pub(crate) fn masks(&self) -> (usize, usize) {
        let n = self.qubits();
        let mut flip = 0;
        let mut phase = 0;
        for (q, l) in self.letters.iter().enumerate() {
            let (x, z) = l.xz();
            if x {
                flip |= qubit_mask(q, n);
            }
            if z {
                phase |= qubit_mask(q, n);
            }
        }
        (flip, phase)
    }

    /// Phase picked up by |b⟩ under the string: P|b⟩ = phase · |b ⊕ flip⟩.
    pub(crate) fn phase_on(&self, b: usize, n: usize) -> C64 {
        let mut ph = C64::new(self.sign(), 0.0);
        for (q, l) in self.letters.iter().enumerate() {
            let bit = b & qubit_mask(q, n) != 0;
            match l {
                PauliLetter::I | PauliLetter::X => {}
                PauliLetter::Z => {
                    if bit {
                        ph = -ph;
                    }
                }
                // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                PauliLetter::Y => {
                    ph *= if bit { -C64::i() } else { C64::i() };
                }
            }
        }
        ph
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        let n = self.qubits();
        check_qubits(n)?;
        let dim = 1 << n;
        let mut data = vec![ZERO; dim * dim];
        let (flip, _) = self.masks();
        for b in 0..dim {
            data[(b ^ flip) * dim + b] = self.phase_on(b, n);
        }
        HermitianOperator::new(dim, data)
    }

    fn symplectic(&self) -> Vec<bool> {
        let mut row = Vec::with_capacity(2 * self.qubits());
        for l in &self.letters {
            let (x, z) = l.xz();
            row.push(x);
            row.push(z);
        }
        row
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.negative { '-' } else { '+' })?;
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = QsvError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.chars().next() {
            Some('+') => (false, &s[1..]),
            Some('-') => (true, &s[1..]),
            _ => (false, s),
        };
        let offset = s.len() - body.len();
        if body.is_empty() {
            return Err(QsvError::Parse {
                pos: offset,
                message: "empty Pauli string".into(),
            });
        }
        let letters = body
            .char_indices()
            .map(|(i, c)| {
                PauliLetter::from_char(c.to_ascii_uppercase()).ok_or(QsvError::Parse {
                    pos: offset + i,
                    message: format!("unexpected Pauli letter '{c}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(negative, letters))
    }
}

/// Commuting, independent set of signed Pauli strings on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerGenerators {
    n: usize,
    generators: Vec<PauliString>,
}

impl StabilizerGenerators {
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        let n = generators.first().map(PauliString::qubits).unwrap_or(0);
        check_qubits(n)?;
        if let Some(bad) = generators.iter().find(|g| g.qubits() != n) {
            return Err(QsvError::DimensionMismatch {
                expected: n,
                found: bad.qubits(),
            });
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if !generators[i].commutes_with(&generators[j]) {
                    return Err(QsvError::NonCommuting(i, j));
                }
            }
        }
        if gf2_rank(generators.iter().map(PauliString::symplectic).collect()) != generators.len() {
            return Err(QsvError::DependentGenerators);
        }
        Ok(Self { n, generators })
    }

    /// Parses a comma-separated list such as `+XX,+ZZ`.
    pub fn parse(list: &str) -> Result<Self> {
        let mut gens = Vec::new();
        let mut offset = 0;
        for part in list.split(',') {
            let g = part.parse::<PauliString>().map_err(|e| match e {
                QsvError::Parse { pos, message } => QsvError::Parse {
                    pos: pos + offset,
                    message,
                },
                other => other,
            })?;
            gens.push(g);
            offset += part.len() + 1;
        }
        Self::new(gens)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// All 2^k group elements except the identity.
    pub fn nontrivial_elements(&self) -> Vec<PauliString> {
        let k = self.generators.len();
        (1..1usize << k)
            .map(|mask| {
                (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .fold(PauliString::identity(self.n), |acc, i| {
                        acc.product(&self.generators[i])
                    })
            })
            .collect()
    }

    /// Stabilizer generators of the graph state: K_v = X_v Π_{w∈N(v)} Z_w.
    pub fn from_graph(adjacency: &[Vec<bool>]) -> Result<Self> {
        let n = adjacency.len();
        check_qubits(n)?;
        for (v, row) in adjacency.iter().enumerate() {
            if row.len() != n {
                return Err(QsvError::InvalidAdjacency(format!(
                    "row {v} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row[v] {
                return Err(QsvError::InvalidAdjacency(format!(
                    "self-loop on vertex {v}"
                )));
            }
            for (w, &edge) in row.iter().enumerate() {
                if edge != adjacency[w][v] {
                    return Err(QsvError::InvalidAdjacency(format!(
                        "edge {v}-{w} is not symmetric"
                    )));
                }
            }
        }
        let gens = (0..n)
            .map(|v| {
                let letters = (0..n)
                    .map(|w| {
                        if w == v {
                            PauliLetter::X
                        } else if adjacency[v][w] {
                            PauliLetter::Z
                        } else {
                            PauliLetter::I
                        }
                    })
                    .collect();
                PauliString::new(false, letters)
            })
            .collect();
        Self::new(gens)
    }
}

fn gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(pivot_row) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Deterministic generic seed vector for power iteration.
fn seed_vector(dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|k| {
            let x = k as f64;
            C64::new(1.0 + 0.173 * x.sin(), 0.291 * (1.7 * x + 0.4).cos())
        })
        .collect()
}

/// The unique joint +1 eigenstate of `n` independent commuting generators,
/// extracted as the dominant eigenvector of Π_i (𝟙 + g_i)/2 by power iteration.
pub fn stabilizer_state(g: &StabilizerGenerators) -> Result<StateVector> {
    let n = g.qubits();
    if g.generators().len() != n {
        return Err(QsvError::GeneratorCount {
            expected: n,
            found: g.generators().len(),
        });
    }
    let dim = 1 << n;
    let project = |v: &[C64]| -> Vec<C64> {
        g.generators().iter().fold(v.to_vec(), |acc, gen| {
            let gv = gen.apply(&acc);
            acc.iter().zip(&gv).map(|(a, b)| (a + b) * 0.5).collect()
        })
    };
    let seeds = std::iter::once(seed_vector(dim)).chain((0..dim).map(|k| {
        let mut e = vec![ZERO; dim];
        e[k] = ONE;
        e
    }));
    for seed in seeds {
        let mut v = seed;
        let mut norm = 0.0;
        for _ in 0..3 {
            v = project(&v);
            norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                break;
            }
            v.iter_mut().for_each(|a| *a /= norm);
        }
        if norm >= 1e-8 {
            return StateVector::from_amplitudes(&v);
        }
    }
    Err(QsvError::DependentGenerators)
}

/// Graph state of a symmetric, loop-free adjacency matrix.
pub fn graph_state(adjacency: &[Vec<bool>]) -> Result<StateVector> {
    stabilizer_state(&StabilizerGenerators::from_graph(adjacency)?)
}

/// Adjacency matrix from an undirected edge list.
pub fn adjacency_from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<bool>>> {
    check_qubits(n)?;
    let mut adj = vec![vec![false; n]; n];
    for &(v, w) in edges {
        if v >= n || w >= n {
            return Err(QsvError::InvalidAdjacency(format!(
                "edge {v}-{w} out of range for {n} vertices"
            )));
        }
        if v == w {
            return Err(QsvError::InvalidAdjacency(format!(
                "self-loop on vertex {v}"
            )));
        }
        adj[v][w] = true;
        adj[w][v] = true;
    }
    Ok(adj)
}

/// Parses the state mini-grammar:
/// `bell`, `ghz:<n>`, `w:<n>`, `dicke:<n>:<k>`, `stab:<±P…,…>`,
/// `graph:[<n>:]<v-w;…>`, `vec:<complex,…>`.
pub fn parse_state_spec(spec: &str) -> Result<StateVector> {
    let spec = spec.trim();
    let (head, rest) = match spec.find(':') {
        Some(i) => (&spec[..i], Some((&spec[i + 1..], i + 1))),
        None => (spec, None),
    };
    let missing = || QsvError::Parse {
        pos: spec.len(),
        message: format!("'{head}' needs an argument after ':'"),
    };
    match head.to_ascii_lowercase().as_str() {
        "bell" => match rest {
            None => Ok(bell()),
            Some((_, pos)) => Err(QsvError::Parse {
                pos,
                message: "'bell' takes no argument".into(),
            }),
        },
        "ghz" => {
            let (arg, pos) = rest.ok_or_else(missing)?;
            ghz(parse_usize(arg, pos)?)
        }
        "w" => {
            let (arg, pos) = rest.ok_or_else(missing)?;
            w_state(parse_usize(arg, pos)?)
        }
        "dicke" => {
            let (arg, pos) = rest.ok_or_else(missing)?;
            let (a, b) = arg.split_once(':').ok_or(QsvError::Parse {
                pos: pos + arg.len(),
                message: "expected dicke:<n>:<k>".into(),
            })?;
            dicke(parse_usize(a, pos)?, parse_usize(b, pos + a.len() + 1)?)
        }
        "stab" => {
            let (arg, pos) = rest.ok_or_else(missing)?;
            let gens = StabilizerGenerators::parse(arg).map_err(|e| shift(e, pos))?;
            stabilizer_state(&gens)
        }
        "graph" => {
            let (arg, pos) = rest.ok_or_else(missing)?;
            parse_graph(arg, pos)
        }
        "vec" => {
            let (arg, pos) = rest.ok_or_else(missing)?;
            let mut amps = Vec::new();
            let mut off = pos;
            for part in arg.split(',') {
                amps.push(parse_complex(part, off)?);
                off += part.len() + 1;
            }
            StateVector::from_amplitudes(&amps)
        }
        other => Err(QsvError::Parse {
            pos: 0,
            message: format!("unknown state kind '{other}'"),
        }),
    }
}

fn shift(e: QsvError, by: usize) -> QsvError {
    match e {
        QsvError::Parse { pos, message } => QsvError::Parse {
            pos: pos + by,
            message,
        },
        other => other,
    }
}

fn parse_usize(s: &str, pos: usize) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| QsvError::Parse {
        pos,
        message: format!("expected a nonnegative integer, found '{s}'"),
    })
}

fn parse_graph(arg: &str, pos: usize) -> Result<StateVector> {
    let (count, edges_str, mut off) = match arg.split_once(':') {
        Some((c, e)) => (Some(parse_usize(c, pos)?), e, pos + c.len() + 1),
        None => (None, arg, pos),
    };
    let mut edges = Vec::new();
    for part in edges_str.split(';') {
        if part.trim().is_empty() {
            off += part.len() + 1;
            continue;
        }
        let (a, b) = part.split_once('-').ok_or(QsvError::Parse {
            pos: off,
            message: format!("expected an edge v-w, found '{part}'"),
        })?;
        edges.push((parse_usize(a, off)?, parse_usize(b, off + a.len() + 1)?));
        off += part.len() + 1;
    }
    let inferred = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let n = count.unwrap_or(inferred);
    if n == 0 {
        return Err(QsvError::Parse {
            pos,
            message: "graph needs at least one vertex".into(),
        });
    }
    graph_state(&adjacency_from_edges(n, &edges)?)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (also `j` for the imaginary unit).
fn parse_complex(s: &str, pos: usize) -> Result<C64> {
    let err = || QsvError::Parse {
        pos,
        message: format!("cannot parse complex number '{s}'"),
    };
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let real = |x: &str| x.parse::<f64>().map_err(|_| err());
    let imag = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(x),
        }
    };
    if let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        // split at the last sign that is not the leading one or part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
        });
        match split {
            Some(k) => Ok(C64::new(real(&body[..k])?, imag(&body[k..])?)),
            None => Ok(C64::new(0.0, imag(body)?)),
        }
    } else {
        Ok(C64::new(real(&t)?, 0.0))
    }
}

/// True when every amplitude has unit-norm to within [`TOL`].
pub fn is_normalized(state: &StateVector) -> bool {
    (state.norm() - 1.0).abs() < TOL
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &StateVector, b: &StateVector) -> bool {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .all(|(x, y)| (x - y).norm() < 1e-9)
    }

    #[test]
    fn bell_amplitudes() {
        let b = bell();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b.amplitudes()[0].re - s).abs() < 1e-15);
        assert!((b.amplitudes()[3].re - s).abs() < 1e-15);
        assert!((b.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_cases() {
        let g = ghz(3).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (i, a) in g.amplitudes().iter().enumerate() {
            let want = if i == 0 || i == 7 { s } else { 0.0 };
            assert!((a.re - want).abs() < 1e-15 && a.im == 0.0);
        }
        assert_eq!(ghz(2).unwrap(), bell());
        assert!(matches!(ghz(9), Err(QsvError::QubitRange { .. })));
        assert!(ghz(1).is_err());
    }

    #[test]
    fn dicke_cases() {
        let w = dicke(3, 1).unwrap();
        let a = 1.0 / 3f64.sqrt();
        for (i, x) in w.amplitudes().iter().enumerate() {
            let want = if [1, 2, 4].contains(&i) { a } else { 0.0 };
            assert!((x.re - want).abs() < 1e-15);
        }
        let d21 = dicke(2, 1).unwrap();
        assert!(close(
            &d21,
            &StateVector::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap()
        ));
        let d42 = dicke(4, 2).unwrap();
        let nonzero: Vec<_> = d42.amplitudes().iter().filter(|x| x.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 6);
        assert!(nonzero
            .iter()
            .all(|x| (x.re - 1.0 / 6f64.sqrt()).abs() < 1e-15));
        assert!(dicke(3, 0).is_err());
        assert!(dicke(3, 3).is_err());
    }

    #[test]
    fn amplitude_normalization() {
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((plus.amplitudes()[0].re - s).abs() < 1e-15);
        assert_eq!(StateVector::from_real(&[0.0; 4]), Err(QsvError::ZeroVector));
        assert!(matches!(
            StateVector::from_real(&[1.0; 3]),
            Err(QsvError::BadDimension(3))
        ));
        assert!(close(
            &StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap(),
            &bell()
        ));
    }

    #[test]
    fn global_phase_is_fixed() {
        let v = StateVector::from_amplitudes(&[ZERO, C64::new(0.0, -2.0), ONE, ZERO]).unwrap();
        assert!(v.amplitudes()[1].im.abs() < 1e-15 && v.amplitudes()[1].re > 0.0);
    }

    #[test]
    fn pauli_string_algebra() {
        let xx: PauliString = "+XX".parse().unwrap();
        let zz: PauliString = "ZZ".parse().unwrap();
        let zx: PauliString = "+ZX".parse().unwrap();
        assert!(xx.commutes_with(&zz));
        assert!(!xx.commutes_with(&zx));
        // XX · ZZ = (XZ)(XZ) = (−iY)(−iY) = −YY
        assert_eq!(xx.product(&zz).to_string(), "-YY");
        let op = xx.product(&zz).to_operator().unwrap();
        let yy = "YY".parse::<PauliString>().unwrap().to_operator().unwrap();
        assert!(op.approx_eq(&yy.scale(-1.0), 1e-15));
        assert!(matches!(
            "+XQ".parse::<PauliString>(),
            Err(QsvError::Parse { pos: 2, .. })
        ));
    }

    #[test]
    fn stabilizer_states() {
        let bell_gens = StabilizerGenerators::parse("+XX,+ZZ").unwrap();
        assert!(close(&stabilizer_state(&bell_gens).unwrap(), &bell()));

        let zz = StabilizerGenerators::parse("+ZI,+IZ").unwrap();
        assert!(close(
            &stabilizer_state(&zz).unwrap(),
            &StateVector::basis(&[0, 0]).unwrap()
        ));

        assert_eq!(
            StabilizerGenerators::parse("+XX,+ZX"),
            Err(QsvError::NonCommuting(0, 1))
        );
        assert_eq!(
            StabilizerGenerators::parse("+ZZ,-ZZ"),
            Err(QsvError::DependentGenerators)
        );
        let short = StabilizerGenerators::parse("+ZZ").unwrap();
        assert!(matches!(
            stabilizer_state(&short),
            Err(QsvError::GeneratorCount { .. })
        ));
    }

    #[test]
    fn stabilizers_fix_their_state() {
        let gens = StabilizerGenerators::parse("+XXX,-XYY,+ZZI").unwrap();
        let psi = stabilizer_state(&gens).unwrap();
        for g in gens.generators() {
            let gv = g.apply(psi.amplitudes());
            for (a, b) in gv.iter().zip(psi.amplitudes()) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn graph_states() {
        let edge = adjacency_from_edges(2, &[(0, 1)]).unwrap();
        let psi = graph_state(&edge).unwrap();
        for g in ["XZ", "ZX"] {
            let g: PauliString = g.parse().unwrap();
            let gv = g.apply(psi.amplitudes());
            assert!(gv
                .iter()
                .zip(psi.amplitudes())
                .all(|(a, b)| (a - b).norm() < 1e-9));
        }

        let empty = adjacency_from_edges(3, &[]).unwrap();
        let plus3 = graph_state(&empty).unwrap();
        let a = 1.0 / 8f64.sqrt();
        assert!(plus3.amplitudes().iter().all(|x| (x.re - a).abs() < 1e-12));

        let tri = adjacency_from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let psi = graph_state(&tri).unwrap();
        let gens = StabilizerGenerators::from_graph(&tri).unwrap();
        for g in gens.generators() {
            let gv = g.apply(psi.amplitudes());
            assert!(gv
                .iter()
                .zip(psi.amplitudes())
                .all(|(a, b)| (a - b).norm() < 1e-9));
        }

        let asym = vec![vec![false, true], vec![false, false]];
        assert!(matches!(
            graph_state(&asym),
            Err(QsvError::InvalidAdjacency(_))
        ));
        let looped = vec![vec![true, false], vec![false, false]];
        assert!(matches!(
            graph_state(&looped),
            Err(QsvError::InvalidAdjacency(_))
        ));
    }

    #[test]
    fn spec_grammar() {
        assert_eq!(parse_state_spec("ghz:3").unwrap(), ghz(3).unwrap());
        assert_eq!(parse_state_spec("w:3").unwrap(), dicke(3, 1).unwrap());
        assert_eq!(parse_state_spec("dicke:4:2").unwrap(), dicke(4, 2).unwrap());
        assert!(close(&parse_state_spec("stab:+XX,+ZZ").unwrap(), &bell()));
        assert!(close(&parse_state_spec("vec:1,0,0,1").unwrap(), &bell()));
        let plus_i = parse_state_spec("vec:1, 1i").unwrap();
        assert!((plus_i.amplitudes()[1].im - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let mixed = parse_state_spec("vec:0.5+0.5i,-1e-1-2j").unwrap();
        assert!(is_normalized(&mixed));
        let g = parse_state_spec("graph:0-1;1-2").unwrap();
        assert_eq!(g.qubits(), 3);
        assert_eq!(parse_state_spec("graph:4:0-1").unwrap().qubits(), 4);

        assert!(matches!(
            parse_state_spec("ghz:x"),
            Err(QsvError::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_state_spec("foo"),
            Err(QsvError::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_state_spec("stab:+XX,+ZQ"),
            Err(QsvError::Parse { pos: 11, .. })
        ));
        assert!(matches!(
            parse_state_spec("ghz:9"),
            Err(QsvError::QubitRange { .. })
        ));
    }

    #[test]
    fn full_group_of_ghz3() {
        let gens = StabilizerGenerators::parse("+XXX,+ZZI,+IZZ").unwrap();
        let all = gens.nontrivial_elements();
        assert_eq!(all.len(), 7);
        let names: Vec<String> = all.iter().map(|p| p.to_string()).collect();
        for want in ["+ZIZ", "-YYX", "-XYY", "-YXY"] {
            assert!(
                names.contains(&want.to_string()),
                "{want} missing from {names:?}"
            );
        }
    }
}
