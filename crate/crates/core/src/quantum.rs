//! Dense statevector simulator.
//!
//! Only what the witness protocol needs: GHZ preparation, Pauli/H/CNOT
//! gates, sampling in the Z and X bases, and depolarizing noise realized as
//! sampled Pauli trajectories. Qubit 0 is the least significant bit of an
//! amplitude index.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub const MAX_QUBITS: usize = 24;

const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    X,
    Z,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::X => f.write_str("X"),
            Basis::Z => f.write_str("Z"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
}

/// A single-qubit Pauli error on a specific qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliError {
    pub axis: Pauli,
    pub qubit: usize,
}

/// Up to 64 classical bits; bit `i` holds qubit (or challenge position) `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Bitstring {
    bits: u64,
    len: u8,
}

impl Bitstring {
    pub const MAX_LEN: usize = 64;

    /// Panics if `len > 64` or `bits` has set bits at or above `len`.
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= Self::MAX_LEN, "bitstring longer than 64 bits");
        assert!(
            len == 64 || bits >> len == 0,
            "bits set beyond bitstring length"
        );
        Bitstring {
            bits,
            len: len as u8,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Self {
        let bits = if len == 64 {
            u64::MAX
        } else {
            (1u64 << len) - 1
        };
        Self::new(bits, len)
    }

    /// Parses a ket-style string: the leftmost character is the highest bit.
    pub fn parse(s: &str) -> Option<Self> {
        if s.len() > Self::MAX_LEN {
            return None;
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return None,
                };
        }
        Some(Self::new(bits, s.len()))
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let value = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b & 1) << i));
        Self::new(value, bits.len())
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> u8 {
        assert!(i < self.len(), "bit index out of range");
        ((self.bits >> i) & 1) as u8
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_all_zeros(&self) -> bool {
        self.bits == 0
    }

    pub fn is_all_ones(&self) -> bool {
        *self == Self::ones(self.len())
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len()).rev() {
            f.write_str(if self.get(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

/// Pure state of `n_qubits` qubits as a dense amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

pub(crate) fn check_qubit_count(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::config(
            "n",
            format!("qubit count {n} outside supported range 1..={MAX_QUBITS}"),
        ))
    }
}

pub(crate) fn check_probability(field: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::config(
            field,
            format!("{p} is not a probability in [0, 1]"),
        ))
    }
}

impl StateVector {
    /// |0…0⟩ on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits: n,
            amplitudes,
        })
    }

    /// (|0…0⟩ + |1…1⟩)/√2, built as H on qubit 0 followed by a CNOT ladder.
    pub fn ghz(n: usize) -> Result<Self> {
        let mut state = Self::zero(n)?;
        state.hadamard(0)?;
        for q in 1..n {
            state.cnot(q - 1, q)?;
        }
        Ok(state)
    }

    /// GHZ state with relative phase (-1)^phase on the |1…1⟩ branch.
    pub fn ghz_with_phase(n: usize, phase: u8) -> Result<Self> {
        let mut state = Self::ghz(n)?;
        if phase & 1 == 1 {
            state.apply_pauli(PauliError {
                axis: Pauli::Z,
                qubit: 0,
            })?;
        }
        Ok(state)
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::config(
                "amplitudes",
                format!("length {len} is not a power of two"),
            ));
        }
        let n = len.trailing_zeros() as usize;
        check_qubit_count(n)?;
        let state = StateVector {
            n_qubits: n,
            amplitudes,
        };
        state.check_normalized()?;
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_normalized(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            Err(Error::Normalization { norm })
        } else {
            Ok(())
        }
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit < self.n_qubits {
            Ok(())
        } else {
            Err(Error::QubitIndex {
                index: qubit,
                n_qubits: self.n_qubits,
            })
        }
    }

    pub fn apply_pauli(&mut self, err: PauliError) -> Result<()> {
        self.check_qubit(err.qubit)?;
        let mask = 1usize << err.qubit;
        let i_unit = Complex64::new(0.0, 1.0);
        match err.axis {
            Pauli::X => {
                for i in (0..self.amplitudes.len()).filter(|i| i & mask == 0) {
                    self.amplitudes.swap(i, i | mask);
                }
            }
            Pauli::Y => {
                for i in (0..self.amplitudes.len()).filter(|i| i & mask == 0) {
                    let a0 = self.amplitudes[i];
                    let a1 = self.amplitudes[i | mask];
                    self.amplitudes[i] = -i_unit * a1;
                    self.amplitudes[i | mask] = i_unit * a0;
                }
            }
            Pauli::Z => {
                for (_, a) in self
                    .amplitudes
                    .iter_mut()
                    .enumerate()
                    .filter(|(i, _)| i & mask != 0)
                {
                    *a = -*a;
                }
            }
        }
        Ok(())
    }

    pub fn hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in (0..self.amplitudes.len()).filter(|i| i & mask == 0) {
            let a = self.amplitudes[i];
            let b = self.amplitudes[i | mask];
            self.amplitudes[i] = (a + b) * s;
            self.amplitudes[i | mask] = (a - b) * s;
        }
        Ok(())
    }

    /// H on every qubit; maps X-basis amplitudes onto the computational basis.
    pub fn hadamard_all(&mut self) {
        for q in 0..self.n_qubits {
            self.hadamard(q).expect("qubit index in range");
        }
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::config("cnot", "control and target must differ"));
        }
        let (cm, tm) = (1usize << control, 1usize << target);
        for i in (0..self.amplitudes.len()).filter(|i| i & cm != 0 && i & tm == 0) {
            self.amplitudes.swap(i, i | tm);
        }
        Ok(())
    }

    /// Independently per qubit: with probability `p` apply X, Y or Z chosen
    /// uniformly. Returns the errors that were applied.
    pub fn apply_depolarizing(&mut self, p: f64, rng: &mut RngStream) -> Result<Vec<PauliError>> {
        let errors = sample_depolarizing_errors(self.n_qubits, p, rng)?;
        for &err in &errors {
            self.apply_pauli(err)?;
        }
        Ok(errors)
    }

    /// Outcome distribution over computational-basis indices after rotating
    /// into `basis`.
    pub fn probabilities(&self, basis: Basis) -> Result<Vec<f64>> {
        self.check_normalized()?;
        let probs = match basis {
            Basis::Z => self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
            Basis::X => {
                let mut work = self.clone();
                work.hadamard_all();
                work.amplitudes.iter().map(|a| a.norm_sqr()).collect()
            }
        };
        Ok(probs)
    }

    pub fn sample(&self, basis: Basis, rng: &mut RngStream) -> Result<Bitstring> {
        Ok(OutcomeSampler::new(self, basis)?.sample(rng))
    }

    pub fn sample_z(&self, rng: &mut RngStream) -> Result<Bitstring> {
        self.sample(Basis::Z, rng)
    }

    pub fn sample_x(&self, rng: &mut RngStream) -> Result<Bitstring> {
        self.sample(Basis::X, rng)
    }
}

/// Draws the Pauli errors of one depolarizing trajectory without applying them.
pub fn sample_depolarizing_errors(
    n_qubits: usize,
    p: f64,
    rng: &mut RngStream,
) -> Result<Vec<PauliError>> {
    check_probability("noise_p", p)?;
    let mut errors = Vec::new();
    for qubit in 0..n_qubits {
        if rng.bernoulli(p) {
            errors.push(PauliError {
                axis: Pauli::ALL[rng.below(3)],
                qubit,
            });
        }
    }
    Ok(errors)
}

/// Inverse-CDF sampler over the outcome distribution of a state in a basis.
/// Sampling does not collapse the source state.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    n_qubits: usize,
    cumulative: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(state: &StateVector, basis: Basis) -> Result<Self> {
        let probs = state.probabilities(basis)?;
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(OutcomeSampler {
            n_qubits: state.n_qubits,
            cumulative,
        })
    }

    pub fn sample(&self, rng: &mut RngStream) -> Bitstring {
        let total = *self.cumulative.last().expect("non-empty distribution");
        let u = rng.uniform() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        // Float round-off can push `u` past the last nonzero bucket.
        let idx = idx.min(self.cumulative.len() - 1);
        let idx = self.skip_zero_bucket(idx);
        Bitstring::new(idx as u64, self.n_qubits)
    }

    fn skip_zero_bucket(&self, idx: usize) -> usize {
        let prob = |i: usize| {
            if i == 0 {
                self.cumulative[0]
            } else {
                self.cumulative[i] - self.cumulative[i - 1]
            }
        };
        if prob(idx) > 0.0 {
            return idx;
        }
        (0..=idx).rev().find(|&i| prob(i) > 0.0).unwrap_or(idx)
    }
}
