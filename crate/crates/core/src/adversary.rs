//! Fork orchestration and the attacker models that answer challenges on
//! the forked branch.
//!
//! A simulated branch is constructed without any access to the true
//! witness; the only way it can learn the secret phase is by guessing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Basis, StateVector};
use crate::rng::RngStream;
use crate::witness::{measure_shots, Challenge, Evidence, WitnessState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemorylessStrategy {
    /// Fresh uniform phase guess every round.
    RandomPhaseGhz,
    /// Constant base guess every round.
    FixedPhaseGhz(u8),
    /// Unentangled |0…0⟩ in place of the witness.
    ProductState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttackerModel {
    Memoryless(MemorylessStrategy),
    /// Tracks challenge parities correctly but loses its phase knowledge
    /// every `k` rounds and must re-guess.
    LimitedMemory {
        k: u64,
    },
    /// Holds a perfect copy of the witness. Physically impossible; serves
    /// as the upper bound.
    IdealCoherent,
}

impl AttackerModel {
    pub const MEMORYLESS: AttackerModel =
        AttackerModel::Memoryless(MemorylessStrategy::RandomPhaseGhz);

    pub fn validate(&self) -> Result<()> {
        match *self {
            AttackerModel::LimitedMemory { k: 0 } => Err(Error::config(
                "attacker",
                "limited-memory horizon k must be at least 1",
            )),
            AttackerModel::Memoryless(MemorylessStrategy::FixedPhaseGhz(b)) if b > 1 => Err(
                Error::config("attacker", format!("fixed phase guess {b} is not a bit")),
            ),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AttackerModel::Memoryless(MemorylessStrategy::RandomPhaseGhz) => "memoryless".into(),
            AttackerModel::Memoryless(MemorylessStrategy::FixedPhaseGhz(b)) => {
                format!("memoryless-fixed-{b}")
            }
            AttackerModel::Memoryless(MemorylessStrategy::ProductState) => "product-state".into(),
            AttackerModel::LimitedMemory { k } => format!("limited:{k}"),
            AttackerModel::IdealCoherent => "ideal-coherent".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase();
        Some(match s.as_str() {
            "memoryless" | "memoryless-random" => AttackerModel::MEMORYLESS,
            "memoryless-fixed-0" => AttackerModel::Memoryless(MemorylessStrategy::FixedPhaseGhz(0)),
            "memoryless-fixed-1" => AttackerModel::Memoryless(MemorylessStrategy::FixedPhaseGhz(1)),
            "product" | "product-state" => {
                AttackerModel::Memoryless(MemorylessStrategy::ProductState)
            }
            "ideal" | "ideal-coherent" => AttackerModel::IdealCoherent,
            _ => {
                let k = s
                    .strip_prefix("limited:")
                    .or_else(|| s.strip_prefix("limited-memory:"))?;
                AttackerModel::LimitedMemory { k: k.parse().ok()? }
            }
        })
    }
}

impl fmt::Display for AttackerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchId {
    B0,
    B1,
}

/// Classical stand-in for the witness on a forked branch.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedProver {
    n: usize,
    model: AttackerModel,
    phase_estimate: u8,
    rounds_answered: u64,
    rounds_since_fork: u64,
    observed_parities: Vec<u8>,
}

impl SimulatedProver {
    /// Starts from a uniform (or fixed) phase guess; takes no witness input.
    pub fn new(n: usize, model: AttackerModel, rounds_answered: u64, rng: &mut RngStream) -> Self {
        let phase_estimate = match model {
            AttackerModel::Memoryless(MemorylessStrategy::FixedPhaseGhz(b)) => b & 1,
            _ => rng.bit(),
        };
        SimulatedProver {
            n,
            model,
            phase_estimate,
            rounds_answered,
            rounds_since_fork: 0,
            observed_parities: Vec::new(),
        }
    }

    pub fn phase_estimate(&self) -> u8 {
        self.phase_estimate
    }

    pub fn observed_parities(&self) -> &[u8] {
        &self.observed_parities
    }

    fn advance(&mut self, challenge: &Challenge, rng: &mut RngStream) -> Result<()> {
        let expected = self.rounds_answered + 1;
        if challenge.round != expected {
            return Err(Error::RoundMismatch {
                expected,
                got: challenge.round,
            });
        }
        self.rounds_answered = expected;
        self.rounds_since_fork += 1;
        let p = challenge.parity();
        self.observed_parities.push(p);
        match self.model {
            AttackerModel::Memoryless(MemorylessStrategy::RandomPhaseGhz) => {
                self.phase_estimate = rng.bit() ^ p;
            }
            AttackerModel::Memoryless(MemorylessStrategy::FixedPhaseGhz(b)) => {
                self.phase_estimate = (b & 1) ^ p;
            }
            AttackerModel::Memoryless(MemorylessStrategy::ProductState) => {}
            AttackerModel::LimitedMemory { k } => {
                // The guess drawn at fork time covers rounds 1..=k.
                if self.rounds_since_fork > 1 && (self.rounds_since_fork - 1).is_multiple_of(k) {
                    self.phase_estimate = rng.bit();
                }
                self.phase_estimate ^= p;
            }
            AttackerModel::IdealCoherent => unreachable!("ideal coherent branches hold a copy"),
        }
        Ok(())
    }

    fn prepared_state(&self) -> Result<StateVector> {
        match self.model {
            AttackerModel::Memoryless(MemorylessStrategy::ProductState) => {
                StateVector::zero(self.n)
            }
            _ => StateVector::ghz_with_phase(self.n, self.phase_estimate),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessAccess {
    /// The original witness.
    True(WitnessState),
    /// A perfect clone held by the ideal coherent adversary.
    CoherentCopy(WitnessState),
    Simulated(SimulatedProver),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForkBranch {
    pub id: BranchId,
    pub access: WitnessAccess,
}

/// Splits an execution at round `t_fork`. B0 keeps the real witness; B1 is
/// built according to `model`.
pub fn fork(
    witness: WitnessState,
    t_fork: u64,
    model: AttackerModel,
    rng: &mut RngStream,
) -> Result<(ForkBranch, ForkBranch)> {
    model.validate()?;
    if t_fork != witness.rounds_elapsed() {
        return Err(Error::config(
            "t_fork",
            format!(
                "cannot fork at round {t_fork}: execution history has {} rounds",
                witness.rounds_elapsed()
            ),
        ));
    }
    let b1 = match model {
        AttackerModel::IdealCoherent => WitnessAccess::CoherentCopy(witness.clone()),
        _ => WitnessAccess::Simulated(SimulatedProver::new(witness.n_qubits(), model, t_fork, rng)),
    };
    Ok((
        ForkBranch {
            id: BranchId::B0,
            access: WitnessAccess::True(witness),
        },
        ForkBranch {
            id: BranchId::B1,
            access: b1,
        },
    ))
}

impl ForkBranch {
    pub fn holds_true_witness(&self) -> bool {
        matches!(self.access, WitnessAccess::True(_))
    }

    /// Answers one challenge and measures in the requested basis.
    pub fn respond(
        &mut self,
        challenge: &Challenge,
        basis: Basis,
        shots: usize,
        noise_p: f64,
        rng: &mut RngStream,
    ) -> Result<Evidence> {
        match &mut self.access {
            WitnessAccess::True(w) | WitnessAccess::CoherentCopy(w) => {
                w.update(challenge)?;
                w.generate_evidence(basis, shots, noise_p, rng)
            }
            WitnessAccess::Simulated(sim) => {
                sim.advance(challenge, rng)?;
                let state = sim.prepared_state()?;
                Ok(Evidence {
                    basis,
                    shots: measure_shots(&state, basis, shots, noise_p, rng)?,
                    round: challenge.round,
                })
            }
        }
    }
}
