//! Verifier and prover round logic: challenge issuance, basis selection,
//! the X/Z audit rules, the temporal round and the stateless baseline round.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{check_probability, check_qubit_count, Basis, Bitstring};
use crate::rng::RngStream;
use crate::witness::{parity, Challenge, Evidence, WitnessState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BasisPolicy {
    FixedX,
    FixedZ,
    /// X with probability `p_x`, otherwise Z.
    Bernoulli(f64),
}

impl BasisPolicy {
    pub fn label(&self) -> String {
        match self {
            BasisPolicy::FixedX => "fixed-x".into(),
            BasisPolicy::FixedZ => "fixed-z".into(),
            BasisPolicy::Bernoulli(p) => format!("bernoulli:{p}"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fixed-x" | "x" => Some(BasisPolicy::FixedX),
            "fixed-z" | "z" => Some(BasisPolicy::FixedZ),
            "bernoulli" | "random" | "mixed" => Some(BasisPolicy::Bernoulli(0.5)),
            _ => {
                let p: f64 = s.strip_prefix("bernoulli:")?.parse().ok()?;
                (0.0..=1.0)
                    .contains(&p)
                    .then_some(BasisPolicy::Bernoulli(p))
            }
        }
    }
}

/// Parameters shared by every round of one protocol execution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n_qubits: usize,
    pub k_challenge_bits: usize,
    pub shots: usize,
    pub tau_x: f64,
    pub tau_z: f64,
    pub basis_policy: BasisPolicy,
    pub noise_p: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            n_qubits: 4,
            k_challenge_bits: 8,
            shots: 32,
            tau_x: 0.85,
            tau_z: 0.85,
            basis_policy: BasisPolicy::Bernoulli(0.5),
            noise_p: 0.0,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        check_qubit_count(self.n_qubits)?;
        if !(1..=Bitstring::MAX_LEN).contains(&self.k_challenge_bits) {
            return Err(Error::config(
                "k_challenge_bits",
                format!(
                    "{} outside supported range 1..={}",
                    self.k_challenge_bits,
                    Bitstring::MAX_LEN
                ),
            ));
        }
        if self.shots == 0 {
            return Err(Error::config("shots", "at least one shot is required"));
        }
        check_probability("tau_x", self.tau_x)?;
        check_probability("tau_z", self.tau_z)?;
        check_probability("noise_p", self.noise_p)?;
        if let BasisPolicy::Bernoulli(p) = self.basis_policy {
            check_probability("basis_policy", p)?;
        }
        Ok(())
    }
}

/// The verifier's classical view of one execution.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifierState {
    expected_phase: u8,
    rounds_issued: u64,
    pub tau_x: f64,
    pub tau_z: f64,
    pub basis_policy: BasisPolicy,
    pub k_challenge_bits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditOutcome {
    pub basis: Basis,
    pub pass_fraction: f64,
    pub accepted: bool,
    pub round: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTranscript {
    pub round: u64,
    pub challenge: Challenge,
    pub basis: Basis,
    pub evidence: Evidence,
    pub outcome: AuditOutcome,
}

impl VerifierState {
    /// Verifier that knows the prover's secret initial phase.
    pub fn new(config: &ProtocolConfig, secret_phase: u8) -> Self {
        Self::at_round(config, secret_phase, 0)
    }

    /// Verifier whose next challenge is for round `rounds_issued + 1`.
    pub fn at_round(config: &ProtocolConfig, expected_phase: u8, rounds_issued: u64) -> Self {
        VerifierState {
            expected_phase: expected_phase & 1,
            rounds_issued,
            tau_x: config.tau_x,
            tau_z: config.tau_z,
            basis_policy: config.basis_policy,
            k_challenge_bits: config.k_challenge_bits,
        }
    }

    pub fn expected_phase(&self) -> u8 {
        self.expected_phase
    }

    pub fn rounds_issued(&self) -> u64 {
        self.rounds_issued
    }

    /// Draws `k` uniform challenge bits for the next round and folds their
    /// parity into the expected phase.
    pub fn issue_challenge(&mut self, rng: &mut RngStream) -> Challenge {
        let bits = Bitstring::from_bits(&rng.bits(self.k_challenge_bits));
        let challenge = Challenge {
            bits,
            round: self.rounds_issued + 1,
        };
        self.observe_challenge(&challenge);
        challenge
    }

    /// Records a challenge issued elsewhere (shared-challenge forks).
    pub fn observe_challenge(&mut self, challenge: &Challenge) {
        self.rounds_issued = challenge.round;
        self.expected_phase ^= parity(challenge.bits);
    }

    pub fn choose_basis(&self, rng: &mut RngStream) -> Basis {
        match self.basis_policy {
            BasisPolicy::FixedX => Basis::X,
            BasisPolicy::FixedZ => Basis::Z,
            BasisPolicy::Bernoulli(p_x) => {
                if rng.bernoulli(p_x) {
                    Basis::X
                } else {
                    Basis::Z
                }
            }
        }
    }

    /// X audits count shots whose parity equals the expected phase; Z audits
    /// count shots that are all-zeros or all-ones and ignore the phase.
    pub fn audit(&self, requested: Basis, evidence: &Evidence) -> Result<AuditOutcome> {
        if evidence.basis != requested {
            return Err(Error::BasisMismatch {
                requested,
                got: evidence.basis,
            });
        }
        if evidence.shots.is_empty() {
            return Err(Error::MalformedEvidence {
                round: evidence.round,
                message: "empty shot list".into(),
            });
        }
        let (consistent, tau) = match requested {
            Basis::X => (
                evidence
                    .shots
                    .iter()
                    .filter(|s| parity(**s) == self.expected_phase)
                    .count(),
                self.tau_x,
            ),
            Basis::Z => (
                evidence
                    .shots
                    .iter()
                    .filter(|s| s.is_all_zeros() || s.is_all_ones())
                    .count(),
                self.tau_z,
            ),
        };
        let pass_fraction = consistent as f64 / evidence.shots.len() as f64;
        Ok(AuditOutcome {
            basis: requested,
            pass_fraction,
            accepted: pass_fraction >= tau,
            round: evidence.round,
        })
    }
}

/// One round of the temporal protocol: challenge, witness update, basis
/// choice, evidence and audit. Both states are advanced in place.
pub fn run_temporal_round(
    verifier: &mut VerifierState,
    witness: &mut WitnessState,
    config: &ProtocolConfig,
    rng: &mut RngStream,
) -> Result<RoundTranscript> {
    let challenge = verifier.issue_challenge(rng);
    witness.update(&challenge)?;
    let basis = verifier.choose_basis(rng);
    let evidence = witness.generate_evidence(basis, config.shots, config.noise_p, rng)?;
    let outcome = verifier.audit(basis, &evidence)?;
    Ok(RoundTranscript {
        round: challenge.round,
        challenge,
        basis,
        evidence,
        outcome,
    })
}

/// Fresh prover state for a single stateless round: a new random secret
/// phase, known to the verifier, with no link to earlier rounds.
pub fn fresh_stateless_pair(
    config: &ProtocolConfig,
    round: u64,
    rng: &mut RngStream,
) -> Result<(VerifierState, WitnessState)> {
    if round == 0 {
        return Err(Error::config("round", "rounds are numbered from 1"));
    }
    let phase = rng.bit();
    let witness = WitnessState::fresh_at_round(config.n_qubits, phase, round - 1)?;
    let verifier = VerifierState::at_round(config, phase, round - 1);
    Ok((verifier, witness))
}

/// One round of the stateless baseline with an honest prover.
pub fn run_stateless_round(
    config: &ProtocolConfig,
    round: u64,
    rng: &mut RngStream,
) -> Result<(RoundTranscript, bool)> {
    let (mut verifier, mut witness) = fresh_stateless_pair(config, round, rng)?;
    let transcript = run_temporal_round(&mut verifier, &mut witness, config, rng)?;
    let accepted = transcript.outcome.accepted;
    Ok((transcript, accepted))
}
