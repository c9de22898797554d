//! The continuity witness: a GHZ register whose relative phase accumulates
//! the parity of every challenge it has answered.

use crate::error::{Error, Result};
use crate::quantum::{
    check_probability, check_qubit_count, sample_depolarizing_errors, Basis, Bitstring,
    OutcomeSampler, StateVector,
};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessState {
    n: usize,
    phase: u8,
    rounds_elapsed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Challenge {
    pub bits: Bitstring,
    pub round: u64,
}

impl Challenge {
    pub fn parity(&self) -> u8 {
        parity(self.bits)
    }
}

/// Per-round measurement transcript: every shot, in the requested basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub basis: Basis,
    pub shots: Vec<Bitstring>,
    pub round: u64,
}

pub fn parity(bits: Bitstring) -> u8 {
    (bits.count_ones() & 1) as u8
}

impl WitnessState {
    pub fn new(n: usize, secret_phase: u8) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(WitnessState {
            n,
            phase: secret_phase & 1,
            rounds_elapsed: 0,
        })
    }

    /// Freshly prepared witness that will next answer the challenge for
    /// round `rounds_elapsed + 1`.
    pub fn fresh_at_round(n: usize, secret_phase: u8, rounds_elapsed: u64) -> Result<Self> {
        let mut w = Self::new(n, secret_phase)?;
        w.rounds_elapsed = rounds_elapsed;
        Ok(w)
    }

    /// Witness with a secret phase drawn uniformly from `rng`.
    pub fn with_random_phase(n: usize, rng: &mut RngStream) -> Result<Self> {
        Self::new(n, rng.bit())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn rounds_elapsed(&self) -> u64 {
        self.rounds_elapsed
    }

    /// Applies Z to qubit 0 when the challenge parity is odd.
    pub fn update(&mut self, challenge: &Challenge) -> Result<()> {
        let expected = self.rounds_elapsed + 1;
        if challenge.round != expected {
            return Err(Error::RoundMismatch {
                expected,
                got: challenge.round,
            });
        }
        self.phase ^= challenge.parity();
        self.rounds_elapsed = expected;
        Ok(())
    }

    /// Flips the phase without recording a round. Models tampering.
    pub fn corrupt_phase(&mut self) {
        self.phase ^= 1;
    }

    pub fn state_vector(&self) -> Result<StateVector> {
        StateVector::ghz_with_phase(self.n, self.phase)
    }

    /// Re-prepares the witness for every shot, passes it through the
    /// depolarizing channel and measures all qubits in `basis`.
    pub fn generate_evidence(
        &self,
        basis: Basis,
        shots: usize,
        noise_p: f64,
        rng: &mut RngStream,
    ) -> Result<Evidence> {
        let state = self.state_vector()?;
        let shots = measure_shots(&state, basis, shots, noise_p, rng)?;
        Ok(Evidence {
            basis,
            shots,
            round: self.rounds_elapsed,
        })
    }
}

/// `shots` independent preparations of `prepared`, each followed by one
/// depolarizing trajectory and a full measurement in `basis`.
pub fn measure_shots(
    prepared: &StateVector,
    basis: Basis,
    shots: usize,
    noise_p: f64,
    rng: &mut RngStream,
) -> Result<Vec<Bitstring>> {
    if shots == 0 {
        return Err(Error::config("shots", "at least one shot is required"));
    }
    check_probability("noise_p", noise_p)?;
    let clean = OutcomeSampler::new(prepared, basis)?;
    let mut out = Vec::with_capacity(shots);
    for _ in 0..shots {
        let errors = sample_depolarizing_errors(prepared.n_qubits(), noise_p, rng)?;
        if errors.is_empty() {
            out.push(clean.sample(rng));
        } else {
            let mut noisy = prepared.clone();
            for err in errors {
                noisy.apply_pauli(err)?;
            }
            out.push(noisy.sample(basis, rng)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn challenge(bits: &str, round: u64) -> Challenge {
        Challenge {
            bits: Bitstring::parse(bits).unwrap(),
            round,
        }
    }

    #[test]
    fn init_fields() {
        let w = WitnessState::new(4, 0).unwrap();
        assert_eq!((w.phase(), w.rounds_elapsed()), (0, 0));
        assert_eq!(WitnessState::new(4, 1).unwrap().phase(), 1);
        assert!(WitnessState::new(25, 0).unwrap_err().is_config());
    }

    #[test]
    fn random_secret_is_roughly_uniform() {
        let mut rng = RngStream::from_seed(77);
        let trials = 10_000;
        let ones: u32 = (0..trials)
            .map(|_| {
                u32::from(
                    WitnessState::with_random_phase(3, &mut rng)
                        .unwrap()
                        .phase(),
                )
            })
            .sum();
        let sigma = (0.25f64 / f64::from(trials)).sqrt();
        assert!((f64::from(ones) / f64::from(trials) - 0.5).abs() < 4.0 * sigma);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(Bitstring::parse("1011").unwrap()), 1);
        assert_eq!(parity(Bitstring::parse("0000").unwrap()), 0);
        assert_eq!(parity(Bitstring::parse("11").unwrap()), 0);
    }

    #[test]
    fn update_branches() {
        let mut w = WitnessState::new(3, 0).unwrap();
        w.update(&challenge("1000", 1)).unwrap();
        assert_eq!(w.phase(), 1);
        w.update(&challenge("1100", 2)).unwrap();
        assert_eq!(w.phase(), 1);
        w.update(&challenge("0001", 3)).unwrap();
        assert_eq!(w.phase(), 0);
        assert_eq!(w.rounds_elapsed(), 3);
    }

    #[test]
    fn update_rejects_out_of_order_round() {
        let mut w = WitnessState::new(3, 0).unwrap();
        let err = w.update(&challenge("1", 2)).unwrap_err();
        assert!(matches!(
            err,
            Error::RoundMismatch {
                expected: 1,
                got: 2
            }
        ));
        assert_eq!(w.rounds_elapsed(), 0);
    }

    #[test]
    fn noiseless_x_evidence_parity_tracks_phase() {
        let mut rng = RngStream::from_seed(3);
        for phase in [0u8, 1] {
            let w = WitnessState::new(5, phase).unwrap();
            let ev = w.generate_evidence(Basis::X, 100, 0.0, &mut rng).unwrap();
            assert_eq!(ev.shots.len(), 100);
            assert!(ev.shots.iter().all(|s| parity(*s) == phase && s.len() == 5));
        }
    }

    #[test]
    fn noiseless_z_evidence_is_all_equal() {
        let mut rng = RngStream::from_seed(3);
        for phase in [0u8, 1] {
            let w = WitnessState::new(4, phase).unwrap();
            let ev = w.generate_evidence(Basis::Z, 200, 0.0, &mut rng).unwrap();
            assert!(ev.shots.iter().all(|s| s.is_all_zeros() || s.is_all_ones()));
        }
    }

    #[test]
    fn zero_shots_rejected() {
        let w = WitnessState::new(2, 0).unwrap();
        let err = w
            .generate_evidence(Basis::X, 0, 0.0, &mut RngStream::from_seed(0))
            .unwrap_err();
        assert!(err.is_config());
    }
}
