//! The two-branch fork security game, honest executions, and the APR/FSR
//! estimators.
//!
//! Every trial draws from its own stream derived from
//! `(master_seed, domain, trial_index)`, and aggregation is plain counting,
//! so results do not depend on how trials are scheduled across threads.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{fork, AttackerModel, ForkBranch};
use crate::error::{Error, Result};
use crate::protocol::{
    fresh_stateless_pair, run_stateless_round, run_temporal_round, ProtocolConfig, RoundTranscript,
    VerifierState,
};
use crate::rng::{Domain, RngStream};
use crate::stats::{wilson_interval, Z95};
use crate::witness::{Challenge, WitnessState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    Temporal,
    Stateless,
}

impl Protocol {
    pub fn label(&self) -> &'static str {
        match self {
            Protocol::Temporal => "temporal",
            Protocol::Stateless => "stateless",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "temporal" => Some(Protocol::Temporal),
            "stateless" => Some(Protocol::Stateless),
            _ => None,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How Phase-2 challenges reach the two branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChallengeMode {
    /// One challenge per round, sent to both branches.
    Shared,
    /// Each branch gets its own challenge stream.
    Independent,
}

impl ChallengeMode {
    pub fn label(&self) -> &'static str {
        match self {
            ChallengeMode::Shared => "shared",
            ChallengeMode::Independent => "independent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "shared" => Some(ChallengeMode::Shared),
            "independent" => Some(ChallengeMode::Independent),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub protocol: ProtocolConfig,
    /// Audit window W: Phase-2 rounds both branches must survive.
    pub window: usize,
    pub t_fork: usize,
    pub attacker: AttackerModel,
    pub challenge_mode: ChallengeMode,
    pub trials: usize,
    pub master_seed: u64,
}

pub const DEFAULT_MASTER_SEED: u64 = 20_260_101;

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            protocol: ProtocolConfig::default(),
            window: 5,
            t_fork: 3,
            attacker: AttackerModel::MEMORYLESS,
            challenge_mode: ChallengeMode::Shared,
            trials: 5_000,
            master_seed: DEFAULT_MASTER_SEED,
        }
    }
}

impl GameConfig {
    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        self.attacker.validate()?;
        if self.trials == 0 {
            return Err(Error::config("trials", "at least one trial is required"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GameResult {
    pub protocol: Protocol,
    /// Fraction of honest rounds accepted.
    pub apr: f64,
    /// Temporal: fraction of games won by the adversary. Stateless: fraction
    /// of rounds in which both branches were accepted.
    pub fsr: f64,
    pub fsr_ci: (f64, f64),
    pub trials_run: u64,
    pub wins: u64,
    /// Denominator of `fsr` (games for temporal, rounds for stateless).
    pub fork_samples: u64,
    pub honest_rounds: u64,
    pub honest_accepted: u64,
}

/// Full record of one security game, kept for inspection and replay.
#[derive(Debug, Clone)]
pub struct GameTranscript {
    pub history: Vec<RoundTranscript>,
    pub branch0: Vec<RoundTranscript>,
    pub branch1: Vec<RoundTranscript>,
    pub adversary_wins: bool,
}

struct GameStreams {
    challenger: RngStream,
    verifier0: RngStream,
    verifier1: RngStream,
    prover0: RngStream,
    prover1: RngStream,
}

impl GameStreams {
    fn new(rng: &mut RngStream) -> Self {
        GameStreams {
            challenger: rng.fork(),
            verifier0: rng.fork(),
            verifier1: rng.fork(),
            prover0: rng.fork(),
            prover1: rng.fork(),
        }
    }
}

fn respond_and_audit(
    branch: &mut ForkBranch,
    verifier: &VerifierState,
    challenge: Challenge,
    config: &ProtocolConfig,
    verifier_rng: &mut RngStream,
    prover_rng: &mut RngStream,
) -> Result<RoundTranscript> {
    let basis = verifier.choose_basis(verifier_rng);
    let evidence = branch.respond(&challenge, basis, config.shots, config.noise_p, prover_rng)?;
    let outcome = verifier.audit(basis, &evidence)?;
    Ok(RoundTranscript {
        round: challenge.round,
        challenge,
        basis,
        evidence,
        outcome,
    })
}

fn play(
    config: &GameConfig,
    trial_index: u64,
    record: bool,
) -> Result<(bool, Option<GameTranscript>)> {
    config.validate()?;
    let pc = &config.protocol;
    let mut rng = RngStream::for_trial(config.master_seed, Domain::SecurityGame, trial_index);
    let mut s = GameStreams::new(&mut rng);

    // Setup: the challenger picks the secret phase; only it and the
    // verifier know it.
    let secret = s.challenger.bit();
    let mut witness = WitnessState::new(pc.n_qubits, secret)?;
    let mut verifier = VerifierState::new(pc, secret);

    let mut history = Vec::new();
    for _ in 0..config.t_fork {
        let t = run_temporal_round(&mut verifier, &mut witness, pc, &mut s.prover0)?;
        if record {
            history.push(t);
        }
    }

    let (mut b0, mut b1) = fork(
        witness,
        config.t_fork as u64,
        config.attacker,
        &mut s.prover1,
    )?;
    let mut v0 = verifier.clone();
    let mut v1 = verifier;

    let mut branch0 = Vec::new();
    let mut branch1 = Vec::new();
    let mut won = true;
    for _ in 0..config.window {
        let (c0, c1) = match config.challenge_mode {
            ChallengeMode::Shared => {
                let c = v0.issue_challenge(&mut s.challenger);
                v1.observe_challenge(&c);
                (c, c)
            }
            ChallengeMode::Independent => (
                v0.issue_challenge(&mut s.verifier0),
                v1.issue_challenge(&mut s.verifier1),
            ),
        };
        let t0 = respond_and_audit(&mut b0, &v0, c0, pc, &mut s.verifier0, &mut s.prover0)?;
        let t1 = respond_and_audit(&mut b1, &v1, c1, pc, &mut s.verifier1, &mut s.prover1)?;
        won &= t0.outcome.accepted && t1.outcome.accepted;
        if record {
            branch0.push(t0);
            branch1.push(t1);
        } else if !won {
            break;
        }
    }

    let transcript = record.then_some(GameTranscript {
        history,
        branch0,
        branch1,
        adversary_wins: won,
    });
    Ok((won, transcript))
}

/// One temporal security game; true iff both branches pass every round of
/// the audit window.
pub fn run_security_game(config: &GameConfig, trial_index: u64) -> Result<bool> {
    play(config, trial_index, false).map(|(won, _)| won)
}

/// Same game as [`run_security_game`] with every round recorded.
pub fn play_security_game(config: &GameConfig, trial_index: u64) -> Result<GameTranscript> {
    play(config, trial_index, true).map(|(_, t)| t.expect("recorded transcript"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StatelessTrial {
    pub rounds: u64,
    /// Rounds in which both branches were accepted.
    pub fork_round_wins: u64,
    pub honest_accepted: u64,
}

/// Stateless baseline under a fork: every round re-initializes a fresh
/// witness, and B1 is re-forked from that fresh witness each round.
pub fn run_stateless_game(config: &GameConfig, trial_index: u64) -> Result<StatelessTrial> {
    config.validate()?;
    let pc = &config.protocol;
    let mut rng = RngStream::for_trial(config.master_seed, Domain::StatelessGame, trial_index);
    let mut s = GameStreams::new(&mut rng);
    let start = config.t_fork as u64;
    let mut out = StatelessTrial::default();
    for round in start + 1..=start + config.window as u64 {
        let (verifier, witness) = fresh_stateless_pair(pc, round, &mut s.challenger)?;
        let (mut b0, mut b1) = fork(witness, round - 1, config.attacker, &mut s.prover1)?;
        let mut v0 = verifier.clone();
        let mut v1 = verifier;
        let (c0, c1) = match config.challenge_mode {
            ChallengeMode::Shared => {
                let c = v0.issue_challenge(&mut s.challenger);
                v1.observe_challenge(&c);
                (c, c)
            }
            ChallengeMode::Independent => (
                v0.issue_challenge(&mut s.verifier0),
                v1.issue_challenge(&mut s.verifier1),
            ),
        };
        let a0 = respond_and_audit(&mut b0, &v0, c0, pc, &mut s.verifier0, &mut s.prover0)?
            .outcome
            .accepted;
        let a1 = respond_and_audit(&mut b1, &v1, c1, pc, &mut s.verifier1, &mut s.prover1)?
            .outcome
            .accepted;
        out.rounds += 1;
        out.honest_accepted += u64::from(a0);
        out.fork_round_wins += u64::from(a0 && a1);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HonestRun {
    pub rounds: u64,
    pub accepted: u64,
}

/// `t_fork + window` honest rounds with no fork.
pub fn run_honest_execution(
    config: &GameConfig,
    protocol: Protocol,
    trial_index: u64,
) -> Result<HonestRun> {
    config.validate()?;
    let pc = &config.protocol;
    let mut rng = RngStream::for_trial(config.master_seed, Domain::HonestRun, trial_index);
    let rounds = (config.t_fork + config.window) as u64;
    let mut accepted = 0;
    match protocol {
        Protocol::Temporal => {
            let mut witness = WitnessState::with_random_phase(pc.n_qubits, &mut rng)?;
            let mut verifier = VerifierState::new(pc, witness.phase());
            for _ in 0..rounds {
                let t = run_temporal_round(&mut verifier, &mut witness, pc, &mut rng)?;
                accepted += u64::from(t.outcome.accepted);
            }
        }
        Protocol::Stateless => {
            for round in 1..=rounds {
                let (_, ok) = run_stateless_round(pc, round, &mut rng)?;
                accepted += u64::from(ok);
            }
        }
    }
    Ok(HonestRun { rounds, accepted })
}

/// Audit pass rate over `config.trials` honest executions.
pub fn honest_apr(config: &GameConfig, protocol: Protocol) -> Result<f64> {
    let (rounds, accepted) = honest_counts(config, protocol)?;
    Ok(ratio_or_one(accepted, rounds))
}

fn honest_counts(config: &GameConfig, protocol: Protocol) -> Result<(u64, u64)> {
    (0..config.trials as u64)
        .into_par_iter()
        .map(|i| run_honest_execution(config, protocol, i).map(|r| (r.rounds, r.accepted)))
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
}

fn ratio_or_one(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// Runs `config.trials` games (and as many honest executions) for the given
/// protocol and aggregates APR and FSR with a Wilson 95% interval.
pub fn estimate(config: &GameConfig, protocol: Protocol) -> Result<GameResult> {
    config.validate()?;
    let trials = config.trials as u64;
    let (wins, samples) = match protocol {
        Protocol::Temporal => {
            let wins = (0..trials)
                .into_par_iter()
                .map(|i| run_security_game(config, i).map(u64::from))
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            (wins, trials)
        }
        Protocol::Stateless => (0..trials)
            .into_par_iter()
            .map(|i| run_stateless_game(config, i).map(|t| (t.fork_round_wins, t.rounds)))
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?,
    };
    let (honest_rounds, honest_accepted) = honest_counts(config, protocol)?;
    Ok(GameResult {
        protocol,
        apr: ratio_or_one(honest_accepted, honest_rounds),
        fsr: ratio_or_one(wins, samples),
        fsr_ci: wilson_interval(wins, samples, Z95),
        trials_run: trials,
        wins,
        fork_samples: samples,
        honest_rounds,
        honest_accepted,
    })
}

/// Temporal-protocol FSR estimate.
pub fn estimate_fsr(config: &GameConfig) -> Result<GameResult> {
    estimate(config, Protocol::Temporal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::BasisPolicy;

    fn cfg(
        attacker: AttackerModel,
        policy: BasisPolicy,
        window: usize,
        trials: usize,
    ) -> GameConfig {
        GameConfig {
            protocol: ProtocolConfig {
                basis_policy: policy,
                ..ProtocolConfig::default()
            },
            window,
            attacker,
            trials,
            ..GameConfig::default()
        }
    }

    #[test]
    fn ideal_coherent_always_wins_noiseless() {
        let c = cfg(
            AttackerModel::IdealCoherent,
            BasisPolicy::Bernoulli(0.5),
            6,
            50,
        );
        for i in 0..50 {
            assert!(run_security_game(&c, i).unwrap());
        }
    }

    #[test]
    fn empty_window_is_a_vacuous_win() {
        let c = cfg(AttackerModel::MEMORYLESS, BasisPolicy::FixedX, 0, 10);
        assert!((0..10).all(|i| run_security_game(&c, i).unwrap()));
    }

    #[test]
    fn memoryless_single_round_fixed_x_is_a_coin_flip() {
        let c = cfg(AttackerModel::MEMORYLESS, BasisPolicy::FixedX, 1, 4000);
        let r = estimate_fsr(&c).unwrap();
        assert!(
            (r.fsr - 0.5).abs() < 3.0 * (0.25f64 / 4000.0).sqrt(),
            "{}",
            r.fsr
        );
    }

    #[test]
    fn transcript_matches_fast_path() {
        let c = cfg(
            AttackerModel::LimitedMemory { k: 2 },
            BasisPolicy::Bernoulli(0.5),
            6,
            1,
        );
        for i in 0..40 {
            let t = play_security_game(&c, i).unwrap();
            assert_eq!(t.adversary_wins, run_security_game(&c, i).unwrap());
            assert_eq!(t.history.len(), c.t_fork);
            assert_eq!(t.branch0.len(), 6);
            let all = t
                .branch0
                .iter()
                .chain(&t.branch1)
                .all(|r| r.outcome.accepted);
            assert_eq!(all, t.adversary_wins);
            // Shared challenges by default.
            for (a, b) in t.branch0.iter().zip(&t.branch1) {
                assert_eq!(a.challenge, b.challenge);
            }
        }
    }

    #[test]
    fn independent_challenges_differ() {
        let mut c = cfg(AttackerModel::IdealCoherent, BasisPolicy::FixedX, 8, 1);
        c.challenge_mode = ChallengeMode::Independent;
        let t = play_security_game(&c, 0).unwrap();
        assert!(t.adversary_wins);
        assert!(t
            .branch0
            .iter()
            .zip(&t.branch1)
            .any(|(a, b)| a.challenge != b.challenge));
    }

    #[test]
    fn single_trial_estimator() {
        let c = cfg(AttackerModel::MEMORYLESS, BasisPolicy::FixedX, 3, 1);
        let r = estimate_fsr(&c).unwrap();
        assert!(r.fsr == 0.0 || r.fsr == 1.0);
        assert!(r.fsr_ci.0 <= r.fsr && r.fsr <= r.fsr_ci.1);
        assert_eq!(r.trials_run, 1);
    }

    #[test]
    fn honest_noiseless_apr_is_one() {
        let c = cfg(
            AttackerModel::MEMORYLESS,
            BasisPolicy::Bernoulli(0.5),
            5,
            200,
        );
        assert_eq!(honest_apr(&c, Protocol::Temporal).unwrap(), 1.0);
        assert_eq!(honest_apr(&c, Protocol::Stateless).unwrap(), 1.0);
    }

    #[test]
    fn stateless_fork_round_rates() {
        let trials = 2000;
        let fixed_x = cfg(AttackerModel::MEMORYLESS, BasisPolicy::FixedX, 2, trials);
        let r = estimate(&fixed_x, Protocol::Stateless).unwrap();
        assert_eq!(r.fork_samples, 2 * trials as u64);
        assert!(
            (r.fsr - 0.5).abs() < 3.0 * (0.25f64 / 4000.0).sqrt(),
            "{}",
            r.fsr
        );

        let fixed_z = cfg(AttackerModel::MEMORYLESS, BasisPolicy::FixedZ, 2, 200);
        assert_eq!(estimate(&fixed_z, Protocol::Stateless).unwrap().fsr, 1.0);
    }

    #[test]
    fn invalid_config_surfaces_before_running() {
        let mut c = GameConfig::default();
        c.protocol.n_qubits = 30;
        assert!(run_security_game(&c, 0).unwrap_err().is_config());
        c = GameConfig {
            trials: 0,
            ..GameConfig::default()
        };
        assert!(estimate_fsr(&c).unwrap_err().is_config());
    }

    #[test]
    fn estimate_is_reproducible() {
        let c = cfg(
            AttackerModel::MEMORYLESS,
            BasisPolicy::Bernoulli(0.5),
            4,
            500,
        );
        assert_eq!(estimate_fsr(&c).unwrap(), estimate_fsr(&c).unwrap());
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| estimate_fsr(&c).unwrap());
        assert_eq!(serial, estimate_fsr(&c).unwrap());
    }
}
