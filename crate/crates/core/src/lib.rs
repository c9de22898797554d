//! Simulator and experiment harness for GHZ-based quantum state continuity
//! witnesses.
//!
//! A prover holds an n-qubit GHZ register whose relative phase accumulates
//! the parity of every verifier challenge. Audits in the X basis check that
//! phase; audits in the Z basis check GHZ structure. An adversary who forks
//! the execution must keep both branches consistent with the challenge
//! history, which a classical or memory-limited copy can only do by
//! guessing, so fork success decays exponentially with the audit window.
//!
//! Modules, bottom-up:
//!
//! - [`quantum`]: dense statevector simulator with depolarizing trajectories
//! - [`witness`]: the stateful witness and its measurement evidence
//! - [`protocol`]: verifier logic, the temporal round and the stateless baseline
//! - [`adversary`]: fork orchestration and attacker models
//! - [`game`]: the fork security game and APR/FSR estimation
//! - [`experiments`]: parameter sweeps, decay fits and the figure suite
//! - [`cli`]: the `qscw` command-line front end

pub mod adversary;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod game;
pub mod protocol;
pub mod quantum;
pub mod rng;
pub mod stats;
pub mod witness;

pub use adversary::{AttackerModel, MemorylessStrategy};
pub use error::{Error, Result};
pub use game::{estimate, estimate_fsr, ChallengeMode, GameConfig, GameResult, Protocol};
pub use protocol::{BasisPolicy, ProtocolConfig};
pub use quantum::{Basis, Bitstring, StateVector};
pub use rng::RngStream;
pub use witness::WitnessState;
