//! An honest prover answering a few temporal-protocol rounds.

use qscw::protocol::{run_temporal_round, ProtocolConfig, VerifierState};
use qscw::rng::RngStream;
use qscw::witness::WitnessState;

fn main() -> qscw::Result<()> {
    let config = ProtocolConfig::default();
    let mut rng = RngStream::from_seed(3);
    let mut witness = WitnessState::with_random_phase(config.n_qubits, &mut rng)?;
    let mut verifier = VerifierState::new(&config, witness.phase());
    for _ in 0..6 {
        let t = run_temporal_round(&mut verifier, &mut witness, &config, &mut rng)?;
        println!(
            "round {} challenge {} parity {} basis {} pass {:.3} accepted {} phase {}",
            t.round,
            t.challenge.bits,
            t.challenge.parity(),
            t.basis,
            t.outcome.pass_fraction,
            t.outcome.accepted,
            witness.phase()
        );
    }
    Ok(())
}
