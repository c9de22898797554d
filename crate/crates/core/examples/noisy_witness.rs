//! Audit pass fractions of an honest witness under depolarizing noise.

use qscw::protocol::{ProtocolConfig, VerifierState};
use qscw::quantum::Basis;
use qscw::rng::RngStream;
use qscw::witness::WitnessState;

fn main() -> qscw::Result<()> {
    let mut rng = RngStream::from_seed(2);
    let witness = WitnessState::new(4, 0)?;
    let verifier = VerifierState::new(&ProtocolConfig::default(), 0);
    println!("{:>6} {:>10} {:>10}", "p", "X pass", "Z pass");
    for p in [0.0, 0.01, 0.05, 0.1, 0.2] {
        let mut row = Vec::new();
        for basis in [Basis::X, Basis::Z] {
            let ev = witness.generate_evidence(basis, 10_000, p, &mut rng)?;
            row.push(verifier.audit(basis, &ev)?.pass_fraction);
        }
        println!("{p:>6} {:>10.4} {:>10.4}", row[0], row[1]);
    }
    Ok(())
}
