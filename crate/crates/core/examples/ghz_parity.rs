//! Prepares GHZ states and shows the X-basis parity constraint.

use qscw::quantum::{Basis, StateVector};
use qscw::rng::RngStream;
use qscw::witness::parity;

fn main() -> qscw::Result<()> {
    let mut rng = RngStream::from_seed(1);
    for phase in [0, 1] {
        let state = StateVector::ghz_with_phase(3, phase)?;
        let support: Vec<String> = state
            .probabilities(Basis::X)?
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 1e-12)
            .map(|(i, p)| format!("{i:03b}:{p:.3}"))
            .collect();
        println!("phase {phase}: X-basis support {}", support.join(" "));
        for _ in 0..4 {
            let shot = state.sample(Basis::X, &mut rng)?;
            println!("  shot {shot} parity {}", parity(shot));
        }
    }
    Ok(())
}
