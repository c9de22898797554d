//! Compares the stateless baseline with the temporal protocol.

use qscw::game::{estimate, GameConfig, Protocol};
use qscw::protocol::BasisPolicy;

fn main() -> qscw::Result<()> {
    for policy in [BasisPolicy::FixedX, BasisPolicy::Bernoulli(0.5)] {
        let mut config = GameConfig::default();
        config.protocol.basis_policy = policy;
        let temporal = estimate(&config, Protocol::Temporal)?;
        let stateless = estimate(&config, Protocol::Stateless)?;
        println!(
            "{}: temporal FSR {:.4} over W={}, stateless per-round fork pass {:.4}",
            policy.label(),
            temporal.fsr,
            config.window,
            stateless.fsr
        );
    }
    Ok(())
}
