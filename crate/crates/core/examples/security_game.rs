//! Estimates APR and FSR for each attacker model.

use qscw::adversary::AttackerModel;
use qscw::game::{estimate, GameConfig, Protocol};

fn main() -> qscw::Result<()> {
    let models = [
        "memoryless",
        "memoryless-fixed-0",
        "product-state",
        "limited:2",
        "ideal-coherent",
    ];
    println!("{:<20} {:>8} {:>8}   FSR 95% CI", "attacker", "APR", "FSR");
    for label in models {
        let config = GameConfig {
            attacker: AttackerModel::parse(label).expect("known model"),
            trials: 4000,
            ..GameConfig::default()
        };
        let r = estimate(&config, Protocol::Temporal)?;
        println!(
            "{label:<20} {:>8.4} {:>8.4}   [{:.4}, {:.4}]",
            r.apr, r.fsr, r.fsr_ci.0, r.fsr_ci.1
        );
    }
    Ok(())
}
