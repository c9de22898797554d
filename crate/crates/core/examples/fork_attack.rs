//! Forks an execution and plays both branches round by round.

use qscw::adversary::AttackerModel;
use qscw::game::{play_security_game, GameConfig};
use qscw::protocol::{BasisPolicy, RoundTranscript};

fn show(branch: &str, rounds: &[RoundTranscript]) {
    for t in rounds {
        println!(
            "  {branch} round {} parity {} basis {} pass {:.3} accepted {}",
            t.round,
            t.challenge.parity(),
            t.basis,
            t.outcome.pass_fraction,
            t.outcome.accepted
        );
    }
}

fn main() -> qscw::Result<()> {
    let mut config = GameConfig {
        window: 4,
        ..GameConfig::default()
    };
    config.protocol.basis_policy = BasisPolicy::FixedX;
    for attacker in [AttackerModel::MEMORYLESS, AttackerModel::IdealCoherent] {
        config.attacker = attacker;
        let game = play_security_game(&config, 0)?;
        println!(
            "{} ({} honest rounds before the fork)",
            attacker.label(),
            game.history.len()
        );
        show("B0", &game.branch0);
        show("B1", &game.branch1);
        println!("  adversary wins: {}", game.adversary_wins);
    }
    Ok(())
}
