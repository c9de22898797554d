//! Sweeps the audit window and fits log2(FSR) against W.

use qscw::experiments::{fit_decay, sweep, SweepAxis, SweepSpec};
use qscw::game::GameConfig;
use qscw::protocol::BasisPolicy;

fn main() -> qscw::Result<()> {
    let mut base = GameConfig {
        trials: 10_000,
        ..GameConfig::default()
    };
    for policy in [BasisPolicy::FixedX, BasisPolicy::Bernoulli(0.5)] {
        base.protocol.basis_policy = policy;
        let spec = SweepSpec::new(base, SweepAxis::Window, (1..=8).map(f64::from).collect());
        let out = sweep(&spec)?;
        for r in &out.rows {
            println!("{} W={} FSR {:.5}", policy.label(), r.axis_value, r.fsr);
        }
        let fit = fit_decay(&out.rows)?;
        println!(
            "{}: slope {:.4} (per-round survival {:.4}), r^2 {:.4}\n",
            policy.label(),
            fit.slope,
            fit.slope.exp2(),
            fit.r_squared
        );
    }
    Ok(())
}
