//! Noise sweep for both protocols, written as CSV.

use qscw::experiments::{sweep, write_csv, SweepAxis, SweepSpec};
use qscw::game::{GameConfig, Protocol};

fn main() -> qscw::Result<()> {
    let base = GameConfig {
        trials: 2000,
        ..GameConfig::default()
    };
    let mut spec = SweepSpec::new(base, SweepAxis::NoiseP, vec![0.0, 0.02, 0.05, 0.1]);
    spec.protocols = vec![Protocol::Temporal, Protocol::Stateless];
    let out = sweep(&spec)?;
    let path = std::env::temp_dir().join("qscw_noise.csv");
    write_csv(&path, &out.rows)?;
    for r in &out.rows {
        println!(
            "{:<9} p={:<5} APR {:.4} FSR {:.4}",
            r.protocol, r.axis_value, r.apr, r.fsr
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}
