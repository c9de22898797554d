//! Runs every figure experiment at reduced trial count.

use qscw::experiments::{run_figure_suite, SuiteOptions};

fn main() -> qscw::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("qscw_figures"));
    let report = run_figure_suite(
        &dir,
        SuiteOptions {
            master_seed: 20_260_101,
            trials: 500,
        },
    )?;
    for path in &report.csv_files {
        println!("wrote {}", path.display());
    }
    for (name, fit) in &report.summary {
        println!("{name}: {fit:?}");
    }
    println!("summary {}", report.summary_path.display());
    Ok(())
}
