//! Parameter sweeps, the log-scale decay fit, and the eight-figure suite.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adversary::{AttackerModel, MemorylessStrategy};
use crate::error::{Error, Result};
use crate::game::{estimate, GameConfig, Protocol};
use crate::protocol::BasisPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepAxis {
    Window,
    NoiseP,
    Qubits,
    Shots,
    TauX,
    AttackerK,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [
        SweepAxis::Window,
        SweepAxis::NoiseP,
        SweepAxis::Qubits,
        SweepAxis::Shots,
        SweepAxis::TauX,
        SweepAxis::AttackerK,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::Window => "W",
            SweepAxis::NoiseP => "noise_p",
            SweepAxis::Qubits => "n",
            SweepAxis::Shots => "shots",
            SweepAxis::TauX => "tau_x",
            SweepAxis::AttackerK => "attacker_k",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "W" | "w" | "window" => Some(SweepAxis::Window),
            "noise_p" | "noise-p" | "noise" => Some(SweepAxis::NoiseP),
            "n" | "qubits" => Some(SweepAxis::Qubits),
            "shots" => Some(SweepAxis::Shots),
            "tau_x" | "tau-x" => Some(SweepAxis::TauX),
            "attacker_k" | "attacker-k" | "k" => Some(SweepAxis::AttackerK),
            _ => None,
        }
    }

    /// Values used by the figure suite when sweeping this axis.
    pub fn default_values(&self) -> Vec<f64> {
        match self {
            SweepAxis::Window => (1..=12).map(f64::from).collect(),
            SweepAxis::NoiseP => vec![0.0, 0.01, 0.02, 0.05, 0.1, 0.2],
            SweepAxis::Qubits => vec![2.0, 3.0, 4.0, 6.0, 8.0],
            SweepAxis::Shots => vec![1.0, 4.0, 16.0, 32.0, 128.0, 512.0],
            SweepAxis::TauX => vec![0.55, 0.65, 0.75, 0.85, 0.95],
            SweepAxis::AttackerK => vec![1.0, 2.0, 4.0, 8.0, 16.0],
        }
    }

    /// Applies one axis value to a copy of `base` for the given attacker.
    pub fn apply(
        &self,
        base: &GameConfig,
        attacker: AttackerModel,
        value: f64,
    ) -> Result<GameConfig> {
        let mut c = *base;
        c.attacker = attacker;
        match self {
            SweepAxis::Window => c.window = as_count("window", value)?,
            SweepAxis::NoiseP => c.protocol.noise_p = value,
            SweepAxis::Qubits => c.protocol.n_qubits = as_count("n", value)?,
            SweepAxis::Shots => c.protocol.shots = as_count("shots", value)?,
            SweepAxis::TauX => c.protocol.tau_x = value,
            SweepAxis::AttackerK => {
                if let AttackerModel::LimitedMemory { .. } = attacker {
                    c.attacker = AttackerModel::LimitedMemory {
                        k: as_count("attacker", value)? as u64,
                    };
                }
            }
        }
        c.validate()?;
        Ok(c)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn as_count(field: &'static str, value: f64) -> Result<usize> {
    if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(Error::config(
            field,
            format!("{value} is not a non-negative integer"),
        ))
    }
}

/// One attacker series within a sweep. `basis_policy` overrides the base
/// configuration's policy for this series only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub attacker: AttackerModel,
    pub basis_policy: Option<BasisPolicy>,
}

impl Series {
    pub fn attacker(attacker: AttackerModel) -> Self {
        Series {
            attacker,
            basis_policy: None,
        }
    }

    pub fn label(&self) -> String {
        self.label_on(None)
    }

    /// Row label; on the `attacker_k` axis the horizon lives in `axis_value`.
    pub fn label_on(&self, axis: Option<SweepAxis>) -> String {
        let attacker = match (axis, self.attacker) {
            (Some(SweepAxis::AttackerK), AttackerModel::LimitedMemory { .. }) => {
                "limited-memory".to_string()
            }
            (_, a) => a.label(),
        };
        match self.basis_policy {
            None => attacker,
            Some(p) => format!("{attacker}@{}", p.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub base: GameConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub protocols: Vec<Protocol>,
    pub series: Vec<Series>,
}

impl SweepSpec {
    pub fn new(base: GameConfig, axis: SweepAxis, values: Vec<f64>) -> Self {
        SweepSpec {
            series: vec![Series::attacker(base.attacker)],
            base,
            axis,
            values,
            protocols: vec![Protocol::Temporal],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("values", "sweep needs at least one value"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("values", "sweep values must be finite"));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(
                "values",
                "sweep values must be strictly increasing",
            ));
        }
        if self.protocols.is_empty() {
            return Err(Error::config(
                "protocols",
                "sweep needs at least one protocol",
            ));
        }
        if self.series.is_empty() {
            return Err(Error::config(
                "attackers",
                "sweep needs at least one attacker",
            ));
        }
        Ok(())
    }

    /// Short content hash identifying this sweep's full configuration.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("sweep spec serializes");
        Sha256::digest(&json)[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// One CSV row; field order is the on-disk column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: String,
    pub axis_value: f64,
    pub protocol: String,
    pub attacker: String,
    pub apr: f64,
    pub fsr: f64,
    pub fsr_ci_low: f64,
    pub fsr_ci_high: f64,
    pub trials: u64,
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "axis,axis_value,protocol,attacker,apr,fsr,fsr_ci_low,fsr_ci_high,trials,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub axis_value: f64,
    pub protocol: Protocol,
    pub attacker: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<CellFailure>,
}

/// SplitMix64 finalizer; spreads cell indices into unrelated seeds.
fn mix_seed(master: u64, cell: u64) -> u64 {
    let mut z = master.wrapping_add(cell.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs one cell per (value × protocol × series). Cells whose configuration
/// is invalid are reported in `failures`; the rest still run. Row order
/// is value-major, then protocol, then series.
pub fn sweep(spec: &SweepSpec) -> Result<SweepOutput> {
    spec.validate()?;
    let mut cells = Vec::new();
    for &value in &spec.values {
        for &protocol in &spec.protocols {
            for series in &spec.series {
                cells.push((value, protocol, series));
            }
        }
    }
    let results: Vec<std::result::Result<SweepRow, CellFailure>> = cells
        .par_iter()
        .enumerate()
        .map(|(idx, &(value, protocol, series))| {
            let fail = |e: Error| CellFailure {
                axis_value: value,
                protocol,
                attacker: series.label_on(Some(spec.axis)),
                message: e.to_string(),
            };
            let mut base = spec.base;
            if let Some(p) = series.basis_policy {
                base.protocol.basis_policy = p;
            }
            base.master_seed = mix_seed(spec.base.master_seed, idx as u64);
            let config = spec
                .axis
                .apply(&base, series.attacker, value)
                .map_err(fail)?;
            let r = estimate(&config, protocol).map_err(fail)?;
            Ok(SweepRow {
                axis: spec.axis.label().to_string(),
                axis_value: value,
                protocol: protocol.label().to_string(),
                attacker: series.label_on(Some(spec.axis)),
                apr: r.apr,
                fsr: r.fsr,
                fsr_ci_low: r.fsr_ci.0,
                fsr_ci_high: r.fsr_ci.1,
                trials: r.trials_run,
                seed: config.master_seed,
            })
        })
        .collect();
    let mut out = SweepOutput::default();
    for r in results {
        match r {
            Ok(row) => out.rows.push(row),
            Err(f) => out.failures.push(f),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(W, log2 fsr)`; rows with zero FSR are
/// dropped.
pub fn fit_decay(rows: &[SweepRow]) -> Result<DecayFit> {
    if let Some(row) = rows.iter().find(|r| r.axis != SweepAxis::Window.label()) {
        return Err(Error::config(
            "axis",
            format!(
                "decay fit needs rows swept over W, found axis `{}`",
                row.axis
            ),
        ));
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.fsr > 0.0)
        .map(|r| (r.axis_value, r.fsr.log2()))
        .collect();
    if points.len() < 3 {
        return Err(Error::FitUnavailable {
            nonzero_rows: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::config(
            "axis_value",
            "decay fit needs at least two distinct W values",
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let r_squared = if ss_tot <= f64::EPSILON {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
    })
}

pub fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(',')).map_err(csv_err)?;
    }
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// Groups rows into `(protocol, attacker)` series, preserving first-seen order.
pub fn series_of(rows: &[SweepRow]) -> Vec<((String, String), Vec<SweepRow>)> {
    let mut out: Vec<((String, String), Vec<SweepRow>)> = Vec::new();
    for row in rows {
        let key = (row.protocol.clone(), row.attacker.clone());
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(row.clone()),
            None => out.push((key, vec![row.clone()])),
        }
    }
    out
}

/// One named experiment of the figure suite.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: &'static str,
    pub spec: SweepSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub master_seed: u64,
    pub trials: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        let base = GameConfig::default();
        SuiteOptions {
            master_seed: base.master_seed,
            trials: base.trials,
        }
    }
}

const LIMITED_K: u64 = 4;

/// The eight experiments behind the figure analogs, in output order.
pub fn figure_experiments(opts: SuiteOptions) -> Vec<Experiment> {
    let base = GameConfig {
        trials: opts.trials,
        master_seed: opts.master_seed,
        ..GameConfig::default()
    };
    let fixed_x = {
        let mut c = base;
        c.protocol.basis_policy = BasisPolicy::FixedX;
        c
    };
    let memoryless = Series::attacker(AttackerModel::MEMORYLESS);
    let models = || {
        vec![
            Series::attacker(AttackerModel::MEMORYLESS),
            Series::attacker(AttackerModel::Memoryless(MemorylessStrategy::ProductState)),
            Series::attacker(AttackerModel::LimitedMemory { k: LIMITED_K }),
            Series::attacker(AttackerModel::IdealCoherent),
        ]
    };
    let both = vec![Protocol::Temporal, Protocol::Stateless];
    let spec =
        |base: GameConfig, axis: SweepAxis, protocols: Vec<Protocol>, series: Vec<Series>| {
            SweepSpec {
                base,
                axis,
                values: axis.default_values(),
                protocols,
                series,
            }
        };

    let mut window_models = models();
    window_models.push(Series {
        attacker: AttackerModel::MEMORYLESS,
        basis_policy: Some(BasisPolicy::Bernoulli(0.5)),
    });

    vec![
        Experiment {
            name: "attacker_k",
            spec: spec(
                GameConfig {
                    window: 8,
                    ..fixed_x
                },
                SweepAxis::AttackerK,
                vec![Protocol::Temporal],
                vec![Series::attacker(AttackerModel::LimitedMemory { k: 1 })],
            ),
        },
        Experiment {
            name: "n_qubits",
            spec: spec(
                base,
                SweepAxis::Qubits,
                both.clone(),
                vec![memoryless.clone()],
            ),
        },
        Experiment {
            name: "shots",
            spec: spec(
                base,
                SweepAxis::Shots,
                vec![Protocol::Temporal],
                vec![memoryless.clone()],
            ),
        },
        Experiment {
            name: "tau_x",
            spec: {
                let mut c = base;
                c.protocol.noise_p = 0.05;
                spec(
                    c,
                    SweepAxis::TauX,
                    vec![Protocol::Temporal],
                    vec![memoryless.clone()],
                )
            },
        },
        Experiment {
            name: "window_fixed_x",
            spec: spec(
                fixed_x,
                SweepAxis::Window,
                vec![Protocol::Temporal],
                vec![memoryless.clone()],
            ),
        },
        Experiment {
            name: "window_models",
            spec: spec(
                fixed_x,
                SweepAxis::Window,
                vec![Protocol::Temporal],
                window_models,
            ),
        },
        Experiment {
            name: "noise",
            spec: spec(base, SweepAxis::NoiseP, both, vec![memoryless]),
        },
        Experiment {
            name: "noise_models",
            spec: spec(base, SweepAxis::NoiseP, vec![Protocol::Temporal], models()),
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub config_digest: String,
}

impl FitSummary {
    fn from_rows(rows: &[SweepRow], digest: String) -> Self {
        match fit_decay(rows) {
            Ok(f) => FitSummary {
                slope: Some(f.slope),
                intercept: Some(f.intercept),
                r_squared: Some(f.r_squared),
                config_digest: digest,
            },
            Err(_) => FitSummary {
                slope: None,
                intercept: None,
                r_squared: None,
                config_digest: digest,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub csv_files: Vec<PathBuf>,
    pub summary_path: PathBuf,
    pub summary: BTreeMap<String, FitSummary>,
    pub failures: Vec<(String, CellFailure)>,
}

/// Runs every figure experiment and writes `<name>.csv` plus `summary.json`
/// into `output_dir`.
pub fn run_figure_suite(output_dir: &Path, opts: SuiteOptions) -> Result<SuiteReport> {
    fs::create_dir_all(output_dir).map_err(|source| Error::Io {
        path: output_dir.to_path_buf(),
        source,
    })?;
    let mut csv_files = Vec::new();
    let mut summary = BTreeMap::new();
    let mut failures = Vec::new();
    for exp in figure_experiments(opts) {
        let out = sweep(&exp.spec)?;
        let path = output_dir.join(format!("{}.csv", exp.name));
        write_csv(&path, &out.rows)?;
        csv_files.push(path);
        failures.extend(out.failures.into_iter().map(|f| (exp.name.to_string(), f)));

        match exp.name {
            "window_fixed_x" => {
                summary.insert(
                    exp.name.to_string(),
                    FitSummary::from_rows(&out.rows, exp.spec.digest()),
                );
            }
            "window_models" => {
                let mixed = Series {
                    attacker: AttackerModel::MEMORYLESS,
                    basis_policy: Some(BasisPolicy::Bernoulli(0.5)),
                }
                .label();
                let rows: Vec<SweepRow> = out
                    .rows
                    .iter()
                    .filter(|r| r.attacker == mixed)
                    .cloned()
                    .collect();
                summary.insert(
                    "window_mixed_basis".to_string(),
                    FitSummary::from_rows(&rows, exp.spec.digest()),
                );
            }
            _ => {}
        }
    }
    let summary_path = output_dir.join("summary.json");
    let json = serde_json::to_string_pretty(&summary).map_err(|source| Error::Json {
        path: summary_path.clone(),
        source,
    })?;
    fs::write(&summary_path, json + "\n").map_err(|source| Error::Io {
        path: summary_path.clone(),
        source,
    })?;
    Ok(SuiteReport {
        csv_files,
        summary_path,
        summary,
        failures,
    })
}
