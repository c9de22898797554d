//! `qscw` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or statistical failure, 2 configuration
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{parse_attacker, parse_list, Settings};
use crate::error::Error;
use crate::experiments::{
    fit_decay, read_csv, run_figure_suite, series_of, sweep, write_csv, Series, SuiteOptions,
    SweepAxis, SweepSpec,
};
use crate::game::{estimate, GameConfig, GameResult, Protocol};

pub const OUTPUT_DIR_ENV: &str = "QSCW_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "qscw",
    version,
    about = "Quantum state continuity witness simulator"
)]
pub struct Cli {
    /// Print resolved configuration and progress to stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    /// Worker threads (defaults to available hardware; 1 forces serial).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate APR and FSR for a single configuration.
    Run(RunArgs),
    /// Sweep one parameter and write a CSV.
    Sweep(SweepArgs),
    /// Run the full eight-experiment figure suite.
    Figures(FiguresArgs),
    /// Fit log2(FSR) against W for every series in a CSV.
    Fit(FitArgs),
}

/// Flags mirroring `GameConfig` fields; they override the config file.
#[derive(Debug, Args, Default)]
pub struct GameArgs {
    /// Plain-text key = value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, alias = "qubits")]
    pub n: Option<String>,
    /// Audit window W.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub t_fork: Option<String>,
    #[arg(long)]
    pub shots: Option<String>,
    #[arg(long)]
    pub k_challenge_bits: Option<String>,
    #[arg(long)]
    pub tau_x: Option<String>,
    #[arg(long)]
    pub tau_z: Option<String>,
    /// fixed-x, fixed-z or bernoulli:<p_x>.
    #[arg(long, alias = "basis")]
    pub basis_policy: Option<String>,
    #[arg(long, alias = "noise")]
    pub noise_p: Option<String>,
    /// memoryless, memoryless-fixed-0, memoryless-fixed-1, product-state,
    /// limited:<k>, ideal-coherent.
    #[arg(long)]
    pub attacker: Option<String>,
    /// shared or independent.
    #[arg(long)]
    pub challenge_mode: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long, alias = "seed")]
    pub master_seed: Option<String>,
    /// temporal or stateless.
    #[arg(long)]
    pub protocol: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Also write the result as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// W, noise_p, n, shots, tau_x or attacker_k.
    #[arg(long)]
    pub axis: Option<String>,
    /// Comma-separated, strictly increasing.
    #[arg(long)]
    pub values: Option<String>,
    /// Comma-separated protocols.
    #[arg(long)]
    pub protocols: Option<String>,
    /// Comma-separated attacker models.
    #[arg(long)]
    pub attackers: Option<String>,
    /// Output CSV file, or directory for `sweep_<axis>.csv`.
    #[arg(long, env = OUTPUT_DIR_ENV)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, env = OUTPUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, alias = "master-seed")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub csv: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn load_settings(path: Option<&Path>) -> CliResult<Settings> {
    match path {
        None => Ok(Settings::default()),
        Some(p) => Settings::load(p).map_err(|e| match e {
            Error::Io { .. } => Failure::Config(format!("cannot read config file: {e}")),
            other => Failure::from(other),
        }),
    }
}

fn resolve_game(args: &GameArgs) -> CliResult<Settings> {
    let mut s = load_settings(args.config.as_deref())?;
    let overrides = [
        ("n", &args.n),
        ("window", &args.window),
        ("t_fork", &args.t_fork),
        ("shots", &args.shots),
        ("k_challenge_bits", &args.k_challenge_bits),
        ("tau_x", &args.tau_x),
        ("tau_z", &args.tau_z),
        ("basis_policy", &args.basis_policy),
        ("noise_p", &args.noise_p),
        ("attacker", &args.attacker),
        ("challenge_mode", &args.challenge_mode),
        ("trials", &args.trials),
        ("master_seed", &args.master_seed),
        ("protocol", &args.protocol),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            s.set("game", key, v)?;
        }
    }
    s.game.validate()?;
    Ok(s)
}

fn default_out_dir(settings: &Settings, flag: Option<&PathBuf>) -> PathBuf {
    flag.cloned()
        .or_else(|| settings.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results"))
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

#[derive(Serialize)]
struct RunReport<'a> {
    config: &'a GameConfig,
    protocol: Protocol,
    result: &'a GameResult,
}

fn cmd_run(args: &RunArgs, verbose: bool, out: &mut dyn Write) -> CliResult<()> {
    let s = resolve_game(&args.game)?;
    let g = &s.game;
    if verbose {
        eprintln!("{g:#?}");
    }
    writeln!(out, "master_seed: {}", g.master_seed).map_err(io_err)?;
    let r = estimate(g, s.protocol)?;
    let fsr_kind = match s.protocol {
        Protocol::Temporal => "games",
        Protocol::Stateless => "rounds",
    };
    writeln!(
        out,
        "protocol: {}\nattacker: {}\nbasis_policy: {}\nW: {}\nn: {}\nshots: {}\nnoise_p: {}\n\
         trials: {}\nAPR: {:.6}\nFSR: {:.6}\nFSR 95% CI: [{:.6}, {:.6}]\nwins: {}/{} {}",
        s.protocol,
        g.attacker,
        g.protocol.basis_policy.label(),
        g.window,
        g.protocol.n_qubits,
        g.protocol.shots,
        g.protocol.noise_p,
        r.trials_run,
        r.apr,
        r.fsr,
        r.fsr_ci.0,
        r.fsr_ci.1,
        r.wins,
        r.fork_samples,
        fsr_kind,
    )
    .map_err(io_err)?;
    if let Some(path) = &args.json {
        let report = RunReport {
            config: g,
            protocol: s.protocol,
            result: &r,
        };
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(path, json + "\n").map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, verbose: bool, out: &mut dyn Write) -> CliResult<()> {
    let mut s = resolve_game(&args.game)?;
    if let Some(a) = &args.axis {
        s.set("sweep", "axis", a)?;
    }
    if let Some(v) = &args.values {
        s.set("sweep", "values", v)?;
    }
    if let Some(p) = &args.protocols {
        s.set("sweep", "protocols", p)?;
    }
    if let Some(a) = &args.attackers {
        s.sweep.attackers = Some(parse_list("attackers", a, |x| parse_attacker(x).ok())?);
    }
    let axis = s
        .sweep
        .axis
        .ok_or_else(|| Failure::Config("missing sweep axis (--axis or [sweep] axis)".into()))?;
    let mut spec = SweepSpec::new(
        s.game,
        axis,
        s.sweep
            .values
            .clone()
            .unwrap_or_else(|| axis.default_values()),
    );
    if let Some(p) = &s.sweep.protocols {
        spec.protocols = p.clone();
    }
    if let Some(a) = &s.sweep.attackers {
        spec.series = a.iter().copied().map(Series::attacker).collect();
    }
    spec.validate()?;
    writeln!(out, "master_seed: {}", s.game.master_seed).map_err(io_err)?;
    let result = sweep(&spec)?;

    let target = default_out_dir(&s, args.out.as_ref());
    let path = if target.extension().is_some_and(|e| e == "csv") {
        if let Some(parent) = target.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(io_err)?;
        }
        target
    } else {
        std::fs::create_dir_all(&target).map_err(|source| Error::Io {
            path: target.clone(),
            source,
        })?;
        target.join(format!("sweep_{}.csv", axis.label()))
    };
    write_csv(&path, &result.rows)?;

    writeln!(
        out,
        "{:>10}  {:<10} {:<24} {:>9} {:>9}   FSR 95% CI",
        axis.label(),
        "protocol",
        "attacker",
        "APR",
        "FSR"
    )
    .map_err(io_err)?;
    for r in &result.rows {
        writeln!(
            out,
            "{:>10}  {:<10} {:<24} {:>9.5} {:>9.5}   [{:.5}, {:.5}]",
            r.axis_value, r.protocol, r.attacker, r.apr, r.fsr, r.fsr_ci_low, r.fsr_ci_high
        )
        .map_err(io_err)?;
    }
    writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    if verbose {
        eprintln!("digest {}", spec.digest());
    }
    if !result.failures.is_empty() {
        for f in &result.failures {
            eprintln!(
                "warning: {}={} {} {}: {}",
                axis, f.axis_value, f.protocol, f.attacker, f.message
            );
        }
        return Err(Failure::Runtime(format!(
            "{} sweep cell(s) failed",
            result.failures.len()
        )));
    }
    Ok(())
}

fn cmd_figures(args: &FiguresArgs, verbose: bool, out: &mut dyn Write) -> CliResult<()> {
    let s = load_settings(args.config.as_deref())?;
    let opts = SuiteOptions {
        master_seed: args.seed.unwrap_or(s.game.master_seed),
        trials: args.trials.unwrap_or(s.game.trials),
    };
    if opts.trials == 0 {
        return Err(Failure::Config(
            "invalid configuration for `trials`: must be at least 1".into(),
        ));
    }
    let dir = default_out_dir(&s, args.out.as_ref());
    writeln!(out, "master_seed: {}", opts.master_seed).map_err(io_err)?;
    if verbose {
        eprintln!(
            "running figure suite with {} trials per cell into {}",
            opts.trials,
            dir.display()
        );
    }
    let report = run_figure_suite(&dir, opts)?;
    for f in &report.csv_files {
        writeln!(out, "wrote {}", f.display()).map_err(io_err)?;
    }
    writeln!(out, "wrote {}", report.summary_path.display()).map_err(io_err)?;
    for (name, fit) in &report.summary {
        match (fit.slope, fit.intercept, fit.r_squared) {
            (Some(slope), Some(intercept), Some(r2)) => writeln!(
                out,
                "{name}: slope {slope:.4} intercept {intercept:.4} r^2 {r2:.4}"
            ),
            _ => writeln!(out, "{name}: fit unavailable"),
        }
        .map_err(io_err)?;
    }
    if !report.failures.is_empty() {
        for (exp, f) in &report.failures {
            eprintln!(
                "warning: {exp}: {} {}: {}",
                f.protocol, f.attacker, f.message
            );
        }
        return Err(Failure::Runtime("some figure cells failed".into()));
    }
    Ok(())
}

fn cmd_fit(args: &FitArgs, out: &mut dyn Write) -> CliResult<()> {
    let rows = read_csv(&args.csv)?;
    if rows.is_empty() {
        return Err(Failure::Runtime(format!("{}: no rows", args.csv.display())));
    }
    if let Some(r) = rows.iter().find(|r| r.axis != SweepAxis::Window.label()) {
        return Err(Failure::Config(format!(
            "{}: decay fit needs a W sweep, found axis `{}`",
            args.csv.display(),
            r.axis
        )));
    }
    let mut fitted = 0;
    for ((protocol, attacker), series) in series_of(&rows) {
        match fit_decay(&series) {
            Ok(f) => {
                fitted += 1;
                writeln!(
                    out,
                    "{protocol} {attacker}: slope {:.6} intercept {:.6} r^2 {:.6}",
                    f.slope, f.intercept, f.r_squared
                )
            }
            Err(e) => writeln!(out, "{protocol} {attacker}: {e}"),
        }
        .map_err(io_err)?;
    }
    if fitted == 0 {
        return Err(Failure::Runtime(
            "no series had enough nonzero rows to fit".into(),
        ));
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing normal output to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let verbose = cli.verbose > 0;
    let dispatch = |out: &mut dyn Write| match &cli.command {
        Command::Run(a) => cmd_run(a, verbose, out),
        Command::Sweep(a) => cmd_sweep(a, verbose, out),
        Command::Figures(a) => cmd_figures(a, verbose, out),
        Command::Fit(a) => cmd_fit(a, out),
    };
    let result = match cli.jobs {
        Some(0) => Err(Failure::Config(
            "invalid configuration for `jobs`: must be at least 1".into(),
        )),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => {
                // The closure runs on a pool thread, so buffer its output.
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(&mut buf));
                let _ = out.write_all(&buf);
                r
            }
            Err(e) => Err(Failure::Runtime(e.to_string())),
        },
        None => dispatch(out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
