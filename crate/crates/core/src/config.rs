//! Plain-text configuration files.
//!
//! ```text
//! # comments start with '#'
//! [game]
//! n = 4
//! window = 5
//! basis_policy = fixed-x
//! attacker = memoryless
//!
//! [sweep]
//! axis = W
//! values = 1,2,3,4
//! protocols = temporal,stateless
//! attackers = memoryless,limited:4
//!
//! [output]
//! dir = results
//! ```
//!
//! Keys before the first section header belong to `[game]`. Keys in
//! `[game]` use the `GameConfig` field names.

use std::fs;
use std::path::{Path, PathBuf};

use crate::adversary::AttackerModel;
use crate::error::{Error, Result};
use crate::experiments::SweepAxis;
use crate::game::{ChallengeMode, GameConfig, Protocol};
use crate::protocol::BasisPolicy;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSettings {
    pub axis: Option<SweepAxis>,
    pub values: Option<Vec<f64>>,
    pub protocols: Option<Vec<Protocol>>,
    pub attackers: Option<Vec<AttackerModel>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub game: GameConfig,
    pub protocol: Protocol,
    pub sweep: SweepSettings,
    pub output_dir: Option<PathBuf>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            game: GameConfig::default(),
            protocol: Protocol::Temporal,
            sweep: SweepSettings::default(),
            output_dir: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(field: &'static str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(field, format!("cannot parse `{value}`")))
}

pub fn parse_list<T>(
    field: &'static str,
    value: &str,
    item: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).ok_or_else(|| Error::config(field, format!("unrecognized item `{s}`"))))
        .collect()
}

pub fn parse_attacker(value: &str) -> Result<AttackerModel> {
    AttackerModel::parse(value).ok_or_else(|| {
        Error::config(
            "attacker",
            format!(
                "unknown attacker `{value}` (expected memoryless, memoryless-fixed-0/1, \
                 product-state, limited:<k>, ideal-coherent)"
            ),
        )
    })
}

pub fn parse_basis_policy(value: &str) -> Result<BasisPolicy> {
    BasisPolicy::parse(value).ok_or_else(|| {
        Error::config(
            "basis_policy",
            format!("unknown policy `{value}` (expected fixed-x, fixed-z, bernoulli:<p>)"),
        )
    })
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut settings = Settings::default();
        let mut section = "game".to_string();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    "config",
                    format!("line {}: expected `key = value`", lineno + 1),
                )
            })?;
            settings.set(&section, key.trim(), value.trim())?;
        }
        Ok(settings)
    }

    pub fn set(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        match section {
            "game" => self.set_game(key, value),
            "sweep" => self.set_sweep(key, value),
            "output" if key == "dir" => {
                self.output_dir = Some(PathBuf::from(value));
                Ok(())
            }
            _ => Err(Error::config(
                "config",
                format!("unknown key `{key}` in section [{section}]"),
            )),
        }
    }

    fn set_game(&mut self, key: &str, value: &str) -> Result<()> {
        let g = &mut self.game;
        match key {
            "n" | "n_qubits" => g.protocol.n_qubits = parse_num("n", value)?,
            "window" | "W" => g.window = parse_num("window", value)?,
            "t_fork" => g.t_fork = parse_num("t_fork", value)?,
            "shots" => g.protocol.shots = parse_num("shots", value)?,
            "k_challenge_bits" => {
                g.protocol.k_challenge_bits = parse_num("k_challenge_bits", value)?
            }
            "tau_x" => g.protocol.tau_x = parse_num("tau_x", value)?,
            "tau_z" => g.protocol.tau_z = parse_num("tau_z", value)?,
            "noise_p" => g.protocol.noise_p = parse_num("noise_p", value)?,
            "basis_policy" => g.protocol.basis_policy = parse_basis_policy(value)?,
            "attacker" => g.attacker = parse_attacker(value)?,
            "challenge_mode" => {
                g.challenge_mode = ChallengeMode::parse(value).ok_or_else(|| {
                    Error::config(
                        "challenge_mode",
                        format!("expected shared or independent, got `{value}`"),
                    )
                })?
            }
            "trials" => g.trials = parse_num("trials", value)?,
            "master_seed" | "seed" => g.master_seed = parse_num("master_seed", value)?,
            "protocol" => {
                self.protocol = Protocol::parse(value).ok_or_else(|| {
                    Error::config(
                        "protocol",
                        format!("expected temporal or stateless, got `{value}`"),
                    )
                })?
            }
            _ => {
                return Err(Error::config(
                    "config",
                    format!("unknown key `{key}` in section [game]"),
                ))
            }
        }
        Ok(())
    }

    fn set_sweep(&mut self, key: &str, value: &str) -> Result<()> {
        let s = &mut self.sweep;
        match key {
            "axis" => {
                s.axis = Some(
                    SweepAxis::parse(value)
                        .ok_or_else(|| Error::config("axis", format!("unknown axis `{value}`")))?,
                )
            }
            "values" => s.values = Some(parse_list("values", value, |v| v.parse().ok())?),
            "protocols" => s.protocols = Some(parse_list("protocols", value, Protocol::parse)?),
            "attackers" => {
                s.attackers = Some(parse_list("attackers", value, AttackerModel::parse)?)
            }
            _ => {
                return Err(Error::config(
                    "config",
                    format!("unknown key `{key}` in section [sweep]"),
                ))
            }
        }
        Ok(())
    }
}
