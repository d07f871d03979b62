// Copyright 2026 The qitime Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Experiment configuration: defaults, presets, a plain `key = value` file
//! format, and command-line overrides, applied in that order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qitime::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Tfim,
    Toy,
    File,
}

impl ModelKind {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "tfim" => Ok(ModelKind::Tfim),
            "toy" => Ok(ModelKind::Toy),
            "file" => Ok(ModelKind::File),
            other => Err(Error::invalid(format!(
                "unknown model `{other}` (expected tfim, toy, or file)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub p1: f64,
    pub p2: f64,
    pub p_ro: f64,
}

impl NoiseParams {
    pub fn any_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_ro == 0.0
    }
}

/// Fully resolved experiment parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    /// Chain length (tfim only).
    pub sites: usize,
    /// Transverse coupling (tfim only).
    pub g: f64,
    /// Term-list file (file model only).
    pub hamiltonian: Option<PathBuf>,
    /// Expansion orders to sweep.
    pub orders: Vec<usize>,
    pub tau_min: f64,
    pub tau_max: f64,
    pub dtau: f64,
    /// Initial state: a basis bit string or a comma list of real amplitudes.
    /// Empty means the model default.
    pub state: String,
    /// Accepted events per sampling run; 0 disables sampling.
    pub shots: usize,
    /// Sampling repetitions averaged per grid point.
    pub runs: usize,
    pub noise: NoiseParams,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub plot: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: ModelKind::Tfim,
            sites: 2,
            g: 1.0,
            hamiltonian: None,
            orders: vec![2],
            tau_min: 0.0,
            tau_max: 4.0,
            dtau: 0.5,
            state: String::new(),
            shots: 0,
            runs: 1,
            noise: NoiseParams { p1: 0.0, p2: 0.0, p_ro: 0.0 },
            seed: 1,
            out_dir: PathBuf::from("."),
            plot: false,
        }
    }
}

/// Optional overrides collected from the command line; `None` keeps the
/// value from the preset, config file, or default.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: Option<String>,
    pub sites: Option<usize>,
    pub g: Option<f64>,
    pub hamiltonian: Option<PathBuf>,
    pub orders: Option<Vec<usize>>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub dtau: Option<f64>,
    pub state: Option<String>,
    pub shots: Option<usize>,
    pub runs: Option<usize>,
    pub noise_p1: Option<f64>,
    pub noise_p2: Option<f64>,
    pub noise_ro: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub plot: bool,
}

/// The published sampling protocol for the five-qubit model: a fine grid
/// to tau = 4 with 20 runs of 16 accepted shots each.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    match name {
        "toy-paper" => Ok(ExperimentConfig {
            model: ModelKind::Toy,
            orders: vec![2],
            tau_min: 0.0,
            tau_max: 4.0,
            dtau: 0.1,
            shots: 16,
            runs: 20,
            ..ExperimentConfig::default()
        }),
        other => Err(Error::invalid(format!("unknown preset `{other}`"))),
    }
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::invalid(format!("bad value `{value}` for `{key}`")))
}

fn parse_order_list(value: &str) -> Result<Vec<usize>> {
    let orders: Vec<usize> = value
        .split(',')
        .map(|s| parse_number("N", s.trim()))
        .collect::<Result<_>>()?;
    if orders.is_empty() {
        return Err(Error::invalid("empty order list"));
    }
    Ok(orders)
}

/// Applies one `key = value` pair onto the config.
fn apply_pair(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "model" => cfg.model = ModelKind::parse(value)?,
        "L" => cfg.sites = parse_number(key, value)?,
        "g" => cfg.g = parse_number(key, value)?,
        "hamiltonian" => cfg.hamiltonian = Some(PathBuf::from(value)),
        "N" => cfg.orders = parse_order_list(value)?,
        "tau_min" => cfg.tau_min = parse_number(key, value)?,
        "tau_max" => cfg.tau_max = parse_number(key, value)?,
        "dtau" => cfg.dtau = parse_number(key, value)?,
        "state" => cfg.state = value.to_string(),
        "shots" => cfg.shots = parse_number(key, value)?,
        "runs" => cfg.runs = parse_number(key, value)?,
        "noise_p1" => cfg.noise.p1 = parse_number(key, value)?,
        "noise_p2" => cfg.noise.p2 = parse_number(key, value)?,
        "noise_ro" => cfg.noise.p_ro = parse_number(key, value)?,
        "seed" => cfg.seed = parse_number(key, value)?,
        "out" => cfg.out_dir = PathBuf::from(value),
        "plot" => cfg.plot = parse_number(key, value)?,
        other => return Err(Error::invalid(format!("unknown config key `{other}`"))),
    }
    Ok(())
}

/// Parses the `key = value` config text. `#` starts a comment; blank lines
/// are ignored; keys match the command-line flag names.
pub fn apply_config_text(cfg: &mut ExperimentConfig, text: &str) -> Result<()> {
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected `key = value`, got \"{line}\""),
        })?;
        apply_pair(cfg, key.trim(), value.trim()).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
    }
    Ok(())
}

pub fn apply_config_file(cfg: &mut ExperimentConfig, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    apply_config_text(cfg, &text)
}

fn apply_overrides(cfg: &mut ExperimentConfig, ov: &Overrides) -> Result<()> {
    if let Some(m) = &ov.model {
        cfg.model = ModelKind::parse(m)?;
    }
    if let Some(v) = ov.sites {
        cfg.sites = v;
    }
    if let Some(v) = ov.g {
        cfg.g = v;
    }
    if let Some(p) = &ov.hamiltonian {
        cfg.hamiltonian = Some(p.clone());
    }
    if let Some(v) = &ov.orders {
        cfg.orders = v.clone();
    }
    if let Some(v) = ov.tau_min {
        cfg.tau_min = v;
    }
    if let Some(v) = ov.tau_max {
        cfg.tau_max = v;
    }
    if let Some(v) = ov.dtau {
        cfg.dtau = v;
    }
    if let Some(s) = &ov.state {
        cfg.state = s.clone();
    }
    if let Some(v) = ov.shots {
        cfg.shots = v;
    }
    if let Some(v) = ov.runs {
        cfg.runs = v;
    }
    if let Some(v) = ov.noise_p1 {
        cfg.noise.p1 = v;
    }
    if let Some(v) = ov.noise_p2 {
        cfg.noise.p2 = v;
    }
    if let Some(v) = ov.noise_ro {
        cfg.noise.p_ro = v;
    }
    if let Some(v) = ov.seed {
        cfg.seed = v;
    }
    if let Some(p) = &ov.out {
        cfg.out_dir = p.clone();
    }
    if ov.plot {
        cfg.plot = true;
    }
    Ok(())
}

fn validate(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.tau_min > cfg.tau_max {
        return Err(Error::invalid(format!(
            "tau_min {} exceeds tau_max {}",
            cfg.tau_min, cfg.tau_max
        )));
    }
    if !(cfg.dtau > 0.0) {
        return Err(Error::invalid(format!("dtau must be positive, got {}", cfg.dtau)));
    }
    if cfg.tau_min < 0.0 {
        return Err(Error::invalid(format!("tau_min must be nonnegative, got {}", cfg.tau_min)));
    }
    if cfg.orders.is_empty() {
        return Err(Error::invalid("need at least one expansion order"));
    }
    for (name, p) in [
        ("noise_p1", cfg.noise.p1),
        ("noise_p2", cfg.noise.p2),
        ("noise_ro", cfg.noise.p_ro),
    ] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("{name}={p} outside [0, 1]")));
        }
    }
    if cfg.shots > 0 && cfg.runs == 0 {
        return Err(Error::invalid("sampling needs runs >= 1"));
    }
    match cfg.model {
        ModelKind::Toy => {
            if cfg.orders != [qitime::models::TOY_EXPANSION_ORDER] {
                return Err(Error::invalid(
                    "the five-qubit circuit has a fixed expansion order of 2; \
                     pass N=2 or drop the N flag",
                ));
            }
        }
        ModelKind::Tfim => {
            if cfg.noise.any_gate_noise() {
                return Err(Error::invalid(
                    "gate noise runs only on the five-qubit toy circuit; \
                     tfim supports read-out noise alone",
                ));
            }
        }
        ModelKind::File => {
            if cfg.hamiltonian.is_none() {
                return Err(Error::invalid("file model needs `hamiltonian = <path>`"));
            }
            if cfg.noise.any_gate_noise() {
                return Err(Error::invalid(
                    "gate noise runs only on the five-qubit toy circuit",
                ));
            }
        }
    }
    if cfg.model == ModelKind::Toy && cfg.orders.len() != 1 {
        return Err(Error::invalid("the toy circuit sweeps a single order"));
    }
    Ok(())
}

/// Resolution order: preset, then config file, then flags; then validation.
/// The toy model defaults its order list to the fixed circuit order.
pub fn resolve(
    preset_name: Option<&str>,
    config_path: Option<&Path>,
    ov: &Overrides,
) -> Result<ExperimentConfig> {
    let mut cfg = match preset_name {
        Some(name) => preset(name)?,
        None => ExperimentConfig::default(),
    };
    if let Some(path) = config_path {
        apply_config_file(&mut cfg, path)?;
    }
    let explicit_orders = ov.orders.is_some();
    apply_overrides(&mut cfg, ov)?;
    if cfg.model == ModelKind::Toy && !explicit_orders && preset_name.is_none() {
        // config files may also omit N for the toy model
        if cfg.orders == ExperimentConfig::default().orders {
            cfg.orders = vec![qitime::models::TOY_EXPANSION_ORDER];
        }
    }
    validate(&cfg)?;
    Ok(cfg)
}

/// The tau grid: tau_min, tau_min + dtau, ..., up to and including tau_max
/// (within half a step of round-off).
pub fn tau_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    let n = ((cfg.tau_max - cfg.tau_min) / cfg.dtau + 0.5).floor() as usize;
    (0..=n).map(|i| cfg.tau_min + i as f64 * cfg.dtau).collect()
}

/// Splits one RNG stream per (grid index, run index) so the worker pool's
/// schedule cannot change results.
pub fn stream_seed(base: u64, tau_index: usize, run: usize) -> u64 {
    let a = (tau_index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let b = (run as u64 + 1).wrapping_mul(0xD2B7_4407_B1CE_6E93);
    base ^ a ^ b
}

/// Key=value dump of a config, reusable as a config file.
pub fn render_config(cfg: &ExperimentConfig) -> String {
    let mut pairs: BTreeMap<&str, String> = BTreeMap::new();
    pairs.insert(
        "model",
        match cfg.model {
            ModelKind::Tfim => "tfim".into(),
            ModelKind::Toy => "toy".into(),
            ModelKind::File => "file".into(),
        },
    );
    pairs.insert("L", cfg.sites.to_string());
    pairs.insert("g", cfg.g.to_string());
    if let Some(p) = &cfg.hamiltonian {
        pairs.insert("hamiltonian", p.display().to_string());
    }
    pairs.insert(
        "N",
        cfg.orders.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
    );
    pairs.insert("tau_min", cfg.tau_min.to_string());
    pairs.insert("tau_max", cfg.tau_max.to_string());
    pairs.insert("dtau", cfg.dtau.to_string());
    if !cfg.state.is_empty() {
        pairs.insert("state", cfg.state.clone());
    }
    pairs.insert("shots", cfg.shots.to_string());
    pairs.insert("runs", cfg.runs.to_string());
    pairs.insert("noise_p1", cfg.noise.p1.to_string());
    pairs.insert("noise_p2", cfg.noise.p2.to_string());
    pairs.insert("noise_ro", cfg.noise.p_ro.to_string());
    pairs.insert("seed", cfg.seed.to_string());
    pairs.insert("out", cfg.out_dir.display().to_string());
    pairs.insert("plot", cfg.plot.to_string());
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out
}
