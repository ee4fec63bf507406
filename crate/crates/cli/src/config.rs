//! TOML run and sweep configurations.
//!
//! A run file names the case, the initial metric and optional integrator
//! settings:
//!
//! ```toml
//! case = "so3r3"
//!
//! [initial]
//! alpha = 1.0
//! beta = 2.0
//! gamma = 3.0
//! nu = 0.5
//!
//! [integrator]
//! horizon = 100.0
//! sample_stride = 1e-3
//! ```
//!
//! A sweep file replaces `[initial]` by one section per parameter, each
//! either an explicit `values` list or a `min`/`max`/`count` range with
//! `spacing = "linear"` (default) or `"log"`.

use crate::error::{CliError, CliResult};
use homflow_core::{Case, IntegratorOptions, MetricParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::path::{Path, PathBuf};

fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn check_options(opts: &IntegratorOptions) -> CliResult<()> {
    opts.validate().map_err(|e| CliError::Config(e.to_string()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Initial {
    alpha: f64,
    beta: f64,
    gamma: f64,
    #[serde(default)]
    mu: f64,
    #[serde(default)]
    nu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    case: Case,
    initial: Initial,
    #[serde(default)]
    integrator: IntegratorOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub initial: MetricParams,
    pub opts: IntegratorOptions,
    pub out_csv: PathBuf,
    pub out_json: PathBuf,
}

impl RunConfig {
    pub fn parse(text: &str, out_csv: PathBuf, out_json: PathBuf) -> CliResult<Self> {
        let raw: RawRun = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        Self::from_raw(raw, out_csv, out_json)
    }

    pub fn load(path: &Path, out_csv: PathBuf, out_json: PathBuf) -> CliResult<Self> {
        Self::from_raw(read_toml(path)?, out_csv, out_json)
    }

    fn from_raw(raw: RawRun, out_csv: PathBuf, out_json: PathBuf) -> CliResult<Self> {
        let i = raw.initial;
        let initial = MetricParams::new(raw.case, i.alpha, i.beta, i.gamma, i.mu, i.nu)
            .map_err(|e| CliError::Config(e.to_string()))?;
        check_options(&raw.integrator)?;
        Ok(Self {
            initial,
            opts: raw.integrator,
            out_csv,
            out_json,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Values taken by one parameter of a sweep. Random sweeps draw uniformly
/// (log-uniformly for `spacing = "log"`) from `[min, max]` and ignore `count`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Axis {
    pub fn fixed(v: f64) -> Self {
        Self {
            values: Some(vec![v]),
            min: None,
            max: None,
            count: None,
            spacing: Spacing::Linear,
        }
    }

    /// `gridded`: the axis is expanded as a grid, so ranges need a `count`.
    fn validate(&self, name: &str, positive: bool, gridded: bool) -> CliResult<()> {
        let err = |msg: String| Err(CliError::Config(format!("[{name}] {msg}")));
        let ok = |v: f64| v.is_finite() && (!positive || v > 0.0);
        match (&self.values, self.min, self.max, self.count) {
            (Some(vs), None, None, None) => {
                if let Some(v) = vs.iter().find(|v| !ok(**v)) {
                    return err(format!("value {v} outside the valid domain"));
                }
            }
            (None, Some(lo), Some(hi), count) => {
                if gridded && count.is_none() {
                    return err("grid ranges need a `count`".to_string());
                }
                if !ok(lo) || !ok(hi) || lo > hi {
                    return err(format!("range [{lo}, {hi}] outside the valid domain"));
                }
                if self.spacing == Spacing::Log && lo <= 0.0 {
                    return err("log spacing needs a positive range".to_string());
                }
            }
            _ => return err("give either `values` or `min` and `max`".to_string()),
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        if let Some(vs) = &self.values {
            return vs.clone();
        }
        let (lo, hi, n) = (self.min.unwrap(), self.max.unwrap(), self.count.unwrap());
        match n {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..n)
                .map(|k| {
                    let s = k as f64 / (n - 1) as f64;
                    match self.spacing {
                        Spacing::Linear => lo + s * (hi - lo),
                        Spacing::Log => (lo.ln() + s * (hi.ln() - lo.ln())).exp(),
                    }
                })
                .collect(),
        }
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        if let Some(vs) = &self.values {
            return vs[rng.gen_range(0..vs.len())];
        }
        let (lo, hi) = (self.min.unwrap(), self.max.unwrap());
        let u: f64 = rng.gen();
        match self.spacing {
            Spacing::Linear => lo + u * (hi - lo),
            Spacing::Log => (lo.ln() + u * (hi.ln() - lo.ln())).exp(),
        }
    }

    fn is_empty(&self) -> bool {
        match &self.values {
            Some(vs) => vs.is_empty(),
            None => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Cartesian product of the axes.
    #[default]
    Grid,
    /// `samples` independent draws, seeded by `seed`.
    Random,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    case: Case,
    #[serde(default)]
    mode: SweepMode,
    #[serde(default)]
    samples: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    tie_gamma_to_beta: bool,
    alpha: Axis,
    beta: Axis,
    gamma: Option<Axis>,
    mu: Option<Axis>,
    nu: Option<Axis>,
    #[serde(default)]
    integrator: IntegratorOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub case: Case,
    pub mode: SweepMode,
    pub samples: usize,
    pub seed: u64,
    pub tie_gamma_to_beta: bool,
    pub alpha: Axis,
    pub beta: Axis,
    pub gamma: Axis,
    pub mu: Axis,
    pub nu: Axis,
    pub opts: IntegratorOptions,
}

impl SweepConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        Self::from_raw(toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::from_raw(read_toml(path)?)
    }

    fn from_raw(raw: RawSweep) -> CliResult<Self> {
        let gamma = match (raw.tie_gamma_to_beta, raw.gamma) {
            (true, Some(_)) => {
                return Err(CliError::Config(
                    "[gamma] must be omitted when tie_gamma_to_beta is set".to_string(),
                ))
            }
            (true, None) => Axis::fixed(f64::NAN),
            (false, Some(g)) => g,
            (false, None) => return Err(CliError::Config("missing [gamma]".to_string())),
        };
        let cfg = Self {
            case: raw.case,
            mode: raw.mode,
            samples: raw.samples,
            seed: raw.seed,
            tie_gamma_to_beta: raw.tie_gamma_to_beta,
            alpha: raw.alpha,
            beta: raw.beta,
            gamma,
            mu: raw.mu.unwrap_or(Axis::fixed(0.0)),
            nu: raw.nu.unwrap_or(Axis::fixed(0.0)),
            opts: raw.integrator,
        };
        let gridded = cfg.mode == SweepMode::Grid;
        cfg.alpha.validate("alpha", true, gridded)?;
        cfg.beta.validate("beta", true, gridded)?;
        if !cfg.tie_gamma_to_beta {
            cfg.gamma.validate("gamma", true, gridded)?;
        }
        cfg.mu.validate("mu", false, gridded)?;
        cfg.nu.validate("nu", false, gridded)?;
        if cfg.mode == SweepMode::Random {
            let axes = [&cfg.alpha, &cfg.beta, &cfg.gamma, &cfg.mu, &cfg.nu];
            if cfg.samples > 0 && axes.iter().any(|a| a.is_empty()) {
                return Err(CliError::Config("random sampling from an empty axis".to_string()));
            }
        }
        check_options(&cfg.opts)?;
        // reject the whole sweep up front if any point is invalid
        cfg.initial_conditions()?;
        Ok(cfg)
    }

    fn point(&self, p: [f64; 5]) -> CliResult<MetricParams> {
        let gamma = if self.tie_gamma_to_beta { p[1] } else { p[2] };
        MetricParams::new(self.case, p[0], p[1], gamma, p[3], p[4])
            .map_err(|e| CliError::Config(format!("sweep point {p:?}: {e}")))
    }

    /// Initial metrics in sweep order (grid: `nu` varies fastest).
    pub fn initial_conditions(&self) -> CliResult<Vec<MetricParams>> {
        match self.mode {
            SweepMode::Grid => {
                let axes = [
                    self.alpha.grid(),
                    self.beta.grid(),
                    if self.tie_gamma_to_beta { vec![f64::NAN] } else { self.gamma.grid() },
                    self.mu.grid(),
                    self.nu.grid(),
                ];
                let mut out = Vec::new();
                for &a in &axes[0] {
                    for &b in &axes[1] {
                        for &c in &axes[2] {
                            for &m in &axes[3] {
                                for &n in &axes[4] {
                                    out.push(self.point([a, b, c, m, n])?);
                                }
                            }
                        }
                    }
                }
                Ok(out)
            }
            SweepMode::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..self.samples)
                    .map(|_| {
                        let p = [
                            self.alpha.draw(&mut rng),
                            self.beta.draw(&mut rng),
                            self.gamma.draw(&mut rng),
                            self.mu.draw(&mut rng),
                            self.nu.draw(&mut rng),
                        ];
                        self.point(p)
                    })
                    .collect()
            }
        }
    }
}
