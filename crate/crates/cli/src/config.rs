//! Run configuration read from a JSON or TOML file.

use std::path::Path;

use anticross_core::{build_instance, InstanceParams, InstanceSpec, Schedule};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_STEPS: usize = 101;
pub const DEFAULT_K: usize = 6;
pub const DEFAULT_FULL_ORACLE_MAX_N: usize = 14;
pub const DEFAULT_LAMBDA_STEPS: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(default)]
    pub t_min: f64,
    #[serde(default = "one")]
    pub t_max: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn one() -> f64 {
    1.0
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            t_min: 0.0,
            t_max: 1.0,
            steps: DEFAULT_STEPS,
        }
    }
}

/// Instance keys plus optional experiment settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub instance: InstanceParams,
    #[serde(default)]
    pub grid: GridConfig,
    /// Levels per Hamiltonian in `spectrum`.
    #[serde(default)]
    pub k: Option<usize>,
    /// Largest qubit count for which the full `2^n` Hamiltonian is used.
    #[serde(default)]
    pub full_oracle_max_n: Option<usize>,
    /// λ points on `[0, 1)` in `gevp`.
    #[serde(default)]
    pub lambda_steps: Option<usize>,
    /// Values of `m_l` in `scaling`; `m_r - m_l` is held fixed.
    #[serde(default)]
    pub family_m_l: Option<Vec<usize>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let is_toml = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("toml"));
        let cfg: Self = if is_toml {
            toml::from_str(&text)
                .with_context(|| format!("parsing TOML config {}", path.display()))?
        } else {
            serde_json::from_str(&text)
                .with_context(|| format!("parsing JSON config {}", path.display()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.steps < 2 {
            bail!("grid.steps must be at least 2, got {}", self.grid.steps);
        }
        if self.k == Some(0) {
            bail!("k must be at least 1");
        }
        if self.lambda_steps.is_some_and(|s| s < 2) {
            bail!("lambda_steps must be at least 2");
        }
        self.spec()?;
        self.schedule()?;
        Ok(())
    }

    pub fn spec(&self) -> Result<InstanceSpec> {
        build_instance(&self.instance).context("invalid instance")
    }

    pub fn schedule(&self) -> Result<Schedule> {
        let spec = self.spec()?;
        Schedule::uniform(
            spec.gamma1(),
            self.grid.t_min,
            self.grid.t_max,
            self.grid.steps,
        )
        .context("invalid grid")
    }
}

pub fn is_writable_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path)
        .with_context(|| format!("creating output directory {}", path.display()))?;
    let probe = path.join(".anticross-write-probe");
    std::fs::write(&probe, b"")
        .with_context(|| format!("output directory {} is not writable", path.display()))?;
    std::fs::remove_file(&probe).ok();
    Ok(())
}
