//! `key = value` run configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::dynrep::{Thresholds, TorusGrid};
use crate::eigen::DEFAULT_TOL;
use crate::model::ModelParams;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub thresholds: Thresholds,
    pub grid_resolution: usize,
    pub tol: f64,
    /// Trajectory length in units of T = 2π/Δ.
    pub t_max: f64,
    pub samples: usize,
    pub cache_path: PathBuf,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::default(),
            thresholds: Thresholds::default(),
            grid_resolution: crate::dynrep::field::DEFAULT_RESOLUTION,
            tol: DEFAULT_TOL,
            t_max: 4.0,
            samples: 2000,
            cache_path: PathBuf::from("eigen.cache"),
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.grid_resolution)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.thresholds.validate()?;
        self.grid()?;
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::param(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::param(format!("t_max must be positive, got {}", self.t_max)));
        }
        if self.samples < 2 {
            return Err(Error::param("samples must be at least 2"));
        }
        Ok(())
    }

    /// Resolved configuration in the same `key = value` format.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let t = &self.thresholds;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("N", p.n_particles.to_string());
        kv("epsilon_bar", p.epsilon_bar.to_string());
        kv("delta", p.delta.to_string());
        kv("kappa12", p.kappa12.to_string());
        kv("kappa23", p.kappa23.to_string());
        kv("zeta", p.zeta.to_string());
        kv("v_thresh", t.v_thresh.to_string());
        kv("loc_thresh", t.loc_thresh.to_string());
        kv("min_strength", t.min_strength.to_string());
        kv("align_cos", t.align_cos.to_string());
        kv("spectator_tol", t.spectator_tol.to_string());
        kv("drift_width", t.drift_width.to_string());
        kv("dominance", t.dominance.to_string());
        kv("grid_resolution", self.grid_resolution.to_string());
        kv("tol", self.tol.to_string());
        kv("t_max", self.t_max.to_string());
        kv("samples", self.samples.to_string());
        kv("cache_path", self.cache_path.display().to_string());
        kv("out_dir", self.out_dir.display().to_string());
        s
    }
}

/// Parses a configuration; keys not present keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |message: String| Error::Parse { line: line_no, message };
        let (key, value) = line.split_once('=').ok_or_else(|| perr(format!("expected key = value, got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(perr(format!("missing value for '{key}'")));
        }
        let float = || value.parse::<f64>().map_err(|_| perr(format!("'{value}' is not a number")));
        let count = || value.parse::<i64>().map_err(|_| perr(format!("'{value}' is not an integer")));
        let p = &mut cfg.params;
        let t = &mut cfg.thresholds;
        match key {
            "N" => {
                let n = count()?;
                if n < 1 || n > u32::MAX as i64 {
                    return Err(Error::param(format!("N must be at least 1, got {n} (line {line_no})")));
                }
                p.n_particles = n as u32;
            }
            "epsilon_bar" => p.epsilon_bar = float()?,
            "delta" => p.delta = float()?,
            "kappa12" => p.kappa12 = float()?,
            "kappa23" => p.kappa23 = float()?,
            "zeta" => p.zeta = float()?,
            "v_thresh" => t.v_thresh = float()?,
            "loc_thresh" => t.loc_thresh = float()?,
            "min_strength" => t.min_strength = float()?,
            "align_cos" => t.align_cos = float()?,
            "spectator_tol" => t.spectator_tol = float()?,
            "drift_width" => t.drift_width = float()?,
            "dominance" => t.dominance = float()?,
            "grid_resolution" => {
                let r = count()?;
                cfg.grid_resolution = usize::try_from(r).map_err(|_| perr(format!("invalid resolution {r}")))?;
            }
            "tol" => cfg.tol = float()?,
            "t_max" => cfg.t_max = float()?,
            "samples" => {
                let s = count()?;
                cfg.samples = usize::try_from(s).map_err(|_| perr(format!("invalid sample count {s}")))?;
            }
            "cache_path" => cfg.cache_path = PathBuf::from(value),
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            other => return Err(perr(format!("unknown key '{other}'"))),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}
