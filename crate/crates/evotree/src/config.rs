//! Run configuration: TOML file plus command-line overrides.
//!
//! Precedence is command-line flag, then config file, then built-in default.
//! The seed additionally falls back to `EVOTREE_SEED` before the default.

use std::path::PathBuf;

use clap::Args;
use evotree_core::EngineParams;
use serde::Deserialize;
use serde_json::{json, Value};

pub const SEED_ENV: &str = "EVOTREE_SEED";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algorithm: Option<String>,
    pub input: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Metric checkpoint interval.
    pub every: Option<usize>,
    pub render_dir: Option<PathBuf>,
    #[serde(default)]
    pub params: ParamOverrides,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Engine parameters that may be overridden; TOML keys are the field names.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    /// Force rounds per insertion.
    #[arg(long = "iters")]
    pub n_iters: Option<usize>,
    /// Bend nodes per edge (dynacola).
    #[arg(long = "subdiv")]
    pub n_s: Option<usize>,
    /// Back-off factor of a rejected move (dynasafe).
    #[arg(long)]
    pub p: Option<f64>,
    /// Back-offs before a node stays put (dynasafe).
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub sample_count: Option<usize>,
    #[arg(long)]
    pub k_edge: Option<f64>,
    #[arg(long)]
    pub k_repulse: Option<f64>,
    #[arg(long)]
    pub k_collide: Option<f64>,
    #[arg(long)]
    pub k_gravity: Option<f64>,
    #[arg(long)]
    pub k_stress: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub ellipse_aspect: Option<f64>,
    #[arg(long)]
    pub step_cap_fraction: Option<f64>,
    #[arg(long)]
    pub charge_real: Option<f64>,
    #[arg(long)]
    pub charge_subdivision: Option<f64>,
    #[arg(long)]
    pub softening: Option<f64>,
    #[arg(long)]
    pub placement_shrink: Option<f64>,
    #[arg(long)]
    pub placement_rounds: Option<usize>,
}

macro_rules! each_param {
    ($m:ident) => {
        $m!(n_iters, n_s, p, q, sample_count, k_edge, k_repulse, k_collide, k_gravity, k_stress, theta,
            ellipse_aspect, step_cap_fraction, charge_real, charge_subdivision, softening,
            placement_shrink, placement_rounds)
    };
}

impl ParamOverrides {
    /// Fields set in `self` win over those in `fallback`.
    pub fn or(&self, fallback: &ParamOverrides) -> ParamOverrides {
        macro_rules! merge {
            ($($f:ident),*) => { ParamOverrides { $($f: self.$f.or(fallback.$f)),* } };
        }
        each_param!(merge)
    }

    pub fn apply(&self, params: &mut EngineParams) {
        macro_rules! set {
            ($($f:ident),*) => {{ $(if let Some(v) = self.$f { params.$f = v; })* }};
        }
        each_param!(set)
    }
}

/// Every engine parameter by name, in declaration order.
pub fn params_json(params: &EngineParams) -> Value {
    macro_rules! obj {
        ($($f:ident),*) => { json!({ $(stringify!($f): params.$f,)* "seed": params.seed }) };
    }
    each_param!(obj)
}

/// Resolves the seed: flag, config file, environment, then 0.
pub fn resolve_seed(flag: Option<u64>, config: Option<u64>, env: Option<&str>) -> Result<u64, String> {
    if let Some(s) = flag.or(config) {
        return Ok(s);
    }
    match env {
        Some(v) => v.trim().parse().map_err(|_| format!("{SEED_ENV}=`{v}` is not an unsigned integer")),
        None => Ok(0),
    }
}
