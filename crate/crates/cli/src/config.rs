//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, SI units throughout.
//! Absent keys take the defaults below; unknown or repeated keys are errors.

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_4, PI};
use std::path::PathBuf;

use levicav::cooling::DetuningScan;
use levicav::grid::{Grid, Spacing};
use levicav::params::{CavitySpec, SphereSpec, TweezerSpec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Rates given directly instead of derived from the sphere (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DirectRates {
    pub coupling: Option<f64>,
    pub cavity_decay: Option<f64>,
    pub recoil: Option<f64>,
}

impl DirectRates {
    pub fn is_set(&self) -> bool {
        self.coupling.is_some() || self.cavity_decay.is_some() || self.recoil.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sphere: SphereSpec,
    pub cavity: CavitySpec,
    pub tweezer: TweezerSpec,
    pub radii: Grid,
    pub detuning: DetuningScan,
    pub direct: DirectRates,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sphere: SphereSpec::fused_silica(1.3e-6),
            cavity: CavitySpec::default(),
            tweezer: TweezerSpec::default(),
            radii: Grid { min: 10e-9, max: 2e-6, points: 200, spacing: Spacing::Log },
            detuning: DetuningScan::default(),
            direct: DirectRates::default(),
            output: None,
        }
    }
}

pub const KEYS: &[&str] = &[
    "radius",
    "epsilon_r",
    "density",
    "cavity_length",
    "finesse",
    "cavity_waist",
    "wavelength",
    "cavity_power",
    "phase",
    "photon_number",
    "tweezer_power",
    "tweezer_waist",
    "tweezer_wavelength",
    "trap_frequency",
    "tweezer_recoil",
    "r_min",
    "r_max",
    "n_points",
    "spacing",
    "delta_min",
    "delta_max",
    "delta_points",
    "coupling",
    "cavity_decay",
    "recoil",
    "output",
];

enum Sign {
    Positive,
    NonNegative,
    Any,
}

fn number(v: &str, sign: Sign) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("'{v}' is not a number"))?;
    if !x.is_finite() {
        return Err(format!("'{v}' is not finite"));
    }
    match sign {
        Sign::Positive if x <= 0.0 => Err(format!("value must be positive, got {x}")),
        Sign::NonNegative if x < 0.0 => Err(format!("value must be non-negative, got {x}")),
        _ => Ok(x),
    }
}

fn optional(v: &str, sign: Sign) -> Result<Option<f64>, String> {
    match v.to_ascii_lowercase().as_str() {
        "none" | "auto" => Ok(None),
        _ => number(v, sign).map(Some),
    }
}

fn count(v: &str) -> Result<usize, String> {
    v.parse().map_err(|_| format!("'{v}' is not a non-negative integer"))
}

fn flag(v: &str) -> Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(format!("'{v}' is not a boolean")),
    }
}

fn assign(cfg: &mut RunConfig, key: &str, v: &str) -> Result<(), String> {
    use Sign::*;
    match key {
        "radius" => cfg.sphere.radius = number(v, Positive)?,
        "epsilon_r" => {
            let e = number(v, Positive)?;
            if e <= 1.0 {
                return Err(format!("epsilon_r must exceed 1, got {e}"));
            }
            cfg.sphere.epsilon_r = e;
        }
        "density" => cfg.sphere.density = number(v, Positive)?,
        "cavity_length" => cfg.cavity.length = number(v, Positive)?,
        "finesse" => cfg.cavity.finesse = number(v, Positive)?,
        "cavity_waist" => cfg.cavity.waist = number(v, Positive)?,
        "wavelength" => cfg.cavity.wavelength = number(v, Positive)?,
        "cavity_power" => cfg.cavity.drive_power = number(v, NonNegative)?,
        "phase" => cfg.cavity.phase = number(v, Any)?,
        "photon_number" => cfg.cavity.photon_number_override = optional(v, NonNegative)?,
        "tweezer_power" => cfg.tweezer.power = number(v, Positive)?,
        "tweezer_waist" => cfg.tweezer.waist = number(v, Positive)?,
        "tweezer_wavelength" => cfg.tweezer.wavelength = number(v, Positive)?,
        "trap_frequency" => cfg.tweezer.trap_frequency_override = optional(v, Positive)?,
        "tweezer_recoil" => cfg.tweezer.include_recoil = flag(v)?,
        "r_min" => cfg.radii.min = number(v, Positive)?,
        "r_max" => cfg.radii.max = number(v, Positive)?,
        "n_points" => cfg.radii.points = count(v)?,
        "spacing" => cfg.radii.spacing = v.parse()?,
        "delta_min" => cfg.detuning.min = optional(v, Any)?,
        "delta_max" => cfg.detuning.max = optional(v, Any)?,
        "delta_points" => cfg.detuning.points = Some(count(v)?),
        "coupling" => cfg.direct.coupling = optional(v, Any)?,
        "cavity_decay" => cfg.direct.cavity_decay = optional(v, Positive)?,
        "recoil" => cfg.direct.recoil = optional(v, NonNegative)?,
        "output" => cfg.output = Some(PathBuf::from(v)),
        _ => return Err(format!("unknown key '{key}'")),
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| ConfigError::Line { line, msg: format!("expected 'key = value', got '{body}'") })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Line { line, msg: format!("expected 'key = value', got '{body}'") });
        }
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::Line { line, msg: format!("duplicate key '{key}'") });
        }
        assign(&mut cfg, key, value).map_err(|msg| ConfigError::Line { line, msg })?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub n_points: Option<usize>,
    pub delta_min: Option<f64>,
    pub delta_max: Option<f64>,
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(v) = o.r_min {
            self.radii.min = v;
        }
        if let Some(v) = o.r_max {
            self.radii.max = v;
        }
        if let Some(v) = o.n_points {
            self.radii.points = v;
        }
        if o.delta_min.is_some() {
            self.detuning.min = o.delta_min;
        }
        if o.delta_max.is_some() {
            self.detuning.max = o.delta_max;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |e: levicav::Error| ConfigError::Invalid(e.to_string());
        self.sphere.validate().map_err(bad)?;
        self.cavity.validate().map_err(bad)?;
        self.tweezer.validate().map_err(bad)?;
        if self.radii.points < 2 {
            return Err(ConfigError::Invalid(format!("n_points must be at least 2, got {}", self.radii.points)));
        }
        if !(self.radii.min > 0.0 && self.radii.min < self.radii.max) {
            return Err(ConfigError::Invalid(format!(
                "need 0 < r_min < r_max, got r_min = {}, r_max = {}",
                self.radii.min, self.radii.max
            )));
        }
        if let (Some(lo), Some(hi)) = (self.detuning.min, self.detuning.max) {
            if !(lo < hi) {
                return Err(ConfigError::Invalid(format!("need delta_min < delta_max, got {lo} >= {hi}")));
            }
        }
        if self.detuning.points.is_some_and(|n| n < 2) {
            return Err(ConfigError::Invalid("delta_points must be at least 2".into()));
        }
        let d = &self.direct;
        if d.is_set() && (d.coupling.is_none() || d.cavity_decay.is_none() || d.recoil.is_none()) {
            return Err(ConfigError::Invalid("coupling, cavity_decay and recoil must be given together".into()));
        }
        Ok(())
    }
}

/// Default trap frequency, 2π × 136 kHz.
pub fn default_trap_frequency() -> f64 {
    2.0 * PI * 136e3
}

/// Default sphere position on the standing wave.
pub fn default_phase() -> f64 {
    FRAC_PI_4
}
