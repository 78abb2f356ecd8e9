//! The four subcommands. Each writes its table to `out` and diagnostics to `err`.

use std::io::{self, Write};

use levicav::cooling::{nbar_adiabatic, nbar_exact};
use levicav::dynamics::SystemRates;
use levicav::params::{small_particle_limits, OptomechParams};
use levicav::sweep::radius_sweep;
use levicav::validation::{run_validation, ValidationOptions};
use levicav::Execution;
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};

pub const SWEEP_HEADER: &str =
    "R_m,x_size,g_tilde_rad_s,kappa_scatter_rad_s,kappa_tot_rad_s,Gamma_rad_s,cooperativity,n_min,delta_opt_rad_s,stable";
pub const COOL_HEADER: &str = "delta_rad_s,n_exact,n_adiab,stable";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Usage = 1,
    NoSteadyState = 2,
    Numerical = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("numerical failure: {0}")]
    Numerical(#[from] levicav::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Config(_) | CliError::Io(_) => Status::Usage,
            CliError::Numerical(_) => Status::Numerical,
        }
    }
}

/// Full-precision scientific notation; NaN for missing values.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    num(v.unwrap_or(f64::NAN))
}

pub fn cmd_params(cfg: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let p = OptomechParams::compute(&cfg.sphere, &cfg.cavity, &cfg.tweezer)?;
    let lim = small_particle_limits(&cfg.sphere, &cfg.cavity, &cfg.tweezer)?;
    let c = &cfg.cavity;
    let rows: Vec<(&str, f64, &str)> = vec![
        ("radius", cfg.sphere.radius, "m"),
        ("size_parameter", p.size_parameter, "1"),
        ("epsilon_c", cfg.sphere.epsilon_c(), "1"),
        ("mass", cfg.sphere.mass(), "kg"),
        ("mode_volume", c.mode_volume(), "m^3"),
        ("kappa_0", c.intrinsic_decay(), "rad/s"),
        ("photon_number", p.photon_number, "1"),
        ("trap_frequency", p.trap_frequency, "rad/s"),
        ("zero_point", p.zero_point, "m"),
        ("g_tilde", p.coupling, "rad/s"),
        ("kappa_scatter", p.cavity_decay_scatter, "rad/s"),
        ("kappa_tot", p.cavity_decay_total, "rad/s"),
        ("Gamma", p.recoil, "rad/s"),
        ("Gamma_cav", p.recoil_cavity, "rad/s"),
        ("Gamma_tw", p.recoil_tweezer, "rad/s"),
        ("cooperativity", p.cooperativity().unwrap_or(f64::NAN), "1"),
        ("S_plus_re", p.sums.plus.re, "1"),
        ("S_plus_im", p.sums.plus.im, "1"),
        ("S_alt_re", p.sums.alt.re, "1"),
        ("S_alt_im", p.sums.alt.im, "1"),
        ("mie_tail", p.sums.tail, "1"),
        ("small_omega_t0", lim.trap_frequency, "rad/s"),
        ("small_g0", lim.coupling, "rad/s"),
        ("small_g_rn0", lim.coupling_correction, "rad/s"),
        ("small_delta_M0", lim.trap_shift, "rad/s"),
        ("small_kappa0", lim.cavity_decay, "rad/s"),
        ("small_Gamma0_cav", lim.recoil_cavity, "rad/s"),
        ("small_Gamma0_tw", lim.recoil_tweezer, "rad/s"),
    ];
    writeln!(out, "quantity,value,unit")?;
    for (name, v, unit) in rows {
        writeln!(out, "{name},{},{unit}", num(v))?;
    }
    if cfg.tweezer.include_recoil {
        writeln!(out, "# Gamma_tw uses the small-particle approximation")?;
    }
    Ok(Status::Success)
}

pub fn cmd_sweep(cfg: &RunConfig, exec: Execution, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, CliError> {
    let radii = cfg.radii.values()?;
    let rows = radius_sweep(&cfg.sphere, &cfg.cavity, &cfg.tweezer, &radii, &cfg.detuning, exec)?;
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            num(r.radius),
            num(r.size_parameter),
            num(r.coupling),
            num(r.kappa_scatter),
            num(r.kappa_total),
            num(r.recoil),
            num(r.cooperativity),
            opt(r.n_min),
            opt(r.delta_opt),
            u8::from(r.stable())
        )?;
    }
    let unstable = rows.iter().filter(|r| !r.stable()).count();
    if unstable == rows.len() {
        writeln!(err, "warning: no steady state at any radius")?;
        return Ok(Status::NoSteadyState);
    }
    if unstable > 0 {
        writeln!(err, "warning: no steady state at {unstable} of {} radii", rows.len())?;
    }
    Ok(Status::Success)
}

/// Rates for `cool`: given directly, or derived from the sphere at `radius`.
pub fn cool_rates(cfg: &RunConfig) -> Result<SystemRates, CliError> {
    let d = &cfg.direct;
    if let (Some(g), Some(k), Some(gamma)) = (d.coupling, d.cavity_decay, d.recoil) {
        let w = cfg.tweezer.trap_frequency(&cfg.sphere);
        return Ok(SystemRates { coupling: g, cavity_decay: k, recoil: gamma, trap_frequency: w });
    }
    Ok(OptomechParams::compute(&cfg.sphere, &cfg.cavity, &cfg.tweezer)?.rates())
}

pub fn cmd_cool(cfg: &RunConfig, exec: Execution, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, CliError> {
    let rates = cool_rates(cfg)?;
    let ds = cfg.detuning.resolve(&rates)?.values()?;
    let rows = levicav::exec::map(exec, &ds, |&d| {
        let exact = nbar_exact(&rates, d).ok().and_then(|r| r.nbar);
        let adiab = nbar_adiabatic(&rates, d).ok().and_then(|r| r.nbar);
        (d, exact, adiab)
    });
    writeln!(out, "{COOL_HEADER}")?;
    for (d, exact, adiab) in &rows {
        writeln!(out, "{},{},{},{}", num(*d), opt(*exact), opt(*adiab), u8::from(exact.is_some()))?;
    }
    if rows.iter().all(|r| r.1.is_none()) {
        writeln!(err, "warning: no steady state anywhere on the detuning grid")?;
        return Ok(Status::NoSteadyState);
    }
    Ok(Status::Success)
}

pub fn cmd_validate(
    cfg: &RunConfig,
    opts: &ValidationOptions,
    exec: Execution,
    out: &mut dyn Write,
) -> Result<Status, CliError> {
    let checks = run_validation(&cfg.sphere, &cfg.cavity, &cfg.tweezer, opts, exec);
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        writeln!(out, "{:<width$}  {}  {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail)?;
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    if failed.is_empty() {
        writeln!(out, "all {} checks passed", checks.len())?;
        Ok(Status::Success)
    } else {
        writeln!(out, "failed: {}", failed.join(", "))?;
        Ok(Status::Numerical)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for v in [1.0, -3.7e8, 1e-300, std::f64::consts::PI] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(opt(None), "NaN");
    }

    #[test]
    fn sweep_header_has_ten_columns() {
        assert_eq!(SWEEP_HEADER.split(',').count(), 10);
    }

    #[test]
    fn cool_uses_direct_rates() {
        let cfg = crate::config::parse_config("coupling = 7e3\ncavity_decay = 3e5\nrecoil = 2").unwrap();
        let r = cool_rates(&cfg).unwrap();
        assert_eq!((r.coupling, r.cavity_decay, r.recoil), (7e3, 3e5, 2.0));
    }
}
