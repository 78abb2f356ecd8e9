//! Radius sweeps: optomechanical parameters plus the optimized occupation.

use crate::cooling::{optimize_detuning, DetuningScan};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::params::{CavitySpec, OptomechParams, SphereSpec, TweezerSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub radius: f64,
    pub size_parameter: f64,
    pub coupling: f64,
    pub kappa_scatter: f64,
    pub kappa_total: f64,
    pub recoil: f64,
    /// NaN when Γ or κ vanish.
    pub cooperativity: f64,
    pub n_min: Option<f64>,
    pub delta_opt: Option<f64>,
}

impl SweepRow {
    pub fn stable(&self) -> bool {
        self.n_min.is_some()
    }
}

pub fn sweep_point(
    sphere: &SphereSpec,
    cavity: &CavitySpec,
    tweezer: &TweezerSpec,
    scan: &DetuningScan,
) -> Result<SweepRow> {
    let p = OptomechParams::compute(sphere, cavity, tweezer)?;
    let rates = p.rates();
    let grid = scan.resolve(&rates)?;
    let (n_min, delta_opt) = match optimize_detuning(&rates, &grid, Execution::Sequential) {
        Ok(r) => (r.nbar, Some(r.detuning)),
        Err(Error::NoStableDetuning { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(SweepRow {
        radius: sphere.radius,
        size_parameter: p.size_parameter,
        coupling: p.coupling,
        kappa_scatter: p.cavity_decay_scatter,
        kappa_total: p.cavity_decay_total,
        recoil: p.recoil,
        cooperativity: p.cooperativity().unwrap_or(f64::NAN),
        n_min,
        delta_opt,
    })
}

/// One row per radius, in input order. Parallelism is over radii only.
pub fn radius_sweep(
    sphere: &SphereSpec,
    cavity: &CavitySpec,
    tweezer: &TweezerSpec,
    radii: &[f64],
    scan: &DetuningScan,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    exec::map(exec, radii, |&r| sweep_point(&sphere.with_radius(r), cavity, tweezer, scan))
        .into_iter()
        .collect()
}

/// Parameters only (no detuning optimization), for quick scans.
pub fn parameter_sweep(
    sphere: &SphereSpec,
    cavity: &CavitySpec,
    tweezer: &TweezerSpec,
    radii: &[f64],
    exec: Execution,
) -> Result<Vec<OptomechParams>> {
    exec::map(exec, radii, |&r| OptomechParams::compute(&sphere.with_radius(r), cavity, tweezer))
        .into_iter()
        .collect()
}
