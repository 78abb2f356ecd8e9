//! Closed-form phonon occupations and the detuning optimizer.
//!
//! The closed forms below are written for a master equation with cavity
//! linewidth κ' and heating Γ' entering as κ'D[a] and Γ'D[b + b†]. The
//! Lindblad form in [`crate::dynamics`] carries an explicit factor 2, so the
//! evaluators here call them with κ' = 2κ_tot and Γ' = 2Γ.

use crate::dynamics::{build_system, stability, SystemRates};
use crate::error::{domain, Error, Result};
use crate::exec::{self, Execution};
use crate::grid::{Grid, Spacing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Exact,
    Adiabatic,
    Sideband,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingResult {
    /// None when the system has no steady state at this detuning.
    pub nbar: Option<f64>,
    pub detuning: f64,
    pub stable: bool,
    pub regime: Regime,
    pub max_re_eig: Option<f64>,
}

/// Steady-state n̄ = (A₁ − A₂ + A₃)/A₄ for linewidth `k`, heating `gamma`.
pub fn closed_form_nbar(g: f64, k: f64, gamma: f64, w: f64, d: f64) -> Result<f64> {
    let g2 = g * g;
    let d2 = d * d;
    let k2 = k * k;
    let w2 = w * w;
    let lor = 4.0 * d2 + k2;

    let a1 = 32.0 * g2 * g2 * d * (4.0 * d2 * k + k2 * k + 16.0 * d * (gamma - k) * w + 8.0 * k * w2);
    let a2 = gamma * lor * w * (16.0 * d2 * d2 + 8.0 * d2 * (k2 - 4.0 * w2) + (k2 + 4.0 * w2).powi(2));
    let a3 = 4.0
        * g2
        * (-k * lor * (k2 + 4.0 * (d - w).powi(2)) * w
            + 2.0 * gamma * d * (32.0 * w2 * w2 + lor * lor + 4.0 * (-20.0 * d2 + 3.0 * k2) * w2));
    let a4 = 64.0 * g2 * d * k * w * (16.0 * g2 * d - lor * w);

    if a4 == 0.0 || !a4.is_finite() {
        return Err(Error::DegenerateDenominator("A4"));
    }
    Ok((a1 - a2 + a3) / a4)
}

/// Adiabatic-elimination n̄ for linewidth `k`, heating `gamma`.
pub fn adiabatic_nbar(g: f64, k: f64, gamma: f64, w: f64, d: f64) -> Result<f64> {
    let den = 64.0 * g * g * d * k * w;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::DegenerateDenominator("adiabatic n"));
    }
    let heat = 4.0 * g * g * k + gamma * (k * k + 4.0 * (d + w).powi(2));
    Ok(heat * (k * k + 4.0 * (d - w).powi(2)) / den)
}

/// (κ/4ω)² + 1/(4C).
pub fn sideband_limit(linewidth: f64, trap: f64, cooperativity: f64) -> Result<f64> {
    if !(cooperativity > 0.0) {
        return Err(domain(format!("cooperativity must be positive, got {cooperativity}")));
    }
    Ok((linewidth / (4.0 * trap)).powi(2) + 0.25 / cooperativity)
}

pub fn nbar_exact(rates: &SystemRates, detuning: f64) -> Result<CoolingResult> {
    if detuning == 0.0 || !detuning.is_finite() {
        return Err(domain("exact n needs a finite non-zero detuning"));
    }
    let st = stability(&build_system(rates, detuning))?;
    if !st.is_stable() {
        return Err(Error::NoSteadyState { max_re_eig: st.max_re_eig });
    }
    let n = closed_form_nbar(
        rates.coupling,
        2.0 * rates.cavity_decay,
        2.0 * rates.recoil,
        rates.trap_frequency,
        detuning,
    )?;
    debug_assert!(n >= -1e-9, "negative occupation {n} at a stable point");
    Ok(CoolingResult {
        nbar: Some(n),
        detuning,
        stable: true,
        regime: Regime::Exact,
        max_re_eig: Some(st.max_re_eig),
    })
}

pub fn nbar_adiabatic(rates: &SystemRates, detuning: f64) -> Result<CoolingResult> {
    if !(detuning > 0.0) {
        return Err(domain("adiabatic n needs a positive (red) detuning"));
    }
    let n = adiabatic_nbar(
        rates.coupling,
        2.0 * rates.cavity_decay,
        2.0 * rates.recoil,
        rates.trap_frequency,
        detuning,
    )?;
    let st = stability(&build_system(rates, detuning))?;
    Ok(CoolingResult {
        nbar: Some(n),
        detuning,
        stable: st.is_stable(),
        regime: Regime::Adiabatic,
        max_re_eig: Some(st.max_re_eig),
    })
}

/// Sideband-resolved estimate at δ = ω̃_t.
pub fn nbar_sideband(rates: &SystemRates) -> Result<CoolingResult> {
    let linewidth = 2.0 * rates.cavity_decay;
    let heating = 2.0 * rates.recoil;
    if rates.coupling == 0.0 {
        return Err(domain("cooperativity is zero"));
    }
    let c = rates.coupling * rates.coupling / (heating * linewidth);
    let n = sideband_limit(linewidth, rates.trap_frequency, c)?;
    Ok(CoolingResult {
        nbar: Some(n),
        detuning: rates.trap_frequency,
        stable: true,
        regime: Regime::Sideband,
        max_re_eig: None,
    })
}

/// Default scan: 2000 log-spaced points over [0.05ω̃_t, 5·max(ω̃_t, κ_tot)].
pub fn default_detuning_grid(rates: &SystemRates) -> Grid {
    let w = rates.trap_frequency;
    Grid {
        min: 0.05 * w,
        max: 5.0 * w.max(rates.cavity_decay),
        points: 2000,
        spacing: Spacing::Log,
    }
}

/// Detuning scan with optional bounds; missing pieces fall back to
/// [`default_detuning_grid`] for the rates at hand.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DetuningScan {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
}

impl DetuningScan {
    pub fn resolve(&self, rates: &SystemRates) -> Result<Grid> {
        let d = default_detuning_grid(rates);
        let min = self.min.unwrap_or(d.min);
        let max = self.max.unwrap_or(d.max);
        let spacing = if min > 0.0 { Spacing::Log } else { Spacing::Linear };
        Grid::new(min, max, self.points.unwrap_or(d.points), spacing)
    }
}

fn stable_nbar(rates: &SystemRates, d: f64) -> Option<(f64, f64)> {
    match nbar_exact(rates, d) {
        Ok(CoolingResult { nbar: Some(n), max_re_eig: Some(e), .. }) if n.is_finite() => Some((n, e)),
        _ => None,
    }
}

const GOLDEN_ITERATIONS: usize = 80;

/// Minimum of the exact n̄ over the stable points of `grid`, refined by
/// golden-section search between the neighbors of the best grid point.
pub fn optimize_detuning(rates: &SystemRates, grid: &Grid, exec: Execution) -> Result<CoolingResult> {
    let ds = grid.values()?;
    let vals = exec::map(exec, &ds, |&d| stable_nbar(rates, d));

    let mut best: Option<(usize, f64, f64)> = None;
    for (i, v) in vals.iter().enumerate() {
        if let Some((n, e)) = *v {
            if best.is_none_or(|(_, bn, _)| n < bn) {
                best = Some((i, n, e));
            }
        }
    }
    let (i, mut n_best, mut e_best) =
        best.ok_or(Error::NoStableDetuning { min: grid.min, max: grid.max })?;
    let mut d_best = ds[i];

    let lo = ds[i.saturating_sub(1)];
    let hi = ds[(i + 1).min(ds.len() - 1)];
    if hi > lo {
        let f = |d: f64| stable_nbar(rates, d);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut c = b - r * (b - a);
        let mut e = a + r * (b - a);
        let mut fc = f(c);
        let mut fe = f(e);
        let key = |v: Option<(f64, f64)>| v.map_or(f64::INFINITY, |(n, _)| n);
        for _ in 0..GOLDEN_ITERATIONS {
            if key(fc) <= key(fe) {
                b = e;
                e = c;
                fe = fc;
                c = b - r * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = e;
                fc = fe;
                e = a + r * (b - a);
                fe = f(e);
            }
            if b - a <= 1e-13 * b.abs().max(a.abs()) {
                break;
            }
        }
        for (d, v) in [(c, fc), (e, fe)] {
            if let Some((n, ee)) = v {
                if n < n_best || (n == n_best && d < d_best) {
                    n_best = n;
                    e_best = ee;
                    d_best = d;
                }
            }
        }
    }

    Ok(CoolingResult {
        nbar: Some(n_best),
        detuning: d_best,
        stable: true,
        regime: Regime::Exact,
        max_re_eig: Some(e_best),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::steady_state;
    use approx::assert_relative_eq;

    fn rates(g: f64, k: f64, gamma: f64) -> SystemRates {
        SystemRates { coupling: g, cavity_decay: k, recoil: gamma, trap_frequency: 1.0 }
    }

    #[test]
    fn sideband_formula() {
        assert_relative_eq!(sideband_limit(0.2, 1.0, 10.0).unwrap(), 0.0275, max_relative = 1e-14);
        assert!(sideband_limit(1e-6, 1.0, 1e12).unwrap() < 1e-11);
        assert!(sideband_limit(0.2, 1.0, 0.0).is_err());
    }

    #[test]
    fn adiabatic_without_heating_at_resonance() {
        let k = 0.3;
        let n = adiabatic_nbar(0.02, k, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(n, (k / 4.0f64).powi(2), max_relative = 1e-14);
        assert!(adiabatic_nbar(0.0, k, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn exact_matches_lyapunov() {
        for &(g, k, gamma, d) in &[(0.07, 0.3, 0.03, 1.0), (0.1, 3.0, 0.0, 2.0), (0.4, 1.5, 0.01, 1.3)] {
            let p = rates(g, k / 2.0, gamma / 2.0);
            let lyap = steady_state(&build_system(&p, d)).unwrap().phonon_number();
            let closed = nbar_exact(&p, d).unwrap().nbar.unwrap();
            assert_relative_eq!(lyap, closed, max_relative = 1e-8);
        }
    }

    #[test]
    fn exact_rejects_unstable_and_zero_detuning() {
        assert!(nbar_exact(&rates(0.5, 0.15, 0.0), -1.0).is_err());
        assert!(nbar_exact(&rates(0.05, 0.15, 0.0), 0.0).is_err());
        assert!(nbar_adiabatic(&rates(0.05, 0.15, 0.0), -1.0).is_err());
    }

    #[test]
    fn rate_scale_invariance() {
        let p = rates(0.07, 0.15, 0.015);
        let s = 7.3e5;
        let a = nbar_exact(&p, 1.1).unwrap().nbar.unwrap();
        let b = nbar_exact(&p.scaled(s), 1.1 * s).unwrap().nbar.unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn optimizer_is_certified_and_locally_minimal() {
        let p = rates(0.07, 0.15, 0.015);
        let grid = default_detuning_grid(&p);
        let r = optimize_detuning(&p, &grid, Execution::Sequential).unwrap();
        assert!(r.stable && r.max_re_eig.unwrap() < 0.0);
        let n = r.nbar.unwrap();
        for d in grid.values().unwrap() {
            if let Ok(c) = nbar_exact(&p, d) {
                assert!(c.nbar.unwrap() >= n);
            }
        }
        let par = optimize_detuning(&p, &grid, Execution::Parallel).unwrap();
        assert_eq!(r, par);
    }

    #[test]
    fn optimizer_reports_blue_window() {
        let p = rates(0.6, 0.5, 0.0);
        let grid = Grid::new(-3.0, -0.05, 200, Spacing::Linear).unwrap();
        let e = optimize_detuning(&p, &grid, Execution::Sequential).unwrap_err();
        assert!(matches!(e, Error::NoStableDetuning { .. }));
    }
}
