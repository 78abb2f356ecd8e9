//! Self-checks run by `levicav validate`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cooling::nbar_exact;
use crate::dynamics::{build_system, stability, steady_state, SystemRates};
use crate::exec::{self, Execution};
use crate::mie::{mie_coefficients, mie_coefficients_with_order, MieCoefficients, MieInput, TAIL_TOLERANCE};
use crate::params::{small_particle_limits, CavitySpec, OptomechParams, SphereSpec, TweezerSpec};

pub const MIE_GRID: [f64; 5] = [0.1, 0.5, 1.0, 3.0, 7.68];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckOutcome { name, passed, detail }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    /// Forces the Mie series to this many orders. Negative control only.
    pub truncation_cap: Option<usize>,
    pub grid_points: usize,
    pub seed: u64,
    pub small_radius: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { truncation_cap: None, grid_points: 1000, seed: 0x5eed, small_radius: 10e-9 }
    }
}

fn coefficients(x: f64, m: f64, cap: Option<usize>) -> crate::Result<MieCoefficients> {
    let input = MieInput::new(x, m)?;
    match cap {
        Some(n) => mie_coefficients_with_order(input, n),
        None => mie_coefficients(input),
    }
}

/// Random stable (rates, δ) points in units of ω̃_t: log-uniform κ ∈ [0.05, 10]
/// and g ∈ [0.01, 1], uniform Γ ∈ [0, 0.1] and δ ∈ (0, 3].
pub fn random_stable_grid(n: usize, seed: u64) -> Vec<(SystemRates, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let k = 10f64.powf(rng.gen_range(0.05f64.log10()..=1.0));
        let g = 10f64.powf(rng.gen_range(-2.0..=0.0));
        let gamma = rng.gen_range(0.0..=0.1);
        let d = 3.0 * (1.0 - rng.gen::<f64>());
        let rates = SystemRates { coupling: g, cavity_decay: k, recoil: gamma, trap_frequency: 1.0 };
        if stability(&build_system(&rates, d)).is_ok_and(|s| s.is_stable()) {
            out.push((rates, d));
        }
    }
    out
}

pub fn run_validation(
    sphere: &SphereSpec,
    cavity: &CavitySpec,
    tweezer: &TweezerSpec,
    opts: &ValidationOptions,
    exec: Execution,
) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.extend(mie_checks(sphere.epsilon_r.sqrt(), opts.truncation_cap));
    out.extend(small_particle_checks(&sphere.with_radius(opts.small_radius), cavity, tweezer));
    out.push(structural_check(sphere, cavity, tweezer));
    out.extend(moment_checks(opts, exec));
    out
}

fn mie_checks(m: f64, cap: Option<usize>) -> Vec<CheckOutcome> {
    let mut unit_worst = 0.0f64;
    let mut opt_worst = 0.0f64;
    let mut trunc_worst = 0.0f64;
    for &x in &MIE_GRID {
        let c = match coefficients(x, m, cap) {
            Ok(c) => c,
            Err(e) => {
                return vec![CheckOutcome::new("mie-unitarity", false, format!("x = {x}: {e}"))];
            }
        };
        for v in c.a().iter().chain(c.b()) {
            unit_worst = unit_worst.max((v.re - v.norm_sqr()).abs() / v.norm().max(1.0));
        }
        let (ext, sca) = (c.extinction_sum(), c.scattering_sum());
        opt_worst = opt_worst.max((ext - sca).abs() / sca.abs());
        trunc_worst = trunc_worst.max(c.tail_bound());
    }
    vec![
        CheckOutcome::new("mie-unitarity", unit_worst <= 1e-10, format!("max |Re a - |a|^2| = {unit_worst:.2e}")),
        CheckOutcome::new("optical-theorem", opt_worst <= 1e-8, format!("max rel. diff = {opt_worst:.2e}")),
        CheckOutcome::new(
            "mie-truncation",
            trunc_worst <= TAIL_TOLERANCE,
            format!("max relative tail = {trunc_worst:.2e}"),
        ),
    ]
}

fn small_particle_checks(sphere: &SphereSpec, cavity: &CavitySpec, tweezer: &TweezerSpec) -> Vec<CheckOutcome> {
    let (p, lim) = match (
        OptomechParams::compute(sphere, cavity, tweezer),
        small_particle_limits(sphere, cavity, tweezer),
    ) {
        (Ok(p), Ok(l)) => (p, l),
        (Err(e), _) | (_, Err(e)) => {
            return vec![CheckOutcome::new("small-particle", false, e.to_string())];
        }
    };
    let r = sphere.radius;
    let ratio = |name, a: f64, b: f64| {
        let q = a / b;
        CheckOutcome::new(name, (q - 1.0).abs() < 0.02, format!("ratio {q:.6} at R = {r:.3e} m"))
    };
    vec![
        ratio("small-particle-kappa", p.cavity_decay_scatter, lim.cavity_decay),
        ratio("small-particle-gamma", p.recoil_cavity, lim.recoil_cavity),
        ratio("small-particle-coupling", p.coupling, lim.coupling + lim.coupling_correction),
    ]
}

fn structural_check(sphere: &SphereSpec, cavity: &CavitySpec, tweezer: &TweezerSpec) -> CheckOutcome {
    let mut worst = 0.0f64;
    for &r in &[10e-9, 100e-9, 370e-9, 1e-6, 2e-6] {
        match OptomechParams::compute(&sphere.with_radius(r), cavity, tweezer) {
            Ok(p) if p.cavity_decay_scatter > 0.0 => {
                let want = 2.0 * p.photon_number * (p.zero_point * cavity.wavenumber()).powi(2);
                worst = worst.max((p.recoil_cavity / p.cavity_decay_scatter / want - 1.0).abs());
            }
            Ok(_) => {}
            Err(e) => return CheckOutcome::new("recoil-decay-identity", false, e.to_string()),
        }
    }
    CheckOutcome::new("recoil-decay-identity", worst < 1e-12, format!("max rel. dev = {worst:.2e}"))
}

fn moment_checks(opts: &ValidationOptions, exec: Execution) -> Vec<CheckOutcome> {
    let grid = random_stable_grid(opts.grid_points, opts.seed);
    let res = exec::map(exec, &grid, |(rates, d)| {
        let ss = steady_state(&build_system(rates, *d)).ok()?;
        let closed = nbar_exact(rates, *d).ok()?.nbar?;
        let lyap = ss.phonon_number();
        let nu = ss.symplectic_eigenvalues().ok()?;
        Some(((lyap - closed).abs() / closed.max(1e-6), nu[0]))
    });
    let failed = res.iter().filter(|r| r.is_none()).count();
    let worst = res.iter().flatten().map(|r| r.0).fold(0.0, f64::max);
    let floor = res.iter().flatten().map(|r| r.1).fold(f64::INFINITY, f64::min);
    vec![
        CheckOutcome::new(
            "lyapunov-closed-form",
            failed == 0 && worst < 1e-6,
            format!("{} points, worst rel. diff = {worst:.2e}, failures = {failed}", grid.len()),
        ),
        CheckOutcome::new(
            "heisenberg",
            failed == 0 && floor >= 0.5 - 1e-9,
            format!("min symplectic eigenvalue = {floor:.12}"),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_deterministic_and_stable() {
        let a = random_stable_grid(50, 7);
        assert_eq!(a, random_stable_grid(50, 7));
        for (r, d) in &a {
            assert!(*d > 0.0 && *d <= 3.0);
            assert!((0.05..=10.0).contains(&r.cavity_decay));
        }
    }

    #[test]
    fn truncation_cap_is_detected() {
        let m = 2.1f64.sqrt();
        let ok = mie_checks(m, None);
        assert!(ok.iter().all(|c| c.passed), "{ok:?}");
        let bad = mie_checks(m, Some(2));
        assert!(bad.iter().any(|c| !c.passed));
    }
}
