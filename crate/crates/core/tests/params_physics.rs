use std::f64::consts::{FRAC_PI_4, PI};

use proptest::prelude::*;

use levicav::grid::{Grid, Spacing};
use levicav::params::{small_particle_limits, CavitySpec, OptomechParams, SphereSpec, TweezerSpec};
use levicav::sweep::parameter_sweep;
use levicav::Execution;

fn compute(r: f64, cavity: &CavitySpec) -> OptomechParams {
    OptomechParams::compute(&SphereSpec::fused_silica(r), cavity, &TweezerSpec::default()).unwrap()
}

fn slope(r0: f64, r1: f64, f: impl Fn(f64) -> f64) -> f64 {
    (f(r1) / f(r0)).ln() / (r1 / r0).ln()
}

#[test]
fn small_particle_convergence() {
    let c = CavitySpec::default();
    let s = SphereSpec::fused_silica(10e-9);
    let t = TweezerSpec::default();
    let p = compute(10e-9, &c);
    let l = small_particle_limits(&s, &c, &t).unwrap();
    assert!((p.cavity_decay_scatter / l.cavity_decay - 1.0).abs() < 0.02);
    assert!((p.coupling / (l.coupling + l.coupling_correction) - 1.0).abs() < 0.02);
    // the two printed recoil formulas differ by exactly a factor two in the dipole limit
    assert!((p.recoil_cavity / l.recoil_cavity - 0.5).abs() < 1e-3);
}

#[test]
fn weak_scatterer_limits() {
    let c = CavitySpec::default();
    let t = TweezerSpec::default();
    let gaps = |eps: f64| {
        let s = SphereSpec { radius: 10e-9, epsilon_r: eps, density: 2201.0 };
        let p = OptomechParams::compute(&s, &c, &t).unwrap();
        let l = small_particle_limits(&s, &c, &t).unwrap();
        (
            (p.cavity_decay_scatter / l.cavity_decay - 1.0).abs(),
            (p.coupling / (l.coupling + l.coupling_correction) - 1.0).abs(),
        )
    };
    let (k_weak, g_weak) = gaps(1.0001);
    let (_, g_silica) = gaps(2.1);
    assert!(g_weak < g_silica);
    // the residual O(x²) size correction of κ does not shrink with contrast
    assert!(k_weak < 0.02);
}

#[test]
fn coupling_changes_sign_near_400nm() {
    let c = CavitySpec::default();
    assert!(compute(300e-9, &c).coupling < 0.0);
    assert!(compute(450e-9, &c).coupling > 0.0);
}

#[test]
fn recoil_rises_then_falls() {
    let c = CavitySpec::default();
    let s_small = slope(10e-9, 20e-9, |r| compute(r, &c).recoil);
    assert!((s_small - 3.0).abs() < 0.05, "{s_small}");
    let s_large = slope(700e-9, 1.4e-6, |r| compute(r, &c).recoil);
    assert!(s_large < 0.0, "{s_large}");
}

#[test]
fn cooperativity_asymptotic_slopes() {
    let c = CavitySpec::default();
    let coop = |r: f64| compute(r, &c).cooperativity().unwrap();
    let small = slope(5e-9, 50e-9, coop);
    assert!((small + 6.0).abs() < 0.3, "{small}");
    // R ≫ λ: least-squares slope over the decade [10, 100] µm
    let radii = Grid::new(10e-6, 100e-6, 400, Spacing::Log).unwrap().values().unwrap();
    let (xs, ys): (Vec<f64>, Vec<f64>) = radii.iter().map(|&r| (r.ln(), coop(r).ln())).unzip();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let large = sxy / sxx;
    assert!((large + 2.0).abs() < 0.3, "{large}");
}

#[test]
fn all_outputs_finite_from_1nm_to_5um() {
    let radii = Grid::new(1e-9, 5e-6, 120, Spacing::Log).unwrap().values().unwrap();
    let s = SphereSpec::fused_silica(1e-7);
    let rows = parameter_sweep(&s, &CavitySpec::default(), &TweezerSpec::default(), &radii, Execution::Parallel).unwrap();
    for p in rows {
        for v in [p.coupling, p.cavity_decay_total, p.cavity_decay_scatter, p.recoil, p.zero_point] {
            assert!(v.is_finite());
        }
        assert!(p.cavity_decay_scatter >= 0.0 && p.recoil >= 0.0);
        assert!(p.cavity_decay_total >= CavitySpec::default().intrinsic_decay());
    }
}

#[test]
fn tweezer_recoil_switch() {
    let s = SphereSpec::fused_silica(100e-9);
    let c = CavitySpec::default();
    let on = TweezerSpec { include_recoil: true, ..Default::default() };
    let p_off = OptomechParams::compute(&s, &c, &TweezerSpec::default()).unwrap();
    let p_on = OptomechParams::compute(&s, &c, &on).unwrap();
    assert_eq!(p_off.recoil_tweezer, 0.0);
    assert!(p_on.recoil_tweezer > 0.0);
    assert_eq!(p_on.recoil, p_on.recoil_cavity + p_on.recoil_tweezer);
    let l = small_particle_limits(&s, &c, &on).unwrap();
    assert_eq!(l.recoil_tweezer, p_on.recoil_tweezer);
}

#[test]
fn self_consistent_photon_number() {
    let c = CavitySpec { photon_number_override: None, ..Default::default() };
    let p = compute(100e-9, &c);
    let want = 2.0 * c.intrinsic_decay() * c.drive_power
        / (levicav::params::HBAR
            * c.frequency()
            * (p.cavity_decay_total.powi(2) + p.trap_frequency.powi(2)));
    assert!((p.photon_number / want - 1.0).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recoil_over_decay_identity(r in 5e-9f64..3e-6, phi in 0.05f64..1.5) {
        let c = CavitySpec { phase: phi, ..Default::default() };
        let p = compute(r, &c);
        let want = 2.0 * p.photon_number * (p.zero_point * c.wavenumber()).powi(2);
        prop_assert!((p.recoil_cavity / p.cavity_decay_scatter / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coupling_odd_about_half_pi(r in 20e-9f64..2e-6, eps in 0.01f64..0.7) {
        let up = compute(r, &CavitySpec { phase: PI / 2.0 + eps, ..Default::default() }).coupling;
        let down = compute(r, &CavitySpec { phase: PI / 2.0 - eps, ..Default::default() }).coupling;
        prop_assert!((up + down).abs() <= 1e-10 * up.abs().max(down.abs()).max(1e-300));
    }

    #[test]
    fn quarter_phase_decay_is_the_phase_average(r in 20e-9f64..2e-6, eps in 0.0f64..0.7) {
        // cos 2φ vanishes at π/4 and flips sign under φ → π/2 − φ
        let k = |phi: f64| compute(r, &CavitySpec { phase: phi, ..Default::default() }).cavity_decay_scatter;
        let mid = 0.5 * (k(FRAC_PI_4 + eps) + k(FRAC_PI_4 - eps));
        prop_assert!((k(FRAC_PI_4) - mid).abs() <= 1e-12 * mid);
    }
}
