//! Gaussian second moments of the linearized cavity + center-of-mass system.
//!
//! Quadrature order is (x_c, p_c, x_m, p_m) with vacuum variance ½. The master
//! equation is
//!
//! ```text
//! H = δ a†a + ω b†b + g (a + a†)(b + b†)
//! L = κ (2aρa† − {a†a, ρ}) + Γ (2XρX − {X², ρ}),   X = b + b†
//! ```
//!
//! which gives dσ/dt = Aσ + σAᵀ + D with
//!
//! ```text
//!     | −κ   δ   0   0 |
//! A = | −δ  −κ  −2g  0 |      D = diag(κ, κ, 0, 4Γ)
//!     |  0   0   0   ω |
//!     | −2g  0  −ω   0 |
//! ```

use nalgebra::{Matrix4, SMatrix, SVector, Schur, Vector4};

use crate::error::{Error, Result};

type Matrix16 = SMatrix<f64, 16, 16>;
type Vector16 = SVector<f64, 16>;
type Matrix8 = SMatrix<f64, 8, 8>;

/// Relative margin (times the spectral scale) below which eigenvalues count as stable.
pub const STABILITY_MARGIN: f64 = 1e-9;

/// Rates entering the master equation, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemRates {
    pub coupling: f64,
    /// Total cavity amplitude decay κ_tot.
    pub cavity_decay: f64,
    pub recoil: f64,
    pub trap_frequency: f64,
}

impl SystemRates {
    pub fn scaled(self, s: f64) -> Self {
        SystemRates {
            coupling: s * self.coupling,
            cavity_decay: s * self.cavity_decay,
            recoil: s * self.recoil,
            trap_frequency: s * self.trap_frequency,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSystem {
    pub drift: Matrix4<f64>,
    pub diffusion: Matrix4<f64>,
    pub rates: SystemRates,
    pub detuning: f64,
}

pub fn build_system(rates: &SystemRates, detuning: f64) -> MomentSystem {
    let SystemRates { coupling: g, cavity_decay: k, recoil, trap_frequency: w } = *rates;
    let d = detuning;
    #[rustfmt::skip]
    let drift = Matrix4::new(
        -k,         d,    0.0, 0.0,
        -d,        -k, -2.0 * g, 0.0,
        0.0,      0.0,    0.0,   w,
        -2.0 * g, 0.0,     -w, 0.0,
    );
    let diffusion = Matrix4::from_diagonal(&Vector4::new(k, k, 0.0, 4.0 * recoil));
    MomentSystem { drift, diffusion, rates: *rates, detuning }
}

impl MomentSystem {
    /// Scale used for tolerances and for rescaling before linear solves.
    pub fn spectral_scale(&self) -> f64 {
        self.drift.norm().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Marginal,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    pub verdict: Verdict,
    pub max_re_eig: f64,
    pub margin: f64,
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        self.verdict == Verdict::Stable
    }
}

pub fn stability(sys: &MomentSystem) -> Result<Stability> {
    let scale = sys.spectral_scale();
    let schur = Schur::try_new(sys.drift / scale, f64::EPSILON, 10_000).ok_or(Error::Eigensolver)?;
    let max_re = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if !max_re.is_finite() {
        return Err(Error::Eigensolver);
    }
    let margin = STABILITY_MARGIN * scale;
    let max_re_eig = max_re * scale;
    let verdict = if max_re_eig < -margin {
        Verdict::Stable
    } else if max_re_eig <= margin {
        Verdict::Marginal
    } else {
        Verdict::Unstable
    };
    Ok(Stability { verdict, max_re_eig, margin })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceState {
    pub covariance: Matrix4<f64>,
    pub mean: Vector4<f64>,
}

impl CovarianceState {
    pub fn vacuum() -> Self {
        CovarianceState { covariance: Matrix4::identity() * 0.5, mean: Vector4::zeros() }
    }

    /// Thermal mechanics at occupation `n`, cavity in vacuum.
    pub fn thermal(n: f64) -> Self {
        let v = n + 0.5;
        CovarianceState {
            covariance: Matrix4::from_diagonal(&Vector4::new(0.5, 0.5, v, v)),
            mean: Vector4::zeros(),
        }
    }

    /// n̄ = (σ_xx + σ_pp − 1)/2 for the mechanical mode.
    pub fn phonon_number(&self) -> f64 {
        0.5 * (self.covariance[(2, 2)] + self.covariance[(3, 3)] - 1.0)
    }

    pub fn photon_number(&self) -> f64 {
        0.5 * (self.covariance[(0, 0)] + self.covariance[(1, 1)] - 1.0)
    }

    /// The two symplectic eigenvalues, ascending: moduli of the eigenvalues of iΩσ.
    pub fn symplectic_eigenvalues(&self) -> Result<[f64; 2]> {
        #[rustfmt::skip]
        let omega = Matrix4::new(
            0.0, 1.0, 0.0, 0.0,
            -1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, -1.0, 0.0,
        );
        let m = omega * self.covariance;
        let scale = m.norm().max(f64::MIN_POSITIVE);
        let schur = Schur::try_new(m / scale, f64::EPSILON, 10_000).ok_or(Error::Eigensolver)?;
        let mut mags: Vec<f64> = schur
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm() * scale)
            .collect();
        mags.sort_by(f64::total_cmp);
        // eigenvalues come in ±iν pairs
        Ok([0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3])])
    }
}

fn vec16(m: &Matrix4<f64>) -> Vector16 {
    Vector16::from_iterator(m.iter().copied())
}

fn mat4(v: &Vector16) -> Matrix4<f64> {
    Matrix4::from_iterator(v.iter().copied())
}

/// Solves Aσ + σAᵀ + D = 0 through the Kronecker sum, with one step of
/// iterative refinement. Requires the operator to be nonsingular.
pub fn solve_lyapunov(drift: &Matrix4<f64>, diffusion: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let scale = drift.norm().max(f64::MIN_POSITIVE);
    let a = drift / scale;
    let d = diffusion / scale;

    let mut op = Matrix16::zeros();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                // column-major vec: (I ⊗ A) + (A ⊗ I)
                op[(4 * j + i, 4 * j + k)] += a[(i, k)];
                op[(4 * i + k, 4 * j + k)] += a[(i, j)];
            }
        }
    }
    let rhs = -vec16(&d);
    let lu = op.lu();
    let mut x = lu.solve(&rhs).ok_or(Error::SingularLyapunov)?;
    let resid = rhs - op * x;
    if let Some(dx) = lu.solve(&resid) {
        x += dx;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularLyapunov);
    }
    let sigma = mat4(&x);
    Ok(0.5 * (sigma + sigma.transpose()))
}

pub fn steady_state(sys: &MomentSystem) -> Result<CovarianceState> {
    let st = stability(sys)?;
    if !st.is_stable() {
        return Err(Error::NoSteadyState { max_re_eig: st.max_re_eig });
    }
    let covariance = solve_lyapunov(&sys.drift, &sys.diffusion)?;
    Ok(CovarianceState { covariance, mean: Vector4::zeros() })
}

/// Lyapunov residual ‖Aσ + σAᵀ + D‖ (Frobenius).
pub fn lyapunov_residual(sys: &MomentSystem, sigma: &Matrix4<f64>) -> f64 {
    (sys.drift * sigma + sigma * sys.drift.transpose() + sys.diffusion).norm()
}

/// Propagator e^{At} and accumulated noise W(t) = ∫₀ᵗ e^{As} D e^{Aᵀs} ds.
///
/// Van Loan's block exponential on a short step, then doubling
/// (Φ₂ₕ = Φₕ², W₂ₕ = Wₕ + ΦₕWₕΦₕᵀ). The block contains e^{−Ah}, so keeping
/// ‖A‖h small avoids cancellation when decaying and growing modes coexist.
pub fn propagator(drift: &Matrix4<f64>, diffusion: &Matrix4<f64>, t: f64) -> (Matrix4<f64>, Matrix4<f64>) {
    let size = drift.norm() * t;
    let doublings = if size > 0.5 { (size / 0.5).log2().ceil() as i32 } else { 0 };
    let h = t / 2f64.powi(doublings);

    let mut block = Matrix8::zeros();
    block.fixed_view_mut::<4, 4>(0, 0).copy_from(&(-drift * h));
    block.fixed_view_mut::<4, 4>(0, 4).copy_from(&(diffusion * h));
    block.fixed_view_mut::<4, 4>(4, 4).copy_from(&(drift.transpose() * h));
    let e = block.exp();
    let f3 = e.fixed_view::<4, 4>(4, 4).into_owned();
    let mut phi = f3.transpose();
    let mut noise = f3.transpose() * e.fixed_view::<4, 4>(0, 4);
    noise = 0.5 * (noise + noise.transpose());

    for _ in 0..doublings {
        noise += phi * noise * phi.transpose();
        phi *= phi;
    }
    (phi, 0.5 * (noise + noise.transpose()))
}

/// Propagates the state for a time `t` ≥ 0.
///
/// Stable systems use σ(t) = σ_ss + e^{At}(σ₀ − σ_ss)e^{Aᵀt}; anything else
/// goes through [`propagator`].
pub fn evolve(sys: &MomentSystem, state: &CovarianceState, t: f64) -> Result<CovarianceState> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::StepFailure(format!("time must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(*state);
    }
    let (mean, covariance) = if stability(sys)?.is_stable() {
        let phi = (sys.drift * t).exp();
        let ss = solve_lyapunov(&sys.drift, &sys.diffusion)?;
        (phi * state.mean, ss + phi * (state.covariance - ss) * phi.transpose())
    } else {
        let (phi, noise) = propagator(&sys.drift, &sys.diffusion, t);
        (phi * state.mean, phi * state.covariance * phi.transpose() + noise)
    };
    if covariance.iter().chain(mean.iter()).any(|v| !v.is_finite()) {
        return Err(Error::StepFailure("non-finite covariance".into()));
    }
    Ok(CovarianceState { covariance, mean })
}
