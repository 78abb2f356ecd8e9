//! Physical setup (sphere, cavity, tweezer) and the optomechanical parameters
//! derived from it through the Mie sums.
//!
//! Everything is SI with ħ explicit. Rates are angular (rad/s).

use std::f64::consts::{FRAC_PI_4, PI};

use crate::dynamics::SystemRates;
use crate::error::{domain, Error, Result};
use crate::mie::{mie_coefficients, mie_sums, MieInput, MieSums};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const HBAR: f64 = 1.054_571_817e-34;

pub fn epsilon_c(epsilon_r: f64) -> Result<f64> {
    if !(epsilon_r > 1.0) || !epsilon_r.is_finite() {
        return Err(domain(format!("eps_r must be finite and > 1, got {epsilon_r}")));
    }
    Ok(3.0 * (epsilon_r - 1.0) / (epsilon_r + 2.0))
}

/// √(ħ / 2Mω).
pub fn zero_point_motion(mass: f64, trap_frequency: f64) -> Result<f64> {
    if !(mass > 0.0) || !(trap_frequency > 0.0) {
        return Err(domain("mass and trap frequency must be positive"));
    }
    Ok((HBAR / (2.0 * mass * trap_frequency)).sqrt())
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSpec {
    pub radius: f64,
    pub epsilon_r: f64,
    pub density: f64,
}

impl SphereSpec {
    pub fn new(radius: f64, epsilon_r: f64, density: f64) -> Result<Self> {
        let s = SphereSpec { radius, epsilon_r, density };
        s.validate()?;
        Ok(s)
    }

    /// Fused silica: ε_r = 2.1, ρ = 2201 kg/m³.
    pub fn fused_silica(radius: f64) -> Self {
        SphereSpec { radius, epsilon_r: 2.1, density: 2201.0 }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("radius", self.radius)?;
        require_positive("density", self.density)?;
        epsilon_c(self.epsilon_r).map(|_| ())
    }

    pub fn with_radius(self, radius: f64) -> Self {
        SphereSpec { radius, ..self }
    }

    pub fn volume(&self) -> f64 {
        4.0 * PI * self.radius.powi(3) / 3.0
    }

    pub fn mass(&self) -> f64 {
        self.density * self.volume()
    }

    pub fn epsilon_c(&self) -> f64 {
        3.0 * (self.epsilon_r - 1.0) / (self.epsilon_r + 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    pub length: f64,
    pub finesse: f64,
    pub waist: f64,
    pub wavelength: f64,
    pub drive_power: f64,
    /// Position of the sphere along the standing wave, k₀z.
    pub phase: f64,
    pub photon_number_override: Option<f64>,
}

impl Default for CavitySpec {
    fn default() -> Self {
        CavitySpec {
            length: 4e-3,
            finesse: 5e5,
            waist: 26e-6,
            wavelength: 1064e-9,
            drive_power: 1e-4,
            phase: FRAC_PI_4,
            photon_number_override: Some(3.7e8),
        }
    }
}

impl CavitySpec {
    pub fn validate(&self) -> Result<()> {
        require_positive("cavity length", self.length)?;
        require_positive("finesse", self.finesse)?;
        require_positive("cavity waist", self.waist)?;
        require_positive("wavelength", self.wavelength)?;
        if !(self.drive_power >= 0.0) || !self.drive_power.is_finite() {
            return Err(domain(format!("drive power must be >= 0, got {}", self.drive_power)));
        }
        if !self.phase.is_finite() {
            return Err(domain("phase must be finite"));
        }
        if let Some(n) = self.photon_number_override {
            if !(n >= 0.0) || !n.is_finite() {
                return Err(domain(format!("photon number must be >= 0, got {n}")));
            }
        }
        Ok(())
    }

    /// V_c = LπW₀²/4.
    pub fn mode_volume(&self) -> f64 {
        self.length * PI * self.waist * self.waist / 4.0
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn frequency(&self) -> f64 {
        SPEED_OF_LIGHT * self.wavenumber()
    }

    /// κ₀ = cπ/(2FL).
    pub fn intrinsic_decay(&self) -> f64 {
        SPEED_OF_LIGHT * PI / (2.0 * self.finesse * self.length)
    }
}

/// Mean intracavity photon number |α|² for a given total linewidth and detuning.
pub fn photon_amplitude(cavity: &CavitySpec, kappa_tot: f64, delta: f64) -> f64 {
    if let Some(n) = cavity.photon_number_override {
        return n;
    }
    2.0 * cavity.intrinsic_decay() * cavity.drive_power
        / (HBAR * cavity.frequency() * (kappa_tot * kappa_tot + delta * delta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TweezerSpec {
    pub power: f64,
    pub waist: f64,
    pub wavelength: f64,
    pub trap_frequency_override: Option<f64>,
    /// Add the tweezer photon-recoil term to Γ.
    pub include_recoil: bool,
}

impl Default for TweezerSpec {
    fn default() -> Self {
        TweezerSpec {
            power: 0.47,
            waist: 1e-6,
            wavelength: 1064e-9,
            trap_frequency_override: Some(2.0 * PI * 136e3),
            include_recoil: false,
        }
    }
}

impl TweezerSpec {
    pub fn validate(&self) -> Result<()> {
        require_positive("tweezer power", self.power)?;
        require_positive("tweezer waist", self.waist)?;
        require_positive("tweezer wavelength", self.wavelength)?;
        if let Some(w) = self.trap_frequency_override {
            require_positive("trap frequency", w)?;
        }
        Ok(())
    }

    /// I = P_t/(πW_t²).
    pub fn intensity(&self) -> f64 {
        self.power / (PI * self.waist * self.waist)
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn laser_frequency(&self) -> f64 {
        SPEED_OF_LIGHT * self.wavenumber()
    }

    /// ω_t⁰ = √(4ε_c I/(ρcW_t²)).
    pub fn small_particle_trap_frequency(&self, sphere: &SphereSpec) -> f64 {
        (4.0 * sphere.epsilon_c() * self.intensity()
            / (sphere.density * SPEED_OF_LIGHT * self.waist * self.waist))
            .sqrt()
    }

    pub fn trap_frequency(&self, sphere: &SphereSpec) -> f64 {
        self.trap_frequency_override
            .unwrap_or_else(|| self.small_particle_trap_frequency(sphere))
    }

    /// Photon-recoil heating from the tweezer beam (dipole approximation).
    pub fn recoil(&self, sphere: &SphereSpec, trap_frequency: f64) -> f64 {
        let ec = sphere.epsilon_c();
        ec * ec * self.wavenumber().powi(6) * sphere.volume()
            / (6.0 * PI * sphere.density * trap_frequency)
            * self.power
            / (self.laser_frequency() * PI * self.waist * self.waist)
    }
}

fn validate_all(sphere: &SphereSpec, cavity: &CavitySpec, tweezer: &TweezerSpec) -> Result<()> {
    sphere.validate()?;
    cavity.validate()?;
    tweezer.validate()
}

/// S_plus and S_alt at the cavity wavelength and sphere phase.
pub fn sphere_sums(sphere: &SphereSpec, cavity: &CavitySpec) -> Result<MieSums> {
    let x = cavity.wavenumber() * sphere.radius;
    let input = MieInput::new(x, sphere.epsilon_r.sqrt())?;
    Ok(mie_sums(&mie_coefficients(input)?, cavity.phase))
}

fn scatter_decay_from(sums: &MieSums, cavity: &CavitySpec) -> f64 {
    let k0 = cavity.wavenumber();
    SPEED_OF_LIGHT * PI / (2.0 * k0 * k0 * cavity.mode_volume()) * sums.plus.re
}

/// Returns (κ, κ_tot): the scattering-induced decay and κ₀ + κ.
pub fn cavity_decay(sphere: &SphereSpec, cavity: &CavitySpec) -> Result<(f64, f64)> {
    sphere.validate()?;
    cavity.validate()?;
    let kappa = scatter_decay_from(&sphere_sums(sphere, cavity)?, cavity);
    Ok((kappa, cavity.intrinsic_decay() + kappa))
}

pub fn coupling_g(sphere: &SphereSpec, cavity: &CavitySpec, tweezer: &TweezerSpec) -> Result<f64> {
    Ok(OptomechParams::compute(sphere, cavity, tweezer)?.coupling)
}

pub fn recoil_heating(sphere: &SphereSpec, cavity: &CavitySpec, tweezer: &TweezerSpec) -> Result<f64> {
    Ok(OptomechParams::compute(sphere, cavity, tweezer)?.recoil)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptomechParams {
    pub size_parameter: f64,
    /// g̃, signed.
    pub coupling: f64,
    pub cavity_decay_total: f64,
    pub cavity_decay_scatter: f64,
    /// Γ = Γ^cav + Γ^tw.
    pub recoil: f64,
    pub recoil_cavity: f64,
    /// Zero unless the tweezer recoil is switched on; dipole approximation.
    pub recoil_tweezer: f64,
    pub trap_frequency: f64,
    pub zero_point: f64,
    pub photon_number: f64,
    pub sums: MieSums,
}

impl OptomechParams {
    pub fn compute(sphere: &SphereSpec, cavity: &CavitySpec, tweezer: &TweezerSpec) -> Result<Self> {
        validate_all(sphere, cavity, tweezer)?;
        let sums = sphere_sums(sphere, cavity)?;

        let k0 = cavity.wavenumber();
        let vc = cavity.mode_volume();
        let trap = tweezer.trap_frequency(sphere);
        let x0 = zero_point_motion(sphere.mass(), trap)?;

        let kappa = scatter_decay_from(&sums, cavity);
        let kappa_tot = cavity.intrinsic_decay() + kappa;
        let n_ph = photon_amplitude(cavity, kappa_tot, trap);
        let alpha = n_ph.sqrt();

        let coupling = alpha * x0 * PI * SPEED_OF_LIGHT / (2.0 * k0 * vc)
            * (2.0 * cavity.phase).sin()
            * sums.alt.im;
        let recoil_cavity = x0 * x0 * SPEED_OF_LIGHT * n_ph * PI / vc * sums.plus.re;
        let recoil_tweezer = if tweezer.include_recoil {
            tweezer.recoil(sphere, trap)
        } else {
            0.0
        };

        Ok(OptomechParams {
            size_parameter: k0 * sphere.radius,
            coupling,
            cavity_decay_total: kappa_tot,
            cavity_decay_scatter: kappa,
            recoil: recoil_cavity + recoil_tweezer,
            recoil_cavity,
            recoil_tweezer,
            trap_frequency: trap,
            zero_point: x0,
            photon_number: n_ph,
            sums,
        })
    }

    /// C = g̃²/(Γκ) with κ the scattering-induced decay.
    pub fn cooperativity(&self) -> Result<f64> {
        cooperativity(self.coupling, self.recoil, self.cavity_decay_scatter)
    }

    pub fn rates(&self) -> SystemRates {
        SystemRates {
            coupling: self.coupling,
            cavity_decay: self.cavity_decay_total,
            recoil: self.recoil,
            trap_frequency: self.trap_frequency,
        }
    }
}

pub fn cooperativity(coupling: f64, recoil: f64, decay: f64) -> Result<f64> {
    let den = recoil * decay;
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::DegenerateDenominator("cooperativity"));
    }
    Ok(coupling * coupling / den)
}

/// Closed-form limits for spheres much smaller than the wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallParticleLimits {
    pub trap_frequency: f64,
    /// Enhanced coupling α·g⁰ (the bare g⁰ carries no α).
    pub coupling: f64,
    /// Size correction g_rn⁰ = −ε_c k₀²R² g⁰.
    pub coupling_correction: f64,
    /// Trap shift Δ^{M,0} = −ε_c k₀²R² ω_t⁰.
    pub trap_shift: f64,
    pub cavity_decay: f64,
    pub recoil_cavity: f64,
    pub recoil_tweezer: f64,
}

impl SmallParticleLimits {
    pub fn recoil(&self) -> f64 {
        self.recoil_cavity + self.recoil_tweezer
    }
}

pub fn small_particle_limits(
    sphere: &SphereSpec,
    cavity: &CavitySpec,
    tweezer: &TweezerSpec,
) -> Result<SmallParticleLimits> {
    validate_all(sphere, cavity, tweezer)?;
    let ec = sphere.epsilon_c();
    let k0 = cavity.wavenumber();
    let vc = cavity.mode_volume();
    let v = sphere.volume();
    let r2 = sphere.radius * sphere.radius;

    let w0 = tweezer.small_particle_trap_frequency(sphere);
    let trap = tweezer.trap_frequency(sphere);
    let x0 = zero_point_motion(sphere.mass(), trap)?;

    let kappa = ec * ec * k0.powi(4) * v * v * SPEED_OF_LIGHT / (24.0 * PI * vc);
    let n_ph = photon_amplitude(cavity, cavity.intrinsic_decay() + kappa, trap);
    let alpha = n_ph.sqrt();

    let omega0 = cavity.frequency();
    let g0 = -alpha * x0 * ec * omega0 * omega0 * v / (4.0 * SPEED_OF_LIGHT * vc);
    let shrink = -ec * k0 * k0 * r2;

    let prefactor = ec * ec * k0.powi(6) * v / (6.0 * PI * sphere.density * trap);
    let recoil_cavity = prefactor * HBAR * n_ph * SPEED_OF_LIGHT / (2.0 * vc);

    Ok(SmallParticleLimits {
        trap_frequency: w0,
        coupling: g0,
        coupling_correction: shrink * g0,
        trap_shift: shrink * w0,
        cavity_decay: kappa,
        recoil_cavity,
        recoil_tweezer: tweezer.recoil(sphere, trap),
    })
}
