//! Mie coefficients for a homogeneous, non-absorbing sphere.
//!
//! Conventions follow Bohren & Huffman: ψ_n(z) = z j_n(z), χ_n(z) = −z y_n(z),
//! ξ_n(z) = ψ_n(z) − iχ_n(z) = z h⁽¹⁾_n(z). The relative index m is real.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Relative size of the last retained series term at which truncation stops.
pub const TAIL_TOLERANCE: f64 = 1e-12;

const ORDER_STEP: usize = 5;
const RESCALE_AT: f64 = 1e200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieInput {
    size_parameter: f64,
    relative_index: f64,
}

impl MieInput {
    pub fn new(size_parameter: f64, relative_index: f64) -> Result<Self> {
        if !size_parameter.is_finite() || size_parameter <= 0.0 {
            return Err(domain(format!("size parameter must be positive and finite, got {size_parameter}")));
        }
        if !relative_index.is_finite() || relative_index < 1.0 {
            return Err(domain(format!("relative index must be finite and >= 1, got {relative_index}")));
        }
        Ok(MieInput { size_parameter, relative_index })
    }

    /// Builds the input from a relative permittivity. Absorbing media are rejected.
    pub fn from_permittivity(size_parameter: f64, epsilon_r: Complex64) -> Result<Self> {
        if epsilon_r.im != 0.0 {
            return Err(domain(format!(
                "absorbing sphere (Im eps_r = {}) is not supported",
                epsilon_r.im
            )));
        }
        if epsilon_r.re < 1.0 {
            return Err(domain(format!("eps_r must be >= 1, got {}", epsilon_r.re)));
        }
        MieInput::new(size_parameter, epsilon_r.re.sqrt())
    }

    pub fn size_parameter(&self) -> f64 {
        self.size_parameter
    }

    pub fn relative_index(&self) -> f64 {
        self.relative_index
    }
}

/// Riccati–Bessel functions and derivatives for orders `0..=n_max`.
#[derive(Debug, Clone)]
pub struct RiccatiBessel {
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub chi: Vec<f64>,
    pub dchi: Vec<f64>,
}

impl RiccatiBessel {
    pub fn order_max(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn xi(&self, n: usize) -> Complex64 {
        Complex64::new(self.psi[n], -self.chi[n])
    }

    pub fn dxi(&self, n: usize) -> Complex64 {
        Complex64::new(self.dpsi[n], -self.dchi[n])
    }
}

pub fn riccati_bessel(x: f64, n_max: usize) -> Result<RiccatiBessel> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain(format!("Riccati-Bessel argument must be positive, got {x}")));
    }
    if n_max < 1 {
        return Err(domain("n_max must be at least 1"));
    }
    let (psi, dpsi) = psi_downward(x, n_max)?;
    let (chi, dchi) = chi_upward(x, n_max)?;
    Ok(RiccatiBessel { psi, dpsi, chi, dchi })
}

/// ψ_n by Miller's downward recurrence, normalized against ψ_0 and ψ_1.
fn psi_downward(z: f64, n_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let top = n_max.max(z.ceil() as usize);
    let start = top + 20 + (2.0 * (top as f64).sqrt()).ceil() as usize;

    let mut psi = vec![0.0; n_max + 1];
    let mut next = 0.0;
    let mut cur = 1.0;
    for n in (1..=start).rev() {
        let prev = (2 * n + 1) as f64 / z * cur - next;
        next = cur;
        cur = prev;
        if n - 1 <= n_max {
            psi[n - 1] = cur;
        }
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            next /= RESCALE_AT;
            for v in psi.iter_mut().skip(n - 1) {
                *v /= RESCALE_AT;
            }
        }
    }

    let (s, c) = z.sin_cos();
    let exact0 = s;
    let exact1 = s / z - c;
    let norm = (psi[0] * exact0 + psi[1] * exact1) / (psi[0] * psi[0] + psi[1] * psi[1]);
    if !norm.is_finite() {
        return Err(Error::SpecialFunctionOverflow { order: 0, argument: z });
    }
    for v in psi.iter_mut() {
        *v *= norm;
    }

    let mut dpsi = vec![0.0; n_max + 1];
    dpsi[0] = c;
    for n in 1..=n_max {
        dpsi[n] = psi[n - 1] - n as f64 * psi[n] / z;
    }
    Ok((psi, dpsi))
}

fn chi_upward(z: f64, n_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (s, c) = z.sin_cos();
    let mut chi = vec![0.0; n_max + 1];
    chi[0] = c;
    chi[1] = c / z + s;
    for n in 1..n_max {
        chi[n + 1] = (2 * n + 1) as f64 / z * chi[n] - chi[n - 1];
        if !chi[n + 1].is_finite() {
            return Err(Error::SpecialFunctionOverflow { order: n + 1, argument: z });
        }
    }
    let mut dchi = vec![0.0; n_max + 1];
    dchi[0] = -s;
    for n in 1..=n_max {
        dchi[n] = chi[n - 1] - n as f64 * chi[n] / z;
        if !dchi[n].is_finite() {
            return Err(Error::SpecialFunctionOverflow { order: n, argument: z });
        }
    }
    Ok((chi, dchi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MieCoefficients {
    input: MieInput,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    tail: f64,
}

impl MieCoefficients {
    pub fn input(&self) -> MieInput {
        self.input
    }

    pub fn order_max(&self) -> usize {
        self.a.len()
    }

    /// a_n for n = 1..=n_max; index 0 holds a_1.
    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    /// b_n for n = 1..=n_max; index 0 holds b_1.
    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    /// |(2N+1)(a_N + b_N)| of the last order, relative to Σ|(2n+1)(a_n + b_n)|.
    pub fn tail_bound(&self) -> f64 {
        self.tail
    }

    fn orders(&self) -> impl Iterator<Item = (f64, Complex64, Complex64)> + '_ {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(i, (&a, &b))| ((2 * i + 3) as f64, a, b))
    }

    /// Σ(2n+1) Re(a_n + b_n).
    pub fn extinction_sum(&self) -> f64 {
        self.orders().map(|(w, a, b)| w * (a + b).re).sum()
    }

    /// Σ(2n+1)(|a_n|² + |b_n|²).
    pub fn scattering_sum(&self) -> f64 {
        self.orders().map(|(w, a, b)| w * (a.norm_sqr() + b.norm_sqr())).sum()
    }

    /// Σ(2n+1)(a_n + b_n).
    pub fn forward_sum(&self) -> Complex64 {
        self.orders().map(|(w, a, b)| w * (a + b)).sum()
    }
}

/// Wiscombe's starting order ⌈x + 4x^{1/3} + 2⌉.
pub fn wiscombe_order(x: f64) -> usize {
    (x + 4.0 * x.cbrt() + 2.0).ceil() as usize
}

/// Coefficients with the order chosen by the Wiscombe rule and then extended
/// in steps of five until the relative tail drops below [`TAIL_TOLERANCE`].
pub fn mie_coefficients(input: MieInput) -> Result<MieCoefficients> {
    let start = wiscombe_order(input.size_parameter);
    let cap = 2 * start + 50;
    let mut n_max = start;
    loop {
        let coeffs = mie_coefficients_with_order(input, n_max)?;
        if coeffs.tail <= TAIL_TOLERANCE {
            return Ok(coeffs);
        }
        if n_max >= cap {
            return Err(Error::NotConverged { order_max: n_max, tail: coeffs.tail });
        }
        n_max = (n_max + ORDER_STEP).min(cap);
    }
}

/// Coefficients at a fixed truncation order, without the convergence loop.
pub fn mie_coefficients_with_order(input: MieInput, n_max: usize) -> Result<MieCoefficients> {
    let x = input.size_parameter;
    let m = input.relative_index;
    let outer = riccati_bessel(x, n_max)?;
    let (psi_in, dpsi_in) = psi_downward(m * x, n_max)?;

    let mut a = Vec::with_capacity(n_max);
    let mut b = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (p, dp) = (outer.psi[n], outer.dpsi[n]);
        let (xi, dxi) = (outer.xi(n), outer.dxi(n));
        let (pm, dpm) = (psi_in[n], dpsi_in[n]);

        let num_a = m * pm * dp - p * dpm;
        let den_a = m * pm * dxi - xi * dpm;
        let num_b = pm * dp - m * p * dpm;
        let den_b = pm * dxi - m * xi * dpm;
        for den in [den_a, den_b] {
            if !den.is_finite() || den.norm() < f64::MIN_POSITIVE {
                return Err(Error::DenominatorUnderflow { order: n });
            }
        }
        a.push(num_a / den_a);
        b.push(num_b / den_b);
    }

    let last = (2 * n_max + 1) as f64 * (a[n_max - 1] + b[n_max - 1]).norm();
    let total: f64 = a
        .iter()
        .zip(&b)
        .enumerate()
        .map(|(i, (a, b))| (2 * i + 3) as f64 * (a + b).norm())
        .sum();
    let tail = if total > 0.0 { last / total } else { 0.0 };

    Ok(MieCoefficients { input, a, b, tail })
}

/// Forward scattering amplitude f(k,k) = (√(2π)/k) Σ(2n+1)(a_n + b_n), in metres.
pub fn forward_amplitude(coeffs: &MieCoefficients, k: f64) -> Result<Complex64> {
    if !k.is_finite() || k <= 0.0 {
        return Err(domain(format!("wavenumber must be positive, got {k}")));
    }
    Ok((2.0 * PI).sqrt() / k * coeffs.forward_sum())
}

/// The two partial sums that carry all Mie dependence of the cavity parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieSums {
    /// Σ(2n+1)(1 + (−1)ⁿ cos 2φ)(a_n + b_n)
    pub plus: Complex64,
    /// Σ(2n+1)(−1)^{n+1}(a_n + b_n)
    pub alt: Complex64,
    /// Relative truncation tail of the underlying coefficients.
    pub tail: f64,
}

pub fn mie_sums(coeffs: &MieCoefficients, phi: f64) -> MieSums {
    let cos2 = (2.0 * phi).cos();
    let mut plus = Complex64::new(0.0, 0.0);
    let mut alt = Complex64::new(0.0, 0.0);
    for (i, (w, a, b)) in coeffs.orders().enumerate() {
        let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
        plus += w * (1.0 + sign * cos2) * (a + b);
        alt += -sign * w * (a + b);
    }
    MieSums { plus, alt, tail: coeffs.tail }
}
