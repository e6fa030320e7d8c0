//! Free massless (optionally massive) scalar field ingredients.
//!
//! Conventions, fixed once and used everywhere:
//! - momentum measure dk̄ = d³k/(2π)^{3/2};
//! - wavepacket normalization ∫ d³k |ψ₀(k)|² = 1;
//! - Fourier transform F̃(ω,k) = (2π)^{-2} ∫ dt d³x F(t,x) e^{iωt − ik·x}.
//!
//! For the Gaussian spacetime profile
//!   F(t,x) = λ/(4π² s_X³ s_T) · exp(−x²/2s_X² − t²/2s_T²)
//! this gives F̃(ω,k) = λ (2π)^{-2} exp(−k²s_X²/2 − ω²s_T²/2), real and
//! positive, separable in ω and k.

mod wavepacket;

pub use wavepacket::{
    newton_wigner, newton_wigner_norm_axial, newton_wigner_tol, spherical_l0_projection, Wavepacket,
};

use crate::error::{CoreError, Result};
use crate::numerics::quad::integrate_interval;
use crate::numerics::integrate_semi_infinite_rel;
use crate::numerics::integrate_semi_infinite_rel_split;
use crate::scalar::Scalar;
use num_complex::Complex;
use std::sync::Arc;

/// Gaussian spacetime smearing: coupling λ, spatial width s_X, temporal
/// width s_T (natural units).
#[derive(Debug, Clone, PartialEq)]
pub struct SmearingProfile<R: Scalar> {
    pub lambda: R,
    pub s_x: R,
    pub s_t: R,
}

impl<R: Scalar> SmearingProfile<R> {
    pub fn new(lambda: R, s_x: R, s_t: R) -> Result<Self> {
        if lambda < R::zero() || !lambda.is_finite() {
            return Err(CoreError::InvalidInput(format!(
                "coupling must be ≥ 0, got {lambda}"
            )));
        }
        if s_x <= R::zero() || s_t <= R::zero() {
            return Err(CoreError::InvalidInput(format!(
                "smearing widths must be positive, got s_x={s_x}, s_t={s_t}"
            )));
        }
        Ok(Self { lambda, s_x, s_t })
    }
}

/// F̃(ω, k) for the Gaussian profile under the stated transform convention.
pub fn smearing_fourier<R: Scalar>(f: &SmearingProfile<R>, omega: R, k: R) -> R {
    let two_pi_sq = R::of(4.0) * R::PI() * R::PI();
    f.lambda / two_pi_sq
        * (-(k * k * f.s_x * f.s_x + omega * omega * f.s_t * f.s_t) * R::of(0.5)).exp()
}

/// Exponential momentum form factor |g̃(k)|² = e^{−k/Λ} with UV cutoff Λ;
/// Λ⁻¹ is the size of the interaction region.
#[derive(Debug, Clone, PartialEq)]
pub struct FormFactor<R: Scalar> {
    pub cutoff: R,
}

impl<R: Scalar> FormFactor<R> {
    pub fn new(cutoff: R) -> Result<Self> {
        if cutoff <= R::zero() || !cutoff.is_finite() {
            return Err(CoreError::InvalidInput(format!(
                "UV cutoff must be positive, got {cutoff}"
            )));
        }
        Ok(Self { cutoff })
    }

    /// |g̃(k)|² = e^{−k/Λ}.
    #[inline]
    pub fn amplitude_sq(&self, k: R) -> R {
        (-k / self.cutoff).exp()
    }

    /// g̃(k) = e^{−k/2Λ} (positive root).
    #[inline]
    pub fn amplitude(&self, k: R) -> R {
        (-k / (R::of(2.0) * self.cutoff)).exp()
    }
}

/// Relativistic dispersion ε_k = √(k² + m²).
#[derive(Debug, Clone, PartialEq)]
pub struct Dispersion<R: Scalar> {
    pub mass: R,
}

impl<R: Scalar> Dispersion<R> {
    pub fn new(mass: R) -> Result<Self> {
        if mass < R::zero() || !mass.is_finite() {
            return Err(CoreError::InvalidInput(format!(
                "mass must be ≥ 0, got {mass}"
            )));
        }
        Ok(Self { mass })
    }

    #[inline]
    pub fn energy(&self, k: R) -> R {
        (k * k + self.mass * self.mass).sqrt()
    }
}

/// Vacuum two-point function of the form-factor-smeared field,
///   ⟨0| φ_g(t′) φ_g(t″) |0⟩ = (4π²)^{-1} ∫₀^∞ dk k² |g̃(k)|² e^{−iε_k τ} / ε_k
/// with τ = t′ − t″. Hermitian in τ: value(−τ) = conj(value(τ)).
pub fn vacuum_two_point_smeared<R: Scalar>(
    g: &FormFactor<R>,
    tau: R,
    mass: R,
) -> Result<Complex<R>> {
    if !tau.is_finite() || mass < R::zero() {
        return Err(CoreError::Domain("tau must be finite, mass ≥ 0".into()));
    }
    let disp = Dispersion::new(mass)?;
    let norm = (R::of(4.0) * R::PI() * R::PI()).recip();
    let integrand = move |k: R| -> Complex<R> {
        let eps = disp.energy(k);
        if eps == R::zero() {
            return Complex::new(R::zero(), R::zero());
        }
        let phase = Complex::new(R::zero(), -eps * tau).exp();
        phase * (k * k * g.amplitude_sq(k) / eps)
    };
    let value: Complex<R> = integrate_semi_infinite_rel(integrand, g.cutoff, R::of(1e-10))?;
    Ok(value.scale(norm))
}

/// Radial coherent amplitude α(k) with its momentum support, so quadratures
/// know where to look. Describes an isotropic coherent pulse.
#[derive(Clone)]
pub struct CoherentAmplitude<R: Scalar> {
    amp: Arc<dyn Fn(R) -> Complex<R> + Send + Sync>,
    pub k_center: R,
    pub k_halfwidth: R,
}

impl<R: Scalar> CoherentAmplitude<R> {
    pub fn new(
        amp: impl Fn(R) -> Complex<R> + Send + Sync + 'static,
        k_center: R,
        k_halfwidth: R,
    ) -> Result<Self> {
        if k_center < R::zero() || k_halfwidth <= R::zero() {
            return Err(CoreError::InvalidInput(
                "coherent amplitude support must have k_center ≥ 0, k_halfwidth > 0".into(),
            ));
        }
        Ok(Self {
            amp: Arc::new(amp),
            k_center,
            k_halfwidth,
        })
    }

    /// Gaussian pulse: carrier ε₀, spectral width σ_p, arriving near
    /// `t_arrival` (a linear phase delays the real-time envelope), overall
    /// strength `scale`.
    pub fn gaussian_pulse(eps0: R, sigma_p: R, t_arrival: R, scale: R) -> Result<Self> {
        if eps0 <= R::zero() || sigma_p <= R::zero() {
            return Err(CoreError::InvalidInput(
                "pulse carrier and spectral width must be positive".into(),
            ));
        }
        let amp = move |k: R| -> Complex<R> {
            let detune = k - eps0;
            let env = (-(detune * detune) / (R::of(4.0) * sigma_p * sigma_p)).exp();
            Complex::new(R::zero(), k * t_arrival).exp().scale(env * scale)
        };
        Self::new(amp, eps0, sigma_p * R::of(40.0))
    }

    #[inline]
    pub fn eval(&self, k: R) -> Complex<R> {
        (self.amp)(k)
    }

    /// Identically zero amplitude (vacuum).
    pub fn vacuum() -> Self {
        Self {
            amp: Arc::new(|_| Complex::new(R::zero(), R::zero())),
            k_center: R::one(),
            k_halfwidth: R::one(),
        }
    }
}

/// Mean smeared field of a coherent state:
///   ⟨φ_g(t)⟩ = 2 Re ∫ dk̄ g̃(k) α(k) e^{−iε_k t} / √(2ε_k),
/// reduced to the radial integral for isotropic α, massless dispersion.
pub fn coherent_field_mean<R: Scalar>(
    alpha: &CoherentAmplitude<R>,
    g_amp: impl Fn(R) -> R,
    t: R,
) -> Result<R> {
    let lo = (alpha.k_center - alpha.k_halfwidth).max(R::zero());
    let hi = alpha.k_center + alpha.k_halfwidth;
    let pref = R::of(4.0) * R::PI() / (R::of(2.0) * R::PI()).powf(R::of(1.5));
    let integrand = move |k: R| -> Complex<R> {
        if k <= R::zero() {
            return Complex::new(R::zero(), R::zero());
        }
        let phase = Complex::new(R::zero(), -k * t).exp();
        (alpha.eval(k) * phase).scale(k * k * g_amp(k) / (R::of(2.0) * k).sqrt())
    };
    // Scale the absolute tolerance to the pulse magnitude.
    let mid = alpha.eval(alpha.k_center).norm() * alpha.k_center * alpha.k_center
        + alpha.eval(alpha.k_center + alpha.k_halfwidth * R::of(0.5)).norm();
    let tol = (mid * alpha.k_halfwidth * R::of(1e-10)).max(R::of(1e-280));
    let value: Complex<R> = integrate_interval(integrand, lo, hi, tol)?;
    Ok(R::of(2.0) * (value.scale(pref)).re)
}

/// Equal-time field fluctuation of the F-smeared field (m = 0):
///   (Δφ(F))²_vac = ∫₀^∞ dk k² |F̌(k)|² / (2k) · (4π/(2π)³)-normalized,
/// with F̌ the spatial-and-temporal Gaussian transform at ω = ε_k. Supplied
/// for pointer-statistics callers that want the vacuum variance.
pub fn vacuum_smeared_variance<R: Scalar>(f: &SmearingProfile<R>, mass: R) -> Result<R> {
    let disp = Dispersion::new(mass)?;
    let norm = (R::of(2.0) * R::PI() * R::PI()).recip() * R::of(0.5)
        * (R::of(2.0) * R::PI()).powi(4);
    // (2π)⁴ restores the unnormalized transform |∫F e^{iωt−ikx}|² from F̃.
    let integrand = move |k: R| -> R {
        let eps = disp.energy(k);
        if eps == R::zero() {
            return R::zero();
        }
        let ft = smearing_fourier(f, eps, k);
        k * k * ft * ft / eps
    };
    let value: R = integrate_semi_infinite_rel_split(
        integrand,
        f.s_x.recip().max(f.s_t.recip()),
        R::of(1e-10),
        &[],
    )?;
    Ok(value * norm)
}
