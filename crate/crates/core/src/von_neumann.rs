//! Strong-coupling pointer-variable readout of the smeared field.
//!
//! A pointer coupled through f(t)·φ(g)⊗P̂ ends up distributed as the
//! smeared-field amplitude φ(F), F = f·g, blurred by the apparatus kernel
//! w(x). The kernel's variance
//!
//!   𝒩² = σ_X² + σ_P² δ_F²
//!
//! is the intrinsic noise of the measurement; δ_F is the time-ordered
//! commutator functional of the profile, which for the Gaussian profile
//! reduces to a single radial quadrature over the Dawson function:
//!
//!   δ_F = (2λ²/π^{7/2}) ∫₀^∞ dp p² e^{−s_X²p²} D(s_T ε_p)/ε_p,
//!
//! with the massless closed form δ_F = λ²/(2π³) · s_T/(s_X(s_X²+s_T²)).
//! Since σ_X σ_P ≥ 1/2, the noise obeys 𝒩 ≥ √|δ_F| for every apparatus
//! state: the bound depends only on the interaction region.

use crate::error::{CoreError, Result};
use crate::field::{Dispersion, SmearingProfile};
use crate::numerics::{dawson, integrate_semi_infinite_rel};
use crate::scalar::Scalar;
use num_complex::Complex;

type C<R> = Complex<R>;

/// Apparatus second moments: zero means, zero X–P correlation declared.
#[derive(Debug, Clone, PartialEq)]
pub struct ApparatusState<R: Scalar> {
    pub sigma_x: R,
    pub sigma_p: R,
}

impl<R: Scalar> ApparatusState<R> {
    pub fn new(sigma_x: R, sigma_p: R) -> Result<Self> {
        if sigma_x <= R::zero() || sigma_p <= R::zero() {
            return Err(CoreError::InvalidInput(format!(
                "pointer spreads must be positive, got σ_X={sigma_x}, σ_P={sigma_p}"
            )));
        }
        // Uncertainty relation, with a whisker of slack for roundoff.
        if sigma_x * sigma_p < R::of(0.5) * (R::one() - R::of(1e-12)) {
            return Err(CoreError::InvalidInput(format!(
                "σ_X σ_P = {} violates the uncertainty bound 1/2",
                sigma_x * sigma_p
            )));
        }
        Ok(Self { sigma_x, sigma_p })
    }

    /// Minimal-uncertainty state with the given position spread.
    pub fn minimal(sigma_x: R) -> Result<Self> {
        Self::new(sigma_x, (R::of(2.0) * sigma_x).recip())
    }
}

/// Pointer outcome statistics after the interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerReadout<R: Scalar> {
    pub mean_x: R,
    pub var_x: R,
    pub noise_n: R,
    pub snr: R,
}

/// δ_F by radial quadrature, valid for any mass ≥ 0.
pub fn delta_f<R: Scalar>(f: &SmearingProfile<R>, mass: R) -> Result<R> {
    let disp = Dispersion::new(mass)?;
    if f.lambda == R::zero() {
        return Ok(R::zero());
    }
    let pref = R::of(2.0) * f.lambda * f.lambda / R::PI().powf(R::of(3.5));
    let (s_x, s_t) = (f.s_x, f.s_t);
    let integrand = move |p: R| -> R {
        if p <= R::zero() {
            return R::zero();
        }
        let eps = disp.energy(p);
        let d = dawson(s_t * eps).unwrap_or(R::zero());
        p * p * (-(s_x * s_x * p * p)).exp() * d / eps
    };
    let value: R = integrate_semi_infinite_rel(integrand, s_x.recip(), R::of(1e-11))?;
    Ok(pref * value)
}

/// Massless closed form δ_F = λ²/(2π³) · s_T / (s_X (s_X² + s_T²)).
pub fn delta_f_massless_closed<R: Scalar>(f: &SmearingProfile<R>) -> R {
    let pi3 = R::PI().powi(3);
    f.lambda * f.lambda / (R::of(2.0) * pi3) * f.s_t / (f.s_x * (f.s_x * f.s_x + f.s_t * f.s_t))
}

/// Complex Gaussian width parameter b (momentum representation
/// ⟨k|Ω⟩ ∝ e^{−b k²}) realizing the declared spreads as a pure state:
/// b_r = 1/(4σ_P²) fixes the momentum variance; the imaginary part (a
/// chirp, present only for σ_X σ_P > 1/2) restores the position variance.
fn gaussian_width<R: Scalar>(omega: &ApparatusState<R>) -> C<R> {
    let br = (R::of(4.0) * omega.sigma_p * omega.sigma_p).recip();
    // 2σ_Xσ_P − 1 in factored form; the square root below would amplify
    // plain roundoff at the minimal-uncertainty boundary into a spurious
    // chirp, so deviations at rounding level count as exactly minimal.
    let t = R::of(2.0) * omega.sigma_x * omega.sigma_p - R::one();
    let excess = if t <= R::epsilon() * R::of(16.0) {
        R::zero()
    } else {
        t * (t + R::of(2.0)) * br
    };
    let bi = (br * excess).sqrt();
    C::new(br, -bi)
}

/// Apparatus kernel w(x) = ∫ dk/√(2π) e^{ikx − ik²δ_F/2} ⟨k|Ω⟩, in closed
/// form for the Gaussian apparatus state: the quadratic phase shifts the
/// complex width to b′ = b + iδ_F/2.
pub fn povm_weight<R: Scalar>(omega: &ApparatusState<R>, d_f: R, x: R) -> C<R> {
    let b = gaussian_width(omega);
    let b_shift = b + C::new(R::zero(), d_f * R::of(0.5));
    // ⟨k|Ω⟩ = (2 b_r/π)^{1/4} e^{−b k²}  ⇒  w(x) = C e^{−x²/4b′}/√(2b′)
    let c_norm = (R::of(2.0) * b.re / R::PI()).powf(R::of(0.25));
    let arg = C::new(-x * x, R::zero()) / b_shift.scale(R::of(4.0));
    arg.exp() * (b_shift.scale(R::of(2.0))).sqrt().inv().scale(c_norm)
}

/// Pointer statistics for a field state with the given smeared-field mean
/// and variance: ⟨X̂⟩ = ⟨φ(F)⟩ and (ΔX)² = (Δφ(F))² + 𝒩².
pub fn pointer_statistics<R: Scalar>(
    field_mean: R,
    field_var: R,
    omega: &ApparatusState<R>,
    d_f: R,
) -> Result<PointerReadout<R>> {
    if field_var < R::zero() || !field_var.is_finite() || !field_mean.is_finite() {
        return Err(CoreError::InvalidInput(format!(
            "field moments must be finite with var ≥ 0, got mean={field_mean}, var={field_var}"
        )));
    }
    let noise_sq = omega.sigma_x * omega.sigma_x + omega.sigma_p * omega.sigma_p * d_f * d_f;
    let noise_n = noise_sq.sqrt();
    let snr = if noise_n > R::zero() {
        field_mean.abs() / noise_n
    } else {
        R::zero()
    };
    Ok(PointerReadout {
        mean_x: field_mean,
        var_x: field_var + noise_sq,
        noise_n,
        snr,
    })
}
