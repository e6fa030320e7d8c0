//! One-particle momentum wavepackets, their Newton–Wigner evolution, and
//! the zero-angular-momentum radial projection.
//!
//! The default family is Gaussian,
//!   ψ₀(k) = (2πσ²)^{-3/4} exp(−(k−k₀)²/4σ²) exp(−i k·L),
//! localized near x = L at t = 0 and moving with central momentum k₀.
//! For this family the angular integrals reduce in closed form through
//!   ∫ dΩ e^{c·n} = 4π sinh(|c|)/|c|,  |c| = √(c·c)  (entire in c·c),
//! leaving one radial quadrature. Custom profiles fall back to explicit
//! angular quadrature.

use crate::error::{CoreError, Result};
use crate::numerics::quad::{gauss_legendre, integrate_interval_budget};
use crate::scalar::Scalar;
use num_complex::Complex;
use std::sync::Arc;

type C<R> = Complex<R>;

#[inline]
fn dot3<R: Scalar>(a: [R; 3], b: [R; 3]) -> R {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn norm3<R: Scalar>(a: [R; 3]) -> R {
    dot3(a, a).sqrt()
}

/// sinh(z)/z, entire and even; series branch keeps small |z| accurate.
fn sinch<R: Scalar>(z: C<R>) -> C<R> {
    if z.norm() < R::of(0.5) {
        let z2 = z * z;
        let one = C::new(R::one(), R::zero());
        let c6 = C::new(R::of(1.0 / 6.0), R::zero());
        let c120 = C::new(R::of(1.0 / 120.0), R::zero());
        let c5040 = C::new(R::of(1.0 / 5040.0), R::zero());
        one + z2 * (c6 + z2 * (c120 + z2 * c5040))
    } else {
        z.sinh() / z
    }
}

/// e^{−a} · sinh(z)/z without overflow: for the Gaussian packet the
/// combined exponents z−a and −z−a always have non-positive real part.
fn damped_sinch<R: Scalar>(a: R, z: C<R>) -> C<R> {
    if z.norm() < R::of(0.5) {
        sinch(z).scale((-a).exp())
    } else {
        let ea = C::new(-a, R::zero());
        ((ea + z).exp() - (ea - z).exp()) / z.scale(R::of(2.0)) // (e^{z-a} − e^{-z-a})/(2z)
    }
}

enum Profile<R: Scalar> {
    Gaussian,
    Custom(Arc<dyn Fn([R; 3]) -> C<R> + Send + Sync>),
}

impl<R: Scalar> std::fmt::Debug for Profile<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Profile::Gaussian => write!(f, "Gaussian"),
            Profile::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Pure one-particle momentum amplitude with central momentum `k0`,
/// momentum width `sigma_k`, spatial offset `l_offset`, and field mass.
#[derive(Debug)]
pub struct Wavepacket<R: Scalar> {
    pub k0: [R; 3],
    pub sigma_k: R,
    pub l_offset: [R; 3],
    pub mass: R,
    profile: Profile<R>,
    norm: R,
}

impl<R: Scalar> Wavepacket<R> {
    /// Normalized Gaussian packet; the normalization constant is exact.
    pub fn gaussian(k0: [R; 3], sigma_k: R, l_offset: [R; 3], mass: R) -> Result<Self> {
        if sigma_k <= R::zero() || !sigma_k.is_finite() {
            return Err(CoreError::InvalidInput(format!(
                "momentum width must be positive, got {sigma_k}"
            )));
        }
        if mass < R::zero() {
            return Err(CoreError::InvalidInput(format!("mass must be ≥ 0, got {mass}")));
        }
        let two_pi_sigma2 = R::of(2.0) * R::PI() * sigma_k * sigma_k;
        let norm = two_pi_sigma2.powf(R::of(-0.75));
        Ok(Self {
            k0,
            sigma_k,
            l_offset,
            mass,
            profile: Profile::Gaussian,
            norm,
        })
    }

    /// Packet with an arbitrary profile, normalized numerically over the
    /// ball |k| ≤ `k_support` (the profile must be negligible outside).
    pub fn custom(
        profile: impl Fn([R; 3]) -> C<R> + Send + Sync + 'static,
        k0: [R; 3],
        sigma_k: R,
        k_support: R,
        mass: R,
    ) -> Result<Self> {
        if sigma_k <= R::zero() || k_support <= R::zero() || mass < R::zero() {
            return Err(CoreError::InvalidInput(
                "custom packet needs sigma_k > 0, k_support > 0, mass ≥ 0".into(),
            ));
        }
        let raw = Arc::new(profile);
        let mut packet = Self {
            k0,
            sigma_k,
            l_offset: [R::zero(); 3],
            mass,
            profile: Profile::Custom(raw),
            norm: R::one(),
        };
        let sq = packet.norm_squared_numeric(k_support)?;
        if sq <= R::zero() {
            return Err(CoreError::InvalidInput(
                "custom profile has zero norm on its support".into(),
            ));
        }
        packet.norm = sq.sqrt().recip();
        Ok(packet)
    }

    /// ψ₀(k) including normalization.
    pub fn amplitude(&self, k: [R; 3]) -> C<R> {
        match &self.profile {
            Profile::Gaussian => {
                let d = [k[0] - self.k0[0], k[1] - self.k0[1], k[2] - self.k0[2]];
                let arg = -dot3(d, d) / (R::of(4.0) * self.sigma_k * self.sigma_k);
                let phase = -dot3(k, self.l_offset);
                C::new(R::zero(), phase).exp().scale(arg.exp() * self.norm)
            }
            Profile::Custom(f) => f(k).scale(self.norm),
        }
    }

    #[inline]
    pub fn energy(&self, k: R) -> R {
        (k * k + self.mass * self.mass).sqrt()
    }

    /// Radial bounds outside which the packet is negligible.
    pub fn radial_support(&self) -> (R, R) {
        let kc = norm3(self.k0);
        let w = self.sigma_k * R::of(40.0);
        ((kc - w).max(R::zero()), kc + w)
    }

    /// ℓ = 0 radial amplitude ψ_{0,0}(k) = (4π)^{-1/2} ∫ dΩ ψ₀(k n).
    pub fn l0_radial(&self, k: R) -> C<R> {
        match &self.profile {
            Profile::Gaussian => {
                let s2 = R::of(2.0) * self.sigma_k * self.sigma_k;
                // w = k0/(2σ²) − i L; ζ² = w·w
                let mut zeta_sq = C::new(R::zero(), R::zero());
                for m in 0..3 {
                    let wm = C::new(self.k0[m] / s2, -self.l_offset[m]);
                    zeta_sq = zeta_sq + wm * wm;
                }
                let z = zeta_sq.sqrt() * C::new(k, R::zero());
                let a = (k * k + dot3(self.k0, self.k0)) / (R::of(2.0) * s2);
                let sqrt_4pi = (R::of(4.0) * R::PI()).sqrt();
                damped_sinch(a, z).scale(self.norm * sqrt_4pi)
            }
            Profile::Custom(_) => self.angular_projection(k),
        }
    }

    /// Angular quadrature of (4π)^{-1/2} ∫ dΩ ψ₀(k n).
    fn angular_projection(&self, k: R) -> C<R> {
        let (mu, wmu) = gauss_legendre::<R>(48);
        let nphi = 96;
        let dphi = R::of(2.0) * R::PI() / R::of(nphi as f64);
        let mut acc = C::new(R::zero(), R::zero());
        for (m, wm) in mu.iter().zip(&wmu) {
            let sin_th = (R::one() - *m * *m).max(R::zero()).sqrt();
            let mut ring = C::new(R::zero(), R::zero());
            for j in 0..nphi {
                let phi = dphi * R::of(j as f64);
                let n = [sin_th * phi.cos(), sin_th * phi.sin(), *m];
                ring = ring + self.amplitude([k * n[0], k * n[1], k * n[2]]);
            }
            acc = acc + ring.scale(*wm * dphi);
        }
        acc.scale((R::of(4.0) * R::PI()).sqrt().recip())
    }

    /// ∫dΩ ψ₀(k n) e^{i k n·x}, the angular factor of the Newton–Wigner
    /// transform at radial momentum k and position x.
    fn angular_with_plane_wave(&self, k: R, x: [R; 3]) -> C<R> {
        match &self.profile {
            Profile::Gaussian => {
                let s2 = R::of(2.0) * self.sigma_k * self.sigma_k;
                let mut zeta_sq = C::new(R::zero(), R::zero());
                for m in 0..3 {
                    let wm = C::new(self.k0[m] / s2, x[m] - self.l_offset[m]);
                    zeta_sq = zeta_sq + wm * wm;
                }
                let z = zeta_sq.sqrt() * C::new(k, R::zero());
                let a = (k * k + dot3(self.k0, self.k0)) / (R::of(2.0) * s2);
                let four_pi = R::of(4.0) * R::PI();
                damped_sinch(a, z).scale(self.norm * four_pi)
            }
            Profile::Custom(_) => {
                let (mu, wmu) = gauss_legendre::<R>(48);
                let nphi = 96;
                let dphi = R::of(2.0) * R::PI() / R::of(nphi as f64);
                let mut acc = C::new(R::zero(), R::zero());
                for (m, wm) in mu.iter().zip(&wmu) {
                    let sin_th = (R::one() - *m * *m).max(R::zero()).sqrt();
                    let mut ring = C::new(R::zero(), R::zero());
                    for j in 0..nphi {
                        let phi = dphi * R::of(j as f64);
                        let n = [sin_th * phi.cos(), sin_th * phi.sin(), *m];
                        let kn = [k * n[0], k * n[1], k * n[2]];
                        let pw = C::new(R::zero(), k * dot3(n, x)).exp();
                        ring = ring + self.amplitude(kn) * pw;
                    }
                    acc = acc + ring.scale(*wm * dphi);
                }
                acc
            }
        }
    }

    fn norm_squared_numeric(&self, k_support: R) -> Result<R> {
        let integrand = |k: R| -> R {
            if k <= R::zero() {
                return R::zero();
            }
            // ∫dΩ |ψ₀(k n)|² by the same fixed-order angular rule.
            let (mu, wmu) = gauss_legendre::<R>(48);
            let nphi = 96;
            let dphi = R::of(2.0) * R::PI() / R::of(nphi as f64);
            let mut acc = R::zero();
            for (m, wm) in mu.iter().zip(&wmu) {
                let sin_th = (R::one() - *m * *m).max(R::zero()).sqrt();
                let mut ring = R::zero();
                for j in 0..nphi {
                    let phi = dphi * R::of(j as f64);
                    let n = [k * sin_th * phi.cos(), k * sin_th * phi.sin(), k * *m];
                    let a = self.amplitude(n);
                    ring += a.norm_sqr();
                }
                acc += ring * *wm * dphi;
            }
            acc * k * k
        };
        integrate_interval_budget(integrand, R::zero(), k_support, R::of(1e-10), 40_000)
    }
}

/// Newton–Wigner wavefunction
///   ψ_NW(t, x) = ∫ dk̄ ψ₀(k) e^{i k·x − i ε_k t} / √(2 ε_k),
/// evaluated as a radial quadrature over the packet support with the
/// angular integral in closed form (Gaussian) or by quadrature (custom).
pub fn newton_wigner<R: Scalar>(psi: &Wavepacket<R>, t: R, x: [R; 3]) -> Result<C<R>> {
    newton_wigner_tol(psi, t, x, R::of(1e-9))
}

/// [`newton_wigner`] with an explicit relative accuracy target, for callers
/// embedding it inside an outer quadrature that needs less precision.
pub fn newton_wigner_tol<R: Scalar>(
    psi: &Wavepacket<R>,
    t: R,
    x: [R; 3],
    rel_tol: R,
) -> Result<C<R>> {
    if !t.is_finite() || x.iter().any(|c| !c.is_finite()) {
        return Err(CoreError::Domain("newton_wigner: non-finite argument".into()));
    }
    let (lo, hi) = psi.radial_support();
    let pref = (R::of(2.0) * R::PI()).powf(R::of(-1.5));
    let integrand = |k: R| -> C<R> {
        if k <= R::zero() {
            return C::new(R::zero(), R::zero());
        }
        let eps = psi.energy(k);
        let damp = (R::of(2.0) * eps).sqrt().recip();
        let phase = C::new(R::zero(), -eps * t).exp();
        psi.angular_with_plane_wave(k, x) * phase.scale(k * k * damp)
    };
    // Absolute tolerance tied to the packet scale. The radial integrand has
    // its support near |k0| (and near σ for slow packets); probe both.
    let kc = norm3(psi.k0);
    let s = psi.sigma_k;
    let mut probe = R::zero();
    for cand in [kc, kc + s, (kc - s).max(R::zero()), s, R::of(2.0) * s, (lo + hi) * R::of(0.5)] {
        if cand > lo && cand < hi {
            probe = probe.max(integrand(cand).norm());
        }
    }
    let tol = (probe * s * rel_tol).max(R::of(1e-260));
    let val: C<R> = integrate_interval_budget(integrand, lo, hi, tol, 3_000_000)?;
    Ok(val.scale(pref))
}

/// ψ_{0,0}(k): zero-angular-momentum radial amplitude of the packet.
pub fn spherical_l0_projection<R: Scalar>(psi: &Wavepacket<R>, k: R) -> C<R> {
    psi.l0_radial(k)
}

/// ∫ d³x |ψ_NW(t, x)|² for packets with k0 and L along ẑ (axially
/// symmetric), reduced to a 2-D (ρ, z) quadrature. `extent` bounds the
/// integration box: ρ ∈ [0, extent], z ∈ [z_center − z_half, z_center + z_half].
pub fn newton_wigner_norm_axial<R: Scalar>(
    psi: &Wavepacket<R>,
    t: R,
    rho_max: R,
    z_center: R,
    z_half: R,
    rel_tol: R,
) -> Result<R> {
    if psi.k0[0] != R::zero()
        || psi.k0[1] != R::zero()
        || psi.l_offset[0] != R::zero()
        || psi.l_offset[1] != R::zero()
    {
        return Err(CoreError::InvalidInput(
            "axial norm needs k0 and L along the z axis".into(),
        ));
    }
    // Probe the density scale at the packet center to set tolerances.
    let center = [R::zero(), R::zero(), z_center];
    let peak = newton_wigner(psi, t, center)?.norm_sqr();
    let scale = peak.max(R::of(1e-120)) * rho_max * rho_max * z_half;
    let two_pi = R::of(2.0) * R::PI();

    let inner_tol = (scale * rel_tol * R::of(0.05)).max(R::of(1e-140));
    let outer_tol = (scale * rel_tol).max(R::of(1e-130));

    let slice = |z: R| -> R {
        let f = |rho: R| -> R {
            let x = [rho, R::zero(), z];
            let d = newton_wigner(psi, t, x).map(|v| v.norm_sqr()).unwrap_or(R::zero());
            two_pi * rho * d
        };
        integrate_interval_budget(f, R::zero(), rho_max, inner_tol, 200_000).unwrap_or(R::zero())
    };
    integrate_interval_budget(slice, z_center - z_half, z_center + z_half, outer_tol, 400_000)
}
