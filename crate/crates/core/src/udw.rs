//! Perturbative multi-level detector, leading order in the coupling.
//!
//! The excitation probability splits into a state-independent vacuum term
//! driven by the switching,
//!
//!   P₀ = Σ_{ε>0} |μ(ε)|² ∫ dk̄ |F̃(ε + ε_k, k)|² / (2ε_k),
//!
//! and a one-particle signal with co- and counter-rotating parts,
//!
//!   P₁ = Σ_{ε>0} |μ(ε)|² ( |∫ dk̄ F̃*(ε_k−ε,k) ψ₀(k)/√(2ε_k)|²
//!                        + |∫ dk̄ F̃*(ε_k+ε,k) ψ₀(k)/√(2ε_k)|² ).
//!
//! For isotropic smearing only the ℓ = 0 projection of the packet
//! contributes, so every momentum integral here is radial. The same P₁ can
//! be written as a spacetime overlap of F with the Newton–Wigner
//! wavefunction; [`p1_newton_wigner`] implements that route as an
//! independent cross-check (its (2π)⁻⁴ prefactor is the square of the
//! transform normalization and converts the raw spacetime integral back to
//! the momentum-space convention).

use crate::error::{CoreError, Result};
use crate::field::{newton_wigner_tol, SmearingProfile, Wavepacket};
use crate::numerics::integrate_semi_infinite_rel;
use crate::numerics::quad::{gauss_legendre, integrate_interval_budget, integrate_interval_split};
use crate::scalar::Scalar;
use num_complex::Complex;

type C<R> = Complex<R>;

/// One internal level: gap ε > 0 above the ground state and the matrix
/// element μ(ε) of the coupling operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorLevel<R: Scalar> {
    pub epsilon: R,
    pub mu: C<R>,
}

/// Internal spectrum, sorted by increasing gap; ground energy is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSpectrum<R: Scalar> {
    levels: Vec<DetectorLevel<R>>,
}

impl<R: Scalar> DetectorSpectrum<R> {
    pub fn new(mut levels: Vec<DetectorLevel<R>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(CoreError::InvalidInput(
                "spectrum needs at least one level".into(),
            ));
        }
        for l in &levels {
            if l.epsilon <= R::zero() || !l.epsilon.is_finite() {
                return Err(CoreError::InvalidInput(format!(
                    "level gaps must be positive, got {}",
                    l.epsilon
                )));
            }
        }
        levels.sort_by(|a, b| a.epsilon.partial_cmp(&b.epsilon).expect("finite gaps"));
        Ok(Self { levels })
    }

    pub fn single(epsilon: R, mu: C<R>) -> Result<Self> {
        Self::new(vec![DetectorLevel { epsilon, mu }])
    }

    pub fn levels(&self) -> &[DetectorLevel<R>] {
        &self.levels
    }

    /// Smallest gap ε₁.
    pub fn epsilon_min(&self) -> R {
        self.levels[0].epsilon
    }
}

/// Per-level excitation contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelExcitation<R: Scalar> {
    pub epsilon: R,
    pub p0: R,
    pub p1_co: R,
    pub p1_counter: R,
}

/// Total excitation probability split into vacuum noise and signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationResult<R: Scalar> {
    pub p0: R,
    pub p1: R,
    pub per_level: Vec<LevelExcitation<R>>,
}

impl<R: Scalar> ExcitationResult<R> {
    pub fn total(&self) -> R {
        self.p0 + self.p1
    }

    /// Leading-order treatment is trustworthy only for small total
    /// probability; flags P₀ + P₁ > 0.1.
    pub fn perturbative_ok(&self) -> bool {
        self.total() <= R::of(0.1)
    }
}

/// Vacuum (switching) excitation probability P₀.
pub fn p0<R: Scalar>(f: &SmearingProfile<R>, spec: &DetectorSpectrum<R>, mass: R) -> Result<R> {
    Ok(p0_per_level(f, spec, mass)?.iter().copied().sum())
}

fn p0_per_level<R: Scalar>(
    f: &SmearingProfile<R>,
    spec: &DetectorSpectrum<R>,
    mass: R,
) -> Result<Vec<R>> {
    if mass < R::zero() {
        return Err(CoreError::Domain(format!("mass must be ≥ 0, got {mass}")));
    }
    let measure = R::of(4.0) * R::PI() / (R::of(2.0) * R::PI()).powf(R::of(1.5));
    let mut out = Vec::with_capacity(spec.levels.len());
    for level in &spec.levels {
        let mu_sq = level.mu.norm_sqr();
        if mu_sq == R::zero() {
            out.push(R::zero());
            continue;
        }
        let eps_gap = level.epsilon;
        let integrand = move |k: R| -> R {
            if k <= R::zero() {
                return R::zero();
            }
            let eps_k = (k * k + mass * mass).sqrt();
            if eps_k == R::zero() {
                return R::zero();
            }
            let ft = crate::field::smearing_fourier(f, eps_gap + eps_k, k);
            k * k * ft * ft / (R::of(2.0) * eps_k)
        };
        let scale = f.s_x.recip().max(f.s_t.recip());
        let value: R = integrate_semi_infinite_rel(integrand, scale, R::of(1e-10))?;
        out.push(mu_sq * measure * value);
    }
    Ok(out)
}

/// Co- and counter-rotating inner radial integrals of P₁ for one level,
/// switching window centered at `t_center`.
fn p1_inner<R: Scalar>(
    f: &SmearingProfile<R>,
    t_center: R,
    psi: &Wavepacket<R>,
    eps_gap: R,
) -> Result<(C<R>, C<R>)> {
    let measure = (R::of(4.0) * R::PI()).sqrt() / (R::of(2.0) * R::PI()).powf(R::of(1.5));
    let (lo, hi) = psi.radial_support();
    let mass = psi.mass;
    let inner = |sign: R| {
        move |k: R| -> C<R> {
            if k <= R::zero() {
                return C::new(R::zero(), R::zero());
            }
            let eps_k = (k * k + mass * mass).sqrt();
            let shifted = eps_k + sign * eps_gap;
            let ft = crate::field::smearing_fourier(f, shifted, k);
            let phase = C::new(R::zero(), -shifted * t_center).exp();
            (psi.l0_radial(k) * phase).scale(k * k * ft / (R::of(2.0) * eps_k).sqrt())
        }
    };
    let co = inner(-R::one());
    let counter = inner(R::one());

    // The co-rotating integrand carries a window-resonance spike of width
    // ~1/s_T at ε_k = ε, which can be far narrower than the packet support;
    // hand those scales to the quadrature as breakpoints.
    let mut breaks = Vec::new();
    if eps_gap > mass {
        let k_res = (eps_gap * eps_gap - mass * mass).sqrt();
        for m in [-20.0, -5.0, 0.0, 5.0, 20.0] {
            breaks.push(k_res + R::of(m) / f.s_t);
        }
    }

    let width = hi - lo;
    let mut scale = R::zero();
    for i in 1..8 {
        let k = lo + width * R::of(i as f64 / 8.0);
        scale = scale.max(co(k).norm()).max(counter(k).norm());
    }
    for &b in &breaks {
        if b > lo && b < hi {
            scale = scale.max(co(b).norm());
        }
    }
    let tol = (scale * width * R::of(1e-10)).max(R::of(1e-280));
    let i_co: C<R> = integrate_interval_split(&co, lo, hi, tol, &breaks, 2_000_000)?;
    let i_counter: C<R> = integrate_interval_budget(&counter, lo, hi, tol, 2_000_000)?;
    Ok((i_co.scale(measure), i_counter.scale(measure)))
}

/// One-particle signal P₁ (momentum-space route), window centered at 0.
pub fn p1<R: Scalar>(
    f: &SmearingProfile<R>,
    psi: &Wavepacket<R>,
    spec: &DetectorSpectrum<R>,
) -> Result<R> {
    p1_windowed(f, R::zero(), psi, spec)
}

/// P₁ with the switching window centered at `t_center`.
pub fn p1_windowed<R: Scalar>(
    f: &SmearingProfile<R>,
    t_center: R,
    psi: &Wavepacket<R>,
    spec: &DetectorSpectrum<R>,
) -> Result<R> {
    let mut total = R::zero();
    for level in &spec.levels {
        let mu_sq = level.mu.norm_sqr();
        if mu_sq == R::zero() {
            continue;
        }
        let (co, counter) = p1_inner(f, t_center, psi, level.epsilon)?;
        total += mu_sq * (co.norm_sqr() + counter.norm_sqr());
    }
    Ok(total)
}

/// Full excitation summary at one window position.
pub fn excitation<R: Scalar>(
    f: &SmearingProfile<R>,
    t_center: R,
    psi: &Wavepacket<R>,
    spec: &DetectorSpectrum<R>,
) -> Result<ExcitationResult<R>> {
    let p0s = p0_per_level(f, spec, psi.mass)?;
    let mut per_level = Vec::with_capacity(spec.levels.len());
    let mut p0_total = R::zero();
    let mut p1_total = R::zero();
    for (level, p0_l) in spec.levels.iter().zip(p0s) {
        let mu_sq = level.mu.norm_sqr();
        let (co, counter) = if mu_sq == R::zero() {
            (C::new(R::zero(), R::zero()), C::new(R::zero(), R::zero()))
        } else {
            p1_inner(f, t_center, psi, level.epsilon)?
        };
        let p1_co = mu_sq * co.norm_sqr();
        let p1_counter = mu_sq * counter.norm_sqr();
        p0_total += p0_l;
        p1_total += p1_co + p1_counter;
        per_level.push(LevelExcitation {
            epsilon: level.epsilon,
            p0: p0_l,
            p1_co,
            p1_counter,
        });
    }
    Ok(ExcitationResult {
        p0: p0_total,
        p1: p1_total,
        per_level,
    })
}

/// P₁ through the spacetime representation: overlap of e^{±iεt} F(t−t_c, x)
/// with the Newton–Wigner wavefunction, on tensor Gauss–Legendre grids
/// sized to the oscillation content.
pub fn p1_newton_wigner<R: Scalar>(
    f: &SmearingProfile<R>,
    psi: &Wavepacket<R>,
    spec: &DetectorSpectrum<R>,
) -> Result<R> {
    p1_newton_wigner_windowed(f, R::zero(), psi, spec)
}

pub fn p1_newton_wigner_windowed<R: Scalar>(
    f: &SmearingProfile<R>,
    t_center: R,
    psi: &Wavepacket<R>,
    spec: &DetectorSpectrum<R>,
) -> Result<R> {
    if psi.k0[0] != R::zero() || psi.k0[1] != R::zero() {
        return Err(CoreError::InvalidInput(
            "spacetime route assumes the packet axis along z".into(),
        ));
    }
    let k_central = psi.k0[2].abs() + psi.sigma_k * R::of(5.0);
    let eps_max = spec
        .levels
        .iter()
        .map(|l| l.epsilon)
        .fold(R::zero(), R::max);

    // Spatial factor S(t) = ∫ d³x g(x) ψ_NW(t, x), axially symmetric.
    let half_z = f.s_x * R::of(6.0);
    let n_z = ((48.0 + (R::of(2.0) * half_z * (k_central + psi.sigma_k)).as_f64() * 0.9) as usize)
        .min(1200);
    let n_rho = 32usize;
    let (zn, zw) = gauss_legendre::<R>(n_z);
    let (rn, rw) = gauss_legendre::<R>(n_rho);

    let norm_f = f.lambda / (R::of(4.0) * R::PI() * R::PI() * f.s_x.powi(3) * f.s_t);
    let two_sx_sq = R::of(2.0) * f.s_x * f.s_x;

    let spatial = |t: R| -> Result<C<R>> {
        let mut acc = C::new(R::zero(), R::zero());
        for (zi, zwi) in zn.iter().zip(&zw) {
            let z = *zi * half_z;
            for (ri, rwi) in rn.iter().zip(&rw) {
                let rho = (*ri + R::one()) * R::of(0.5) * half_z;
                let g_weight = (-(rho * rho + z * z) / two_sx_sq).exp();
                if g_weight < R::of(1e-14) {
                    continue;
                }
                let w = *zwi * *rwi * half_z * R::of(0.5) * half_z;
                let psi_nw = newton_wigner_tol(psi, t, [rho, R::zero(), z], R::of(3e-6))?;
                acc = acc + psi_nw.scale(w * g_weight * rho);
            }
        }
        Ok(acc.scale(R::of(2.0) * R::PI()))
    };

    let half_t = f.s_t * R::of(6.0);
    let omega_fast = eps_max + k_central + f.s_t.recip();
    let n_t = ((48.0 + (R::of(2.0) * half_t * omega_fast).as_f64() * 0.9) as usize).min(4000);
    let (tn, tw) = gauss_legendre::<R>(n_t);

    // S(t) cached on the t-grid once; every level reuses it.
    let mut s_vals = Vec::with_capacity(n_t);
    for ti in &tn {
        let t = t_center + *ti * half_t;
        s_vals.push(spatial(t)?);
    }

    let mut total = R::zero();
    let conv = (R::of(2.0) * R::PI()).powi(4).recip();
    for level in &spec.levels {
        let mu_sq = level.mu.norm_sqr();
        if mu_sq == R::zero() {
            continue;
        }
        let mut j_plus = C::new(R::zero(), R::zero());
        let mut j_minus = C::new(R::zero(), R::zero());
        for ((ti, twi), s_val) in tn.iter().zip(&tw).zip(&s_vals) {
            let t = t_center + *ti * half_t;
            let window =
                (-(t - t_center) * (t - t_center) / (R::of(2.0) * f.s_t * f.s_t)).exp();
            let base = s_val.scale(*twi * half_t * window * norm_f);
            j_plus = j_plus + base * C::new(R::zero(), level.epsilon * t).exp();
            j_minus = j_minus + base * C::new(R::zero(), -level.epsilon * t).exp();
        }
        total += mu_sq * conv * (j_plus.norm_sqr() + j_minus.norm_sqr());
    }
    Ok(total)
}

/// Long-window (adiabatic) limit of the signal: a closed-form sum over
/// levels with on-shell momentum κ = √(ε² − m²),
///   P₁ = Σ_{ε>0} ε |μ(ε) g(κ)|² |ψ_{0,0}(κ)|² / (8π² (ε² − m²)).
pub fn p1_adiabatic<R: Scalar>(
    g_amp: impl Fn(R) -> R,
    psi_l0: impl Fn(R) -> C<R>,
    spec: &DetectorSpectrum<R>,
    mass: R,
) -> Result<R> {
    let mut total = R::zero();
    for level in &spec.levels {
        let eps = level.epsilon;
        if eps <= mass {
            return Err(CoreError::Domain(format!(
                "level ε = {eps} has no on-shell momentum for mass {mass}"
            )));
        }
        let kappa_sq = eps * eps - mass * mass;
        let kappa = kappa_sq.sqrt();
        let weight = level.mu.norm_sqr() * g_amp(kappa) * g_amp(kappa);
        let density = psi_l0(kappa).norm_sqr();
        total += eps * weight * density / (R::of(8.0) * R::PI() * R::PI() * kappa_sq);
    }
    Ok(total)
}
