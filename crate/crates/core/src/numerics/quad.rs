//! Adaptive quadrature: Gauss–Kronrod 7/15 panels with bisection, a
//! semi-infinite driver for exponentially damped integrands, and a
//! relative-tolerance wrapper that first estimates the integral's scale.
//!
//! Values are generic over [`QuadValue`] so the same driver integrates
//! real, complex, and small vector-valued integrands.

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;
use num_complex::Complex;

/// Value type a quadrature rule can accumulate: closed under addition,
/// scaling by the scalar, with a norm for error control.
pub trait QuadValue<R: Scalar>: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: R) -> Self;
    fn norm(self) -> R;
}

impl<R: Scalar> QuadValue<R> for R {
    fn zero() -> Self {
        R::zero()
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: R) -> Self {
        self * s
    }
    fn norm(self) -> R {
        self.abs()
    }
}

impl<R: Scalar> QuadValue<R> for Complex<R> {
    fn zero() -> Self {
        Complex::new(R::zero(), R::zero())
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: R) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
    fn norm(self) -> R {
        self.re.hypot(self.im)
    }
}

/// Pair of simultaneously integrated quantities (e.g. two kernel moments).
#[derive(Debug, Clone, Copy)]
pub struct Pair<R>(pub R, pub R);

impl<R: Scalar> QuadValue<R> for Pair<R> {
    fn zero() -> Self {
        Pair(R::zero(), R::zero())
    }
    fn add(self, other: Self) -> Self {
        Pair(self.0 + other.0, self.1 + other.1)
    }
    fn sub(self, other: Self) -> Self {
        Pair(self.0 - other.0, self.1 - other.1)
    }
    fn scale(self, s: R) -> Self {
        Pair(self.0 * s, self.1 * s)
    }
    fn norm(self) -> R {
        self.0.abs().max(self.1.abs())
    }
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss–Kronrod 7/15 panel. Returns the Kronrod estimate and the
/// norm of the Kronrod–Gauss difference as a conservative error measure.
fn gk15<R, V, F>(f: &F, a: R, b: R) -> (V, R)
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    let half = R::of(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;

    let fc = f(c);
    let mut kronrod = fc.scale(R::of(WGK[7]));
    let mut gauss = fc.scale(R::of(WG[3]));

    for j in 0..7 {
        let x = h * R::of(XGK[j]);
        let fsum = f(c - x).add(f(c + x));
        kronrod = kronrod.add(fsum.scale(R::of(WGK[j])));
        if j % 2 == 1 {
            gauss = gauss.add(fsum.scale(R::of(WG[j / 2])));
        }
    }
    kronrod = kronrod.scale(h);
    gauss = gauss.scale(h);
    (kronrod, kronrod.sub(gauss).norm())
}

struct AdaptiveState<R, V> {
    sum: V,
    err: R,
    evals: usize,
    budget: usize,
    exhausted: bool,
}

fn adapt<R, V, F>(f: &F, a: R, b: R, tol: R, depth: usize, st: &mut AdaptiveState<R, V>)
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    let (value, err) = gk15(f, a, b);
    st.evals += 15;
    // Second condition: error is at the roundoff floor for this panel's
    // magnitude, so further subdivision cannot help.
    let floor = value.norm() * R::of(50.0) * R::epsilon();
    if err <= tol || err <= floor || depth >= 52 || st.evals >= st.budget {
        st.sum = st.sum.add(value);
        st.err = st.err + err;
        if err > tol && err > floor {
            st.exhausted = true;
        }
        return;
    }
    let mid = (a + b) * R::of(0.5);
    let half_tol = tol * R::of(0.5);
    adapt(f, a, mid, half_tol, depth + 1, st);
    adapt(f, mid, b, half_tol, depth + 1, st);
}

/// Adaptive integration over a finite interval to absolute tolerance `tol`.
pub fn integrate_interval<R, V, F>(f: F, a: R, b: R, tol: R) -> Result<V>
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    integrate_interval_budget(f, a, b, tol, 400_000)
}

pub fn integrate_interval_budget<R, V, F>(f: F, a: R, b: R, tol: R, budget: usize) -> Result<V>
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(CoreError::Domain("integration bounds must be finite".into()));
    }
    if tol <= R::zero() {
        return Err(CoreError::InvalidInput("tolerance must be positive".into()));
    }
    if a == b {
        return Ok(V::zero());
    }
    let mut st = AdaptiveState {
        sum: V::zero(),
        err: R::zero(),
        evals: 0,
        budget,
        exhausted: false,
    };
    adapt(&f, a, b, tol, 0, &mut st);
    if st.exhausted && st.err > tol {
        return Err(CoreError::Convergence {
            estimate: st.sum.norm().as_f64(),
            error_bound: st.err.as_f64(),
            context: "interval quadrature".into(),
        });
    }
    Ok(st.sum)
}

/// Maximum number of panels the semi-infinite driver will lay down.
const MAX_PANELS: usize = 512;

/// Integrate `f` over `[0, ∞)` assuming at least exponential decay with
/// scale `decay_scale`. The interval is tiled by panels of that length,
/// each handled adaptively; panels stop once two consecutive contributions
/// fall below the tolerance. The estimated absolute error (panel errors
/// plus a geometric tail bound) is kept within `tol`.
pub fn integrate_semi_infinite<R, V, F>(f: F, decay_scale: R, tol: R) -> Result<V>
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    integrate_semi_infinite_split(f, decay_scale, tol, &[])
}

/// Like [`integrate_semi_infinite`] but with explicit breakpoints inside the
/// first panel (sharp features far below the decay scale, e.g. a narrow
/// resonance inside a long exponential tail).
pub fn integrate_semi_infinite_split<R, V, F>(
    f: F,
    decay_scale: R,
    tol: R,
    splits: &[R],
) -> Result<V>
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    if !decay_scale.is_finite() || decay_scale <= R::zero() {
        return Err(CoreError::InvalidInput(
            "decay scale must be positive and finite".into(),
        ));
    }
    if !(tol > R::zero()) {
        return Err(CoreError::InvalidInput("tolerance must be positive".into()));
    }

    let h = decay_scale;
    let mut total = V::zero();
    let mut err_acc = R::zero();
    let mut small_run = 0usize;
    let mut converged = false;

    for j in 0..MAX_PANELS {
        let a = h * R::of(j as f64);
        let b = h * R::of((j + 1) as f64);
        let panel_tol = (tol * R::of(0.25) * R::of(0.5f64.powi(j.min(40) as i32)))
            .max(tol * R::of(1e-6));

        let mut st = AdaptiveState {
            sum: V::zero(),
            err: R::zero(),
            evals: 0,
            budget: 200_000,
            exhausted: false,
        };
        if j == 0 && !splits.is_empty() {
            let mut lo = a;
            let sub_tol = panel_tol / R::of((splits.len() + 1) as f64);
            for &s in splits {
                if s > lo && s < b {
                    adapt(&f, lo, s, sub_tol, 0, &mut st);
                    lo = s;
                }
            }
            adapt(&f, lo, b, sub_tol, 0, &mut st);
        } else {
            adapt(&f, a, b, panel_tol, 0, &mut st);
        }
        if st.exhausted && st.err > panel_tol {
            return Err(CoreError::Convergence {
                estimate: total.add(st.sum).norm().as_f64(),
                error_bound: (err_acc + st.err).as_f64(),
                context: format!("semi-infinite quadrature, panel {j}"),
            });
        }

        let contribution = st.sum.norm();
        total = total.add(st.sum);
        err_acc = err_acc + st.err;

        if j >= 3 && contribution < tol * R::of(0.25) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 2 {
            // Exponential decay ⇒ remaining tail is bounded by a geometric
            // series on the last panel's contribution.
            err_acc = err_acc + contribution * R::of(1.2);
            converged = true;
            break;
        }
    }

    if !converged {
        return Err(CoreError::Convergence {
            estimate: total.norm().as_f64(),
            error_bound: err_acc.as_f64(),
            context: "semi-infinite quadrature: panel budget exhausted".into(),
        });
    }
    Ok(total)
}

/// Semi-infinite integration to a relative tolerance: a coarse fixed-panel
/// pass estimates the magnitude, then the adaptive pass runs at the
/// corresponding absolute tolerance. Needed when the integrand's overall
/// scale spans many orders of magnitude (e.g. strongly suppressed
/// excitation probabilities).
pub fn integrate_semi_infinite_rel<R, V, F>(f: F, decay_scale: R, rel_tol: R) -> Result<V>
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    integrate_semi_infinite_rel_split(f, decay_scale, rel_tol, &[])
}

pub fn integrate_semi_infinite_rel_split<R, V, F>(
    f: F,
    decay_scale: R,
    rel_tol: R,
    splits: &[R],
) -> Result<V>
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    let h = decay_scale;
    let mut scale = R::zero();
    for j in 0..24 {
        let a = h * R::of(j as f64);
        let b = h * R::of((j + 1) as f64);
        let (v, _) = gk15(&f, a, b);
        scale = scale.max(v.norm());
        if j == 0 {
            for &s in splits {
                if s > a && s < b {
                    let (v1, _) = gk15(&f, a, s);
                    let (v2, _) = gk15(&f, s, b);
                    scale = scale.max(v1.norm()).max(v2.norm());
                }
            }
        }
    }
    if scale == R::zero() {
        // Integrand indistinguishable from zero on the sampled range.
        return Ok(V::zero());
    }
    let abs_tol = (scale * rel_tol).max(R::of(1e-290));
    integrate_semi_infinite_split(f, decay_scale, abs_tol, splits)
}

/// Adaptive integration with caller-supplied interior breakpoints, for
/// integrands with known narrow features the top-level rule would miss
/// (resonance spikes far narrower than the interval).
pub fn integrate_interval_split<R, V, F>(
    f: F,
    a: R,
    b: R,
    tol: R,
    breaks: &[R],
    budget: usize,
) -> Result<V>
where
    R: Scalar,
    V: QuadValue<R>,
    F: Fn(R) -> V,
{
    let mut pts: Vec<R> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(a);
    edges.extend(pts);
    edges.push(b);

    let sub_tol = tol / R::of(edges.len() as f64);
    let mut total = V::zero();
    for w in edges.windows(2) {
        let v: V = integrate_interval_budget(&f, w[0], w[1], sub_tol, budget)?;
        total = total.add(v);
    }
    Ok(total)
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence. Used for fixed-order angular quadratures.
pub fn gauss_legendre<R: Scalar>(n: usize) -> (Vec<R>, Vec<R>) {
    let mut nodes = vec![R::zero(); n];
    let mut weights = vec![R::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess.
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = R::of(theta.cos());
        let mut dp = R::one();
        for _ in 0..100 {
            // Legendre P_n(x) and its derivative by upward recurrence.
            let mut p0 = R::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = R::of(k as f64);
                let p2 = ((R::of(2.0) * kf - R::one()) * x * p1 - (kf - R::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = R::of(nf) * (x * p1 - p0) / (x * x - R::one());
            let dx = p1 / dp;
            x = x - dx;
            if dx.abs() <= R::epsilon() * R::of(4.0) {
                break;
            }
        }
        let w = R::of(2.0) / ((R::one() - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre::<f64>(12);
        // degree 2n-1 = 23 exact; check x^8 over [-1,1] = 2/9
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_exponential() {
        let v: f64 = integrate_semi_infinite(|k: f64| (-k).exp(), 1.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn gamma_three() {
        let v: f64 = integrate_semi_infinite(|k: f64| k * k * (-k).exp(), 1.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn damped_oscillation() {
        // ∫₀^∞ e^{-k} cos(10k) dk = 1/(1+100)
        let v: f64 =
            integrate_semi_infinite(|k: f64| (-k).exp() * (10.0 * k).cos(), 1.0, 1e-12).unwrap();
        assert!((v - 1.0 / 101.0).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn complex_valued() {
        // ∫₀^∞ e^{-k} e^{-i k} dk = 1/(1+i)
        let v: Complex<f64> = integrate_semi_infinite(
            |k: f64| Complex::new(0.0, -k).exp() * (-k).exp(),
            1.0,
            1e-12,
        )
        .unwrap();
        let expected = Complex::new(0.5, -0.5);
        assert!((v - expected).norm() < 1e-11, "got {v}");
    }

    #[test]
    fn interval_polynomial_is_exact() {
        let v: f64 = integrate_interval(|x: f64| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-13)
            .unwrap();
        // ∫(x³-2x+1) = x⁴/4 - x² + x over [-1,3] = (81/4-9+3) - (1/4-1-1)
        let exact = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn relative_driver_handles_tiny_scales() {
        // Gaussian bump of height 1e-170 centered at k = 3.
        let f = |k: f64| 1e-170 * (-(k - 3.0) * (k - 3.0) / 0.02).exp();
        let v: f64 = integrate_semi_infinite_rel(f, 1.0, 1e-9).unwrap();
        let exact = 1e-170 * (0.02 * std::f64::consts::PI).sqrt();
        assert!(
            ((v - exact) / exact).abs() < 1e-8,
            "v={v:e} exact={exact:e}"
        );
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(integrate_semi_infinite(|k: f64| k, 0.0, 1e-10).is_err());
        assert!(integrate_semi_infinite(|k: f64| k, 1.0, -1.0).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        // 1/(1+k²) decays only algebraically; the exponential tail bound
        // never engages at this tolerance, so the panel budget runs out.
        let r: Result<f64> = integrate_semi_infinite(|k: f64| 1.0 / (1.0 + k * k), 1.0, 1e-13);
        match r {
            Err(CoreError::Convergence { estimate, .. }) => {
                assert!(estimate > 1.4 && estimate < 1.6, "estimate {estimate}")
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
