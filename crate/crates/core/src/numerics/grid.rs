//! Uniform time grids and sampled response kernels.

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

/// Uniform time grid: samples `t0 + i*dt` for `i in 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid<R: Scalar> {
    t0: R,
    dt: R,
    n: usize,
}

impl<R: Scalar> TimeGrid<R> {
    pub fn new(t0: R, dt: R, n: usize) -> Result<Self> {
        if !t0.is_finite() || !dt.is_finite() {
            return Err(CoreError::InvalidInput("time grid must be finite".into()));
        }
        if dt <= R::zero() {
            return Err(CoreError::InvalidInput(format!(
                "time step must be positive, got {dt}"
            )));
        }
        if n < 2 {
            return Err(CoreError::InvalidInput(format!(
                "grid needs at least 2 samples, got {n}"
            )));
        }
        Ok(Self { t0, dt, n })
    }

    /// Grid covering `[0, span]` with at least `min_per_unit` samples per
    /// unit of the fastest time scale `1/rate`.
    pub fn from_span(span: R, rate: R, min_per_unit: usize) -> Result<Self> {
        if span <= R::zero() || rate <= R::zero() {
            return Err(CoreError::InvalidInput(
                "span and rate must be positive".into(),
            ));
        }
        let dt = (rate.recip()) / R::of(min_per_unit as f64);
        let n = (span / dt).ceil().as_f64() as usize + 1;
        Self::new(R::zero(), dt, n.max(2))
    }

    #[inline]
    pub fn t0(&self) -> R {
        self.t0
    }

    #[inline]
    pub fn dt(&self) -> R {
        self.dt
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // n >= 2 by construction
    }

    #[inline]
    pub fn time(&self, i: usize) -> R {
        self.t0 + self.dt * R::of(i as f64)
    }

    pub fn times(&self) -> impl Iterator<Item = R> + '_ {
        (0..self.n).map(move |i| self.time(i))
    }

    /// Last grid time.
    pub fn span_end(&self) -> R {
        self.time(self.n - 1)
    }
}

/// Sampled solution of the memory-kernel oscillator equation:
/// `u`, `u̇` and `ü` on a uniform grid, with u(0)=0, u̇(0)=1 at the grid start.
#[derive(Debug, Clone)]
pub struct ResponseKernel<R: Scalar> {
    pub grid: TimeGrid<R>,
    pub u: Vec<R>,
    pub du: Vec<R>,
    pub ddu: Vec<R>,
}

impl<R: Scalar> ResponseKernel<R> {
    pub fn new(grid: TimeGrid<R>, u: Vec<R>, du: Vec<R>, ddu: Vec<R>) -> Result<Self> {
        let n = grid.len();
        for (name, s) in [("u", &u), ("du", &du), ("ddu", &ddu)] {
            if s.len() != n {
                return Err(CoreError::GridMismatch {
                    expected: n,
                    found: s.len(),
                });
            }
            let _ = name;
        }
        Ok(Self { grid, u, du, ddu })
    }

    /// Verify the initial conditions u(0)=0, u̇(0)=1 within `tol`.
    pub fn check_initial_conditions(&self, tol: R) -> Result<()> {
        if self.u[0].abs() >= tol || (self.du[0] - R::one()).abs() >= tol {
            return Err(CoreError::Data(format!(
                "initial conditions violated: u(0)={}, du(0)={}",
                self.u[0], self.du[0]
            )));
        }
        Ok(())
    }
}
