//! Shared numerical infrastructure: Dawson function, adaptive quadrature
//! for damped (possibly oscillatory) semi-infinite integrands, and the
//! product-integration Volterra stepper.
//!
//! Everything here is a pure function of its inputs and deterministic for
//! fixed inputs; concurrent use is unrestricted.

mod dawson;
mod grid;
pub mod quad;
mod volterra;

pub use dawson::dawson;
pub use grid::{ResponseKernel, TimeGrid};
pub use quad::{
    integrate_interval, integrate_semi_infinite, integrate_semi_infinite_rel,
    integrate_semi_infinite_rel_split, integrate_semi_infinite_split,
};
pub use volterra::{solve_volterra, VolterraOptions};
