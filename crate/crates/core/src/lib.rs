//! Numerical laboratory for pointlike detectors coupled to a massless
//! scalar field.
//!
//! Three detector models share one numerical core:
//!
//! - [`von_neumann`]: a strongly coupled pointer variable reading out
//!   spacetime-smeared field amplitudes, with its intrinsic noise floor.
//! - [`udw`]: a multi-level system excited at leading order in the
//!   coupling; vacuum (switching) noise and one-particle signal.
//! - [`qbm`]: an exactly solvable oscillator detector with memory-kernel
//!   dynamics, interpolating between amplitude (antenna) readout at strong
//!   damping and resonant particle absorption at weak damping.
//!
//! The numerical core is generic over the floating-point scalar via
//! [`scalar::Scalar`]; concrete f64 aliases are exported at the crate root.
//! All stated tolerances assume f64. Natural units ħ = c = 1 throughout;
//! one reference energy scale fixes all dimensions.

pub mod error;
pub mod field;
pub mod numerics;
pub mod qbm;
pub mod scalar;
pub mod udw;
pub mod von_neumann;

pub use error::{CoreError, Result};
pub use scalar::Scalar;

/// Complex number over the default scalar.
pub type Complex64 = num_complex::Complex<f64>;

pub type TimeGrid64 = numerics::TimeGrid<f64>;
pub type ResponseKernel64 = numerics::ResponseKernel<f64>;
pub type SmearingProfile64 = field::SmearingProfile<f64>;
pub type FormFactor64 = field::FormFactor<f64>;
pub type Dispersion64 = field::Dispersion<f64>;
pub type Wavepacket64 = field::Wavepacket<f64>;
pub type ApparatusState64 = von_neumann::ApparatusState<f64>;
pub type PointerReadout64 = von_neumann::PointerReadout<f64>;
pub type DetectorSpectrum64 = udw::DetectorSpectrum<f64>;
pub type ExcitationResult64 = udw::ExcitationResult<f64>;
// TEMP pub type QbmDetector64 = qbm::QbmDetector<f64>;
// TEMP pub type MomentTrace64 = qbm::MomentTrace<f64>;
