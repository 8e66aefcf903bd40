//! Bang-bang control pulse synthesis for N-level quantum systems.
//!
//! The library turns state-transfer and unitary-implementation problems into
//! executable piecewise-constant pulse schedules:
//!
//! - [`hypersphere`] converts complex unit vectors to and from complex
//!   hyperspherical coordinates, the geometric backbone of the synthesis.
//! - [`controls`] defines the Z/X/Y control channels and their closed-form
//!   rotation unitaries.
//! - [`transfer`] builds the rotation sequence steering one pure state to
//!   another, including the X-control phase-corrected variant, concurrent
//!   phase-block compression, and W-state preparation.
//! - [`timeenergy`] evaluates and optimizes the time-energy performance
//!   index and exposes the closed-form optimal amplitude.
//! - [`unitary`] factors an arbitrary unitary into a bang-bang program via
//!   eigendecomposition and hyperspherical deflation.
//! - [`simulator`] propagates states and operators under schedules and is
//!   the independent verification engine for every synthesis path.
//!
//! All numeric code is generic over the scalar type through
//! [`scalar::Scalar`]; `f64` aliases for the main types live at the crate
//! root.

pub mod controls;
pub mod error;
pub mod hypersphere;
pub mod io;
pub mod numerics;
pub mod scalar;
pub mod schedule;
pub mod simulator;
pub mod timeenergy;
pub mod transfer;
pub mod unitary;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

// re-exported so downstream code can name the complex scalar types without
// pinning its own copy of the dependency
pub use num_complex;

/// Complex scalar at the default precision.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix at the default precision.
pub type Matrix64 = numerics::ComplexMatrix<f64>;
/// Dense complex vector at the default precision.
pub type Vector64 = numerics::ComplexVector<f64>;
/// Hyperspherical coordinates at the default precision.
pub type Coords64 = hypersphere::HypersphericalCoords<f64>;
/// Rotation sequence at the default precision.
pub type Sequence64 = transfer::RotationSequence<f64>;
/// Pulse schedule at the default precision.
pub type Schedule64 = schedule::Schedule<f64>;
/// Time-energy report at the default precision.
pub type Report64 = timeenergy::TimeEnergyReport<f64>;
/// Unitary factorization at the default precision.
pub type Factorization64 = unitary::UnitaryFactorization<f64>;

/// Single-precision aliases for the embedded/GPU-leaning use cases.
pub type Matrix32 = numerics::ComplexMatrix<f32>;
pub type Vector32 = numerics::ComplexVector<f32>;
pub type Coords32 = hypersphere::HypersphericalCoords<f32>;
