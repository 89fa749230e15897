//! Sensor-assisted detection of a single radical pair.
//!
//! A spin-1 sensor couples to both electrons of a radical pair through
//! `g S^z (S_Az + S_Bz)`. The pair starts in the singlet with one spin-1/2
//! nucleus on electron A and recombines at rate `κ`. Frequencies, rates and
//! times are in units of the hyperfine constant `h_A` unless a function says
//! otherwise.
//!
//! The numeric core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod cli;
pub mod control;
pub mod dynamics;
pub mod eigen;
pub mod ensemble;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod params;
pub mod planner;
pub mod report;
pub mod scalar;
pub mod spin;
pub mod units;

pub use error::{Error, Result};
pub use params::{SensorLevel, SensorSubspace};
pub use spin::{RpState, Slot, SystemLayout};

pub type Complex = scalar::Cplx<f64>;
pub type Operator = linalg::Operator<f64>;
pub type DensityMatrix = linalg::DensityMatrix<f64>;
pub type RadicalPairParams = params::RadicalPairParams<f64>;
pub type TimeGrid = dynamics::TimeGrid<f64>;
pub type TimeSeries = dynamics::TimeSeries<f64>;
pub type Spectrum = dynamics::Spectrum<f64>;
pub type Pulse = control::Pulse<f64>;
pub type PulseSequence = control::PulseSequence<f64>;
