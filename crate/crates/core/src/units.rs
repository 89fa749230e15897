//! Conversion between physical units and hyperfine units (`h_A = 1`).

use std::f64::consts::TAU;

use crate::error::{invalid, Result};

/// Electron gyromagnetic ratio in rad s⁻¹ T⁻¹ (CODATA 2018).
pub const GAMMA_E: f64 = 1.760_859_630_23e11;

/// Hyperfine constant used for physical-unit defaults, in Hz.
pub const DEFAULT_HYPERFINE_HZ: f64 = 14.0e6;

/// Field used for physical-unit defaults, in tesla.
pub const DEFAULT_FIELD_T: f64 = 50.0e-6;

/// Angular frequency of a cyclic frequency in Hz.
pub fn angular(hz: f64) -> f64 {
    TAU * hz
}

/// Larmor term `ω = 2γ_e B` in rad/s.
pub fn omega_from_field(tesla: f64) -> f64 {
    2.0 * GAMMA_E * tesla
}

pub fn field_from_omega(omega: f64) -> f64 {
    omega / (2.0 * GAMMA_E)
}

/// Scale factor between the two unit systems: the angular hyperfine
/// constant `h_A` in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperfineScale {
    pub h_a: f64,
}

impl HyperfineScale {
    pub fn from_hz(hyperfine_hz: f64) -> Result<Self> {
        if !(hyperfine_hz > 0.0 && hyperfine_hz.is_finite()) {
            return Err(invalid("h_a", "hyperfine frequency must be positive"));
        }
        Ok(Self {
            h_a: angular(hyperfine_hz),
        })
    }

    /// Angular frequency (rad/s) or rate (1/s) to `h_A` units.
    pub fn rate(&self, per_second: f64) -> f64 {
        per_second / self.h_a
    }

    /// Cyclic frequency in Hz to `h_A` units.
    pub fn frequency_hz(&self, hz: f64) -> f64 {
        angular(hz) / self.h_a
    }

    pub fn field(&self, tesla: f64) -> f64 {
        omega_from_field(tesla) / self.h_a
    }

    pub fn field_back(&self, omega: f64) -> f64 {
        field_from_omega(omega * self.h_a)
    }

    /// Seconds to `1/h_A`.
    pub fn time(&self, seconds: f64) -> f64 {
        seconds * self.h_a
    }

    pub fn time_back(&self, t: f64) -> f64 {
        t / self.h_a
    }
}
