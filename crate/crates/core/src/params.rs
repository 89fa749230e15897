//! Physical parameters of one sensor + radical pair instance.
//!
//! All frequencies are angular and usually expressed in units of the
//! hyperfine constant `h_a`; rates share that unit.

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Sensor spin projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SensorLevel {
    Plus,
    Zero,
    Minus,
}

impl SensorLevel {
    /// Eigenvalue `m` of the sensor `Sz`.
    pub fn m<T: Real>(self) -> T {
        match self {
            SensorLevel::Plus => T::one(),
            SensorLevel::Zero => T::zero(),
            SensorLevel::Minus => -T::one(),
        }
    }

    /// Basis index in `|+1>, |0>, |-1>` order.
    pub fn index(self) -> usize {
        match self {
            SensorLevel::Plus => 0,
            SensorLevel::Zero => 1,
            SensorLevel::Minus => 2,
        }
    }
}

/// Two-level computational subspace of the sensor: `{|0>, |+1>}` or
/// `{|0>, |-1>}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SensorSubspace {
    #[default]
    Plus,
    Minus,
}

impl SensorSubspace {
    /// The non-zero level of the subspace.
    pub fn active(self) -> SensorLevel {
        match self {
            SensorSubspace::Plus => SensorLevel::Plus,
            SensorSubspace::Minus => SensorLevel::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadicalPairParams<T: Real> {
    /// Hyperfine coupling of electron A to its nucleus.
    pub h_a: T,
    /// Hyperfine coupling of electron B; non-zero adds a second nucleus.
    pub h_b: T,
    /// Electron Larmor frequency multiplying `S_Az + S_Bz`.
    pub omega: T,
    /// Sensor–pair coupling multiplying `S^z (S_Az + S_Bz)`.
    pub g: T,
    /// Singlet recombination rate.
    pub kappa: T,
    /// Sensor relaxation rate.
    pub gamma: T,
    /// Nuclear polarization `p` in `(1 + p σz)/2`.
    pub nuclear_polarization: T,
    pub subspace: SensorSubspace,
}

impl<T: Real> RadicalPairParams<T> {
    /// Parameters in units of `h_a = 1` with every other quantity zero.
    pub fn unit_hyperfine() -> Self {
        Self {
            h_a: T::one(),
            h_b: T::zero(),
            omega: T::zero(),
            g: T::zero(),
            kappa: T::zero(),
            gamma: T::zero(),
            nuclear_polarization: T::zero(),
            subspace: SensorSubspace::Plus,
        }
    }

    /// Coupling `0.1 h_a` and recombination `0.01 h_a` at the given field.
    pub fn reference(omega: T) -> Self {
        Self {
            omega,
            g: T::lit(0.1),
            kappa: T::lit(0.01),
            ..Self::unit_hyperfine()
        }
    }

    pub fn with_omega(mut self, omega: T) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_g(mut self, g: T) -> Self {
        self.g = g;
        self
    }

    pub fn with_kappa(mut self, kappa: T) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_polarization(mut self, p: T) -> Self {
        self.nuclear_polarization = p;
        self
    }

    pub fn with_subspace(mut self, subspace: SensorSubspace) -> Self {
        self.subspace = subspace;
        self
    }

    /// Effective decay rate `κ + γ`.
    pub fn kappa_tilde(&self) -> T {
        self.kappa + self.gamma
    }

    /// Field seen by the pair when the sensor sits in `level`.
    pub fn branch_field(&self, level: SensorLevel) -> T {
        self.omega + level.m::<T>() * self.g
    }

    /// Signed coupling toward the active subspace level.
    pub fn signed_g(&self) -> T {
        self.subspace.active().m::<T>() * self.g
    }

    pub fn has_nucleus_b(&self) -> bool {
        self.h_b != T::zero()
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("h_a", self.h_a),
            ("h_b", self.h_b),
            ("omega", self.omega),
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("nuclear_polarization", self.nuclear_polarization),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(invalid(field, "must be finite"));
            }
        }
        if self.h_a <= T::zero() {
            return Err(invalid("h_a", "must be positive"));
        }
        if self.kappa < T::zero() {
            return Err(invalid("kappa", "must be non-negative"));
        }
        if self.gamma < T::zero() {
            return Err(invalid("gamma", "must be non-negative"));
        }
        if self.nuclear_polarization.abs() > T::one() {
            return Err(invalid("nuclear_polarization", "must lie in [-1, 1]"));
        }
        Ok(())
    }
}
