//! Time evolution of the sensor + radical pair system: singlet probability,
//! Ramsey contrast of the sensor, and recombination-weighted yields.
//!
//! Propagators follow `U(t) = exp(+iHt)`. The pair starts in the electron
//! singlet with the nucleus in `(1 + p σz)/2`.

pub mod closed_form;
pub mod series;
pub mod spectrum;
pub mod yields;

use rayon::prelude::*;

use crate::eigen::{eigh, HermitianEigen, Propagator};
use crate::error::Result;
use crate::hamiltonian::{branch_hamiltonian, build_hamiltonian, layout_for};
use crate::linalg::{DensityMatrix, Operator};
use crate::params::{RadicalPairParams, SensorLevel};
use crate::scalar::{cr, Cplx, Real};
use crate::spin::{nuclear_state, product_state, singlet_projector, RpState, SystemLayout};

pub use crate::eigen::propagator;
pub use closed_form::{
    contrast_yield_closed_form, sensor_contrast_closed_form, timmel_singlet_analytic, ClosedFormFrequencies,
};
pub use series::{TimeGrid, TimeSeries};
pub use spectrum::Spectrum;
pub use yields::{yield_with_recombination, LaplaceQuadrature, YieldEstimate};

/// Raw Ramsey contrast at `t = 0`.
pub const CONTRAST_AT_ZERO: f64 = 4.0;

/// Sensor preparation for evolutions on the full space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SensorState {
    /// Sensor in a definite `Sz` eigenstate.
    Level(SensorLevel),
    /// `(|0> + |m>)/√2` with `m` the active level of the subspace.
    Superposition,
}

impl SensorState {
    pub fn density<T: Real>(self, p: &RadicalPairParams<T>) -> DensityMatrix<T> {
        let mut psi = [Cplx::<T>::new(T::zero(), T::zero()); 3];
        match self {
            SensorState::Level(level) => psi[level.index()] = cr(T::one()),
            SensorState::Superposition => {
                let r = cr(T::one() / T::lit(2.0).sqrt());
                psi[SensorLevel::Zero.index()] = r;
                psi[p.subspace.active().index()] = r;
            }
        }
        DensityMatrix::pure(&psi)
    }
}

/// Initial state on the layout of `p`: electron singlet, polarized nuclei,
/// and the sensor (when given).
pub fn initial_state<T: Real>(
    p: &RadicalPairParams<T>,
    sensor: Option<SensorState>,
) -> Result<(SystemLayout, DensityMatrix<T>)> {
    initial_state_for(p, sensor, RpState::Singlet)
}

pub(crate) fn initial_state_for<T: Real>(
    p: &RadicalPairParams<T>,
    sensor: Option<SensorState>,
    pair: RpState,
) -> Result<(SystemLayout, DensityMatrix<T>)> {
    p.validate()?;
    let layout = layout_for(p, sensor.is_some());
    let sensor_rho = sensor.map(|s| s.density(p));
    let rho = product_state(
        &layout,
        sensor_rho.as_ref(),
        &pair.density(),
        &nuclear_state(p.nuclear_polarization),
    )?;
    Ok((layout, rho))
}

/// `<S| ρ_AB |S>` of the electron-pair reduced state of `rho`.
pub fn singlet_population<T: Real>(layout: &SystemLayout, rho: &DensityMatrix<T>) -> Result<T> {
    let (ia, ib) = layout.electron_indices()?;
    let pair = rho.partial_trace(&[ia, ib])?;
    let s = RpState::Singlet.amplitudes::<T>();
    Ok(pair.as_operator().sandwich(&s, &s).re)
}

/// Singlet probability `P_S(t)` from explicit evolution of the full density
/// matrix. With a sensor, the full Hamiltonian acts on `S ⊗ A ⊗ B ⊗ N` and
/// the sensor is traced out together with the nucleus.
pub fn singlet_probability_series<T: Real>(
    p: &RadicalPairParams<T>,
    grid: &TimeGrid<T>,
    sensor: Option<SensorState>,
) -> Result<TimeSeries<T>> {
    let (layout, rho0) = initial_state(p, sensor)?;
    let prop = Propagator::new(&build_hamiltonian(p, sensor.is_some())?)?;
    let times = grid.times();
    let values = times
        .par_iter()
        .map(|&t| singlet_population(&layout, &rho0.evolve(&prop.at(t))))
        .collect::<Result<Vec<T>>>()?;
    TimeSeries::new(times, values)
}

/// `P_S(t)` for the pair evolving under the branch Hamiltonian of `level`,
/// as an exact spectral sum.
pub fn branch_singlet_spectrum<T: Real>(p: &RadicalPairParams<T>, level: SensorLevel) -> Result<Spectrum<T>> {
    let (layout, rho0) = initial_state(p, None)?;
    let eig = eigh(&branch_hamiltonian(p, level)?)?;
    Ok(Spectrum::expectation(
        &eig,
        rho0.as_operator(),
        &singlet_projector(&layout)?,
    ))
}

/// `P_S(t)` starting from an arbitrary pair state under `eig`.
pub(crate) fn singlet_spectrum_from<T: Real>(
    layout: &SystemLayout,
    eig: &HermitianEigen<T>,
    rho: &Operator<T>,
) -> Result<Spectrum<T>> {
    Ok(Spectrum::expectation(eig, rho, &singlet_projector(layout)?))
}

pub(crate) fn spectral_quadrature<T: Real>(s: &Spectrum<T>) -> LaplaceQuadrature<T> {
    LaplaceQuadrature {
        bound: Some(s.bound()),
        frequency_hint: Some(s.max_frequency()),
        ..LaplaceQuadrature::default()
    }
}

/// Recombination-weighted singlet yield of one sensor branch.
pub fn branch_singlet_yield<T: Real>(p: &RadicalPairParams<T>, level: SensorLevel) -> Result<T> {
    let s = branch_singlet_spectrum(p, level)?;
    Ok(spectral_quadrature(&s)
        .average(|t| s.eval(t), p.kappa_tilde())?
        .value)
}

/// `Φ_S = (Φ_S^0 + Φ_S^m)/2` for a sensor prepared in `(|0> + |m>)/√2`.
pub fn sensor_averaged_singlet_yield<T: Real>(p: &RadicalPairParams<T>) -> Result<T> {
    let zero = branch_singlet_yield(p, SensorLevel::Zero)?;
    let active = branch_singlet_yield(p, p.subspace.active())?;
    Ok((zero + active) * T::lit(0.5))
}

/// Raw and normalized (`raw / 4`) sensor contrast.
#[derive(Clone, Debug, PartialEq)]
pub struct ContrastSeries<T: Real> {
    pub raw: TimeSeries<T>,
    pub normalized: TimeSeries<T>,
}

fn branch_pair<T: Real>(p: &RadicalPairParams<T>) -> Result<(Operator<T>, Operator<T>)> {
    Ok((
        branch_hamiltonian(p, SensorLevel::Zero)?,
        branch_hamiltonian(p, p.subspace.active())?,
    ))
}

/// Ramsey contrast `C_Φ(t) = 4 Re Tr[e^{iH₀t} ρ e^{-iH₁t}]` on the pair
/// space, where `H₁` is `H₀` at the field of the active sensor level.
pub fn sensor_contrast_numeric<T: Real>(p: &RadicalPairParams<T>, grid: &TimeGrid<T>) -> Result<ContrastSeries<T>> {
    let (_, rho0) = initial_state(p, None)?;
    let (h0, h1) = branch_pair(p)?;
    let (u0, u1) = (Propagator::new(&h0)?, Propagator::new(&h1)?);
    let rho = rho0.as_operator();
    let scale = T::lit(CONTRAST_AT_ZERO);
    let times = grid.times();
    let raw: Vec<T> = times
        .par_iter()
        .map(|&t| {
            let left = u0.at(t).matmul(rho);
            let right = u1.at(-t);
            let n = left.dim();
            let mut acc = T::zero();
            for i in 0..n {
                for k in 0..n {
                    acc = acc + (left.get(i, k) * right.get(k, i)).re;
                }
            }
            acc * scale
        })
        .collect();
    let normalized = raw.iter().map(|&v| v / scale).collect();
    Ok(ContrastSeries {
        raw: TimeSeries::new(times.clone(), raw)?,
        normalized: TimeSeries::new(times, normalized)?,
    })
}

/// Raw contrast `C_Φ(t)` as a spectral sum (same quantity as
/// [`sensor_contrast_numeric`]).
pub fn contrast_spectrum<T: Real>(p: &RadicalPairParams<T>) -> Result<Spectrum<T>> {
    let (_, rho0) = initial_state(p, None)?;
    let (h0, h1) = branch_pair(p)?;
    Ok(Spectrum::overlap(
        &eigh(&h0)?,
        &eigh(&h1)?,
        rho0.as_operator(),
        T::lit(CONTRAST_AT_ZERO),
    ))
}

/// Raw recombination-weighted contrast `κ̃ ∫ C_Φ(t) e^{-κ̃t} dt` by quadrature.
pub fn contrast_yield<T: Real>(p: &RadicalPairParams<T>) -> Result<T> {
    let s = contrast_spectrum(p)?;
    Ok(spectral_quadrature(&s)
        .average(|t| s.eval(t), p.kappa_tilde())?
        .value)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldScanPoint<T: Real> {
    pub omega: T,
    /// `(Φ_S^0 + Φ_S^m)/2`.
    pub phi_s: T,
    pub phi_s_zero: T,
    pub phi_s_active: T,
    /// Normalized contrast yield (`raw / 4`).
    pub contrast_yield: T,
}

/// Recombination-weighted singlet yield and contrast yield over a list of
/// external fields. Other parameters are taken from `p`.
pub fn field_scan<T: Real>(p: &RadicalPairParams<T>, omegas: &[T]) -> Result<Vec<FieldScanPoint<T>>> {
    p.validate()?;
    omegas
        .par_iter()
        .map(|&omega| {
            let q = p.with_omega(omega);
            let phi_s_zero = branch_singlet_yield(&q, SensorLevel::Zero)?;
            let phi_s_active = branch_singlet_yield(&q, q.subspace.active())?;
            let contrast = contrast_yield(&q)? / T::lit(CONTRAST_AT_ZERO);
            Ok(FieldScanPoint {
                omega,
                phi_s: (phi_s_zero + phi_s_active) * T::lit(0.5),
                phi_s_zero,
                phi_s_active,
                contrast_yield: contrast,
            })
        })
        .collect()
}

/// `n` evenly spaced values over `[lo, hi]` (a single `lo` when `n == 1`).
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = n - 1;
            (0..n)
                .map(|i| {
                    if i == last {
                        hi
                    } else {
                        lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(last)
                    }
                })
                .collect()
        }
    }
}
