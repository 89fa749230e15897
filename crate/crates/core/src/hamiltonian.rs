//! Spin Hamiltonian of a radical pair coupled to a spin-1 sensor:
//!
//! `H = h_A I_A·S_A + h_B I_B·S_B + ω (S_Az + S_Bz) + g S^z (S_Az + S_Bz)`.
//!
//! Because the sensor enters only through `S^z`, `H` is block diagonal in
//! the sensor basis and the block for level `m` is the bare pair
//! Hamiltonian at the shifted field `ω + m g`.

use crate::error::Result;
use crate::linalg::Operator;
use crate::params::{RadicalPairParams, SensorLevel};
use crate::scalar::{Cplx, Real};
use crate::spin::{spin_operators, Slot, SystemLayout};

/// Layout matching the parameters (a second nucleus only when `h_b != 0`).
pub fn layout_for<T: Real>(p: &RadicalPairParams<T>, include_sensor: bool) -> SystemLayout {
    if include_sensor {
        SystemLayout::with_sensor(p.has_nucleus_b())
    } else {
        SystemLayout::radical_pair(p.has_nucleus_b())
    }
}

/// Full Hamiltonian on `S ⊗ A ⊗ B ⊗ N` or, without the sensor, the
/// zero-sensor block `H₀` on `A ⊗ B ⊗ N`.
pub fn build_hamiltonian<T: Real>(p: &RadicalPairParams<T>, include_sensor: bool) -> Result<Operator<T>> {
    p.validate()?;
    let layout = layout_for(p, include_sensor);
    let mut h = pair_hamiltonian(&layout, p, p.omega)?;
    if include_sensor && p.g != T::zero() {
        let sensor = spin_operators::<T>(3)?;
        let e = spin_operators::<T>(2)?;
        let a = layout.embed(&[(Slot::Sensor, &sensor.z), (Slot::ElectronA, &e.z)])?;
        let b = layout.embed(&[(Slot::Sensor, &sensor.z), (Slot::ElectronB, &e.z)])?;
        h = &h + &(&a + &b).scale_real(p.g);
    }
    Ok(h)
}

/// Pair Hamiltonian with the sensor frozen in `level`: `H₀(ω + m g)`.
pub fn branch_hamiltonian<T: Real>(p: &RadicalPairParams<T>, level: SensorLevel) -> Result<Operator<T>> {
    p.validate()?;
    let layout = layout_for(p, false);
    pair_hamiltonian(&layout, p, p.branch_field(level))
}

/// `h_A I_A·S_A (+ h_B I_B·S_B) + field (S_Az + S_Bz)` on any layout holding
/// the pair.
pub(crate) fn pair_hamiltonian<T: Real>(
    layout: &SystemLayout,
    p: &RadicalPairParams<T>,
    field: T,
) -> Result<Operator<T>> {
    let mut h = layout
        .spin_dot::<T>(Slot::NucleusA, Slot::ElectronA)?
        .scale_real(p.h_a);
    if p.has_nucleus_b() {
        let hb = layout
            .spin_dot::<T>(Slot::NucleusB, Slot::ElectronB)?
            .scale_real(p.h_b);
        h = &h + &hb;
    }
    if field != T::zero() {
        h = &h + &layout.electron_sz_total::<T>()?.scale_real(field);
    }
    Ok(h)
}

/// Block of a full (sensor-first) operator between two sensor levels,
/// as an operator on the remaining slots.
pub fn sensor_block<T: Real>(
    full: &Operator<T>,
    row: SensorLevel,
    col: SensorLevel,
) -> Result<Operator<T>> {
    let dims = full.subsystem_dims();
    let rest: Vec<usize> = dims[1..].to_vec();
    let n: usize = rest.iter().product();
    let (r0, c0) = (row.index() * n, col.index() * n);
    let data: Vec<Cplx<T>> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| full.get(r0 + i, c0 + j))
        .collect();
    Operator::from_vec(n, data)?.with_dims(&rest)
}
