//! Pulse sequences on the sensor + pair system: ideal pulses, stroboscopic
//! π trains, echo-based pair-state discrimination and field nulling.
//!
//! Pulses are instantaneous rotations `exp(+iθ n·S)`. Sensor pulses act on
//! the two-level subspace `(|0>, |m>)` and leave the third level untouched.

use rayon::prelude::*;

use crate::dynamics::{
    branch_singlet_yield, initial_state_for, singlet_population, singlet_spectrum_from, SensorState,
    TimeSeries,
};
use crate::eigen::{eigh, Propagator};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{build_hamiltonian, layout_for, sensor_block};
use crate::linalg::{DensityMatrix, Operator};
use crate::params::{RadicalPairParams, SensorLevel};
use crate::scalar::{c, cr, Cplx, Real};
use crate::spin::{spin_operators, RpState, Slot, SystemLayout};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PulseTarget {
    Sensor,
    ElectronA,
    ElectronB,
    BothElectrons,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pulse<T: Real> {
    pub target: PulseTarget,
    pub axis: Axis,
    pub angle: T,
    /// Instantaneous and perfect. Only ideal pulses are supported.
    pub ideal: bool,
}

impl<T: Real> Pulse<T> {
    pub fn new(target: PulseTarget, axis: Axis, angle: T) -> Self {
        Self {
            target,
            axis,
            angle,
            ideal: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let two_pi = T::TAU();
        if !(self.angle > -two_pi && self.angle <= two_pi) {
            return Err(invalid("angle", "must lie in (-2π, 2π]"));
        }
        if !self.ideal {
            return Err(invalid("ideal", "finite-duration pulses are not supported"));
        }
        Ok(())
    }

    /// `cos(θ/2) 1 + i sin(θ/2) σ_axis` in the basis `(first, second)`.
    fn two_level(&self) -> [[Cplx<T>; 2]; 2] {
        let (s, co) = (self.angle * T::lit(0.5)).sin_cos();
        match self.axis {
            Axis::X => [[cr(co), c(T::zero(), s)], [c(T::zero(), s), cr(co)]],
            Axis::Y => [[cr(co), cr(s)], [cr(-s), cr(co)]],
        }
    }

    /// Unitary on `layout`.
    pub fn unitary(&self, layout: &SystemLayout, p: &RadicalPairParams<T>) -> Result<Operator<T>> {
        self.validate()?;
        let r = self.two_level();
        match self.target {
            PulseTarget::Sensor => {
                let (a, b) = (SensorLevel::Zero.index(), p.subspace.active().index());
                let mut s = Operator::identity(&[3]);
                s.set(a, a, r[0][0]);
                s.set(a, b, r[0][1]);
                s.set(b, a, r[1][0]);
                s.set(b, b, r[1][1]);
                layout.embed(&[(Slot::Sensor, &s)])
            }
            target => {
                // Electron basis (|↑>, |↓>).
                let e = Operator::from_fn(2, |i, j| r[i][j]);
                let slots: &[Slot] = match target {
                    PulseTarget::ElectronA => &[Slot::ElectronA],
                    PulseTarget::ElectronB => &[Slot::ElectronB],
                    _ => &[Slot::ElectronA, Slot::ElectronB],
                };
                let factors: Vec<(Slot, &Operator<T>)> = slots.iter().map(|&s| (s, &e)).collect();
                layout.embed(&factors)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Event<T: Real> {
    Free(T),
    Pulse(Pulse<T>),
}

/// Events in time order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSequence<T: Real> {
    pub events: Vec<Event<T>>,
}

impl<T: Real> PulseSequence<T> {
    pub fn new() -> Self {
        Self { events: Vec::new() }
    }

    pub fn free(mut self, duration: T) -> Self {
        self.events.push(Event::Free(duration));
        self
    }

    pub fn pulse(mut self, target: PulseTarget, axis: Axis, angle: T) -> Self {
        self.events.push(Event::Pulse(Pulse::new(target, axis, angle)));
        self
    }

    pub fn total_duration(&self) -> T {
        self.events.iter().fold(T::zero(), |s, e| match e {
            Event::Free(t) => s + *t,
            Event::Pulse(_) => s,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.events {
            match e {
                Event::Free(t) if !(*t >= T::zero() && t.is_finite()) => {
                    return Err(invalid("duration", "must be finite and non-negative"))
                }
                Event::Pulse(p) => p.validate()?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Product of all event unitaries, latest on the left, with free
    /// evolution generated by `hamiltonian` on `layout`.
    pub fn unitary_with(
        &self,
        layout: &SystemLayout,
        hamiltonian: &Operator<T>,
        p: &RadicalPairParams<T>,
    ) -> Result<Operator<T>> {
        self.validate()?;
        let n = layout.total_dim();
        if hamiltonian.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: hamiltonian.dim(),
            });
        }
        let free = if self.events.iter().any(|e| matches!(e, Event::Free(_))) {
            Some(Propagator::new(hamiltonian)?)
        } else {
            None
        };
        let mut u = Operator::identity(&layout.dims());
        for e in &self.events {
            let step = match e {
                Event::Free(t) => free.as_ref().expect("built above").at(*t),
                Event::Pulse(pulse) => pulse.unitary(layout, p)?,
            };
            u = step.matmul(&u);
        }
        Ok(u)
    }
}

/// Layout matching the dimension of `rho0`: with sensor, or pair only.
fn layout_for_state<T: Real>(p: &RadicalPairParams<T>, dim: usize) -> Result<(SystemLayout, bool)> {
    let with = layout_for(p, true);
    if with.total_dim() == dim {
        return Ok((with, true));
    }
    let without = layout_for(p, false);
    if without.total_dim() == dim {
        return Ok((without, false));
    }
    Err(Error::DimensionMismatch {
        expected: with.total_dim(),
        found: dim,
    })
}

/// Unitary of `seq` under the full Hamiltonian of `p`.
pub fn sequence_unitary<T: Real>(
    seq: &PulseSequence<T>,
    p: &RadicalPairParams<T>,
    include_sensor: bool,
) -> Result<Operator<T>> {
    let layout = layout_for(p, include_sensor);
    seq.unitary_with(&layout, &build_hamiltonian(p, include_sensor)?, p)
}

/// `ρ → U ρ U†` for the sequence unitary. The layout (with or without the
/// sensor) is inferred from the dimension of `rho0`.
pub fn apply_sequence<T: Real>(
    seq: &PulseSequence<T>,
    rho0: &DensityMatrix<T>,
    p: &RadicalPairParams<T>,
) -> Result<DensityMatrix<T>> {
    let (_, with_sensor) = layout_for_state(p, rho0.dim())?;
    Ok(rho0.evolve(&sequence_unitary(seq, p, with_sensor)?))
}

/// Stroboscopic propagator and its comparison with the two-branch form.
#[derive(Clone, Debug)]
pub struct Stroboscopic<T: Real> {
    /// Literal product `U X U X … U` on the full space.
    pub literal: Operator<T>,
    /// `(U₁U₀)^{M/2}` (block `|m><0|`) and `(U₀U₁)^{M/2}` (block `|0><m|`).
    pub closed_form: [Operator<T>; 2],
    /// Max deviation between the subspace blocks of the literal product
    /// (with the pulse phase `i^{M-1}` removed) and the closed form.
    pub deviation: T,
}

/// `V_M` for `m_pulses` free segments of length `tau` separated by sensor π
/// pulses about x. `M = 0` gives `U(τ)`.
pub fn stroboscopic_evolution<T: Real>(p: &RadicalPairParams<T>, tau: T, m_pulses: usize) -> Result<Stroboscopic<T>> {
    if m_pulses % 2 == 1 {
        return Err(Error::OddSegmentCount(m_pulses));
    }
    if !(tau >= T::zero() && tau.is_finite()) {
        return Err(invalid("tau", "must be finite and non-negative"));
    }
    let h = build_hamiltonian(p, true)?;
    let u = Propagator::new(&h)?.at(tau);
    let (zero, active) = (SensorLevel::Zero, p.subspace.active());
    if m_pulses == 0 {
        let closed_form = [sensor_block(&u, active, active)?, sensor_block(&u, zero, zero)?];
        let dev = sensor_block(&u, active, zero)?.max_abs().max(sensor_block(&u, zero, active)?.max_abs());
        return Ok(Stroboscopic {
            literal: u,
            closed_form,
            deviation: dev,
        });
    }

    let layout = layout_for(p, true);
    let flip = Pulse::new(PulseTarget::Sensor, Axis::X, T::PI()).unitary(&layout, p)?;
    let mut literal = u.clone();
    for _ in 1..m_pulses {
        literal = u.matmul(&flip.matmul(&literal));
    }

    let u0 = sensor_block(&u, zero, zero)?;
    let u1 = sensor_block(&u, active, active)?;
    let (mut a, mut b) = (
        Operator::identity(u0.subsystem_dims()),
        Operator::identity(u0.subsystem_dims()),
    );
    let (u10, u01) = (u1.matmul(&u0), u0.matmul(&u1));
    for _ in 0..m_pulses / 2 {
        a = u10.matmul(&a);
        b = u01.matmul(&b);
    }

    // iσx per pulse: M − 1 pulses contribute i^{M−1}.
    let phase = match (m_pulses - 1) % 4 {
        0 => cr(T::one()),
        1 => c(T::zero(), -T::one()),
        2 => cr(-T::one()),
        _ => c(T::zero(), T::one()),
    };
    let lit_a = sensor_block(&literal, active, zero)?.scale(phase);
    let lit_b = sensor_block(&literal, zero, active)?.scale(phase);
    let deviation = lit_a
        .max_abs_diff(&a)
        .max(lit_b.max_abs_diff(&b))
        .max(sensor_block(&literal, zero, zero)?.max_abs())
        .max(sensor_block(&literal, active, active)?.max_abs());
    let tol = T::tol(1e-12) * T::from_usize_lossy(m_pulses);
    if deviation > tol {
        return Err(Error::IdentityViolation {
            deviation: deviation.as_f64(),
        });
    }
    Ok(Stroboscopic {
        literal,
        closed_form: [a, b],
        deviation,
    })
}

/// `(τ, Φ_S)` sample of a scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YieldPoint<T: Real> {
    pub x: T,
    pub phi_s: T,
}

/// Singlet yield of one sensor-branch history: the pair sits in
/// `levels[k]` during `[kτ, (k+1)τ)` and in the last level afterwards.
fn branch_history_yield<T: Real>(p: &RadicalPairParams<T>, tau: T, levels: &[SensorLevel]) -> Result<T> {
    let (layout, rho0) = initial_state_for(p, None, RpState::Singlet)?;
    let k = p.kappa_tilde();
    if !(k > T::zero()) {
        return Err(Error::NonPositiveRate(k.as_f64()));
    }
    let eigs: Vec<_> = [SensorLevel::Zero, p.subspace.active()]
        .iter()
        .map(|&l| Ok((l, eigh(&crate::hamiltonian::branch_hamiltonian(p, l)?)?)))
        .collect::<Result<_>>()?;
    let eig_of = |l: SensorLevel| &eigs.iter().find(|(x, _)| *x == l).expect("branch level").1;

    let mut rho = rho0.into_operator();
    let mut acc = T::zero();
    let mut start = T::zero();
    for (i, &level) in levels.iter().enumerate() {
        let eig = eig_of(level);
        let s = singlet_spectrum_from(&layout, eig, &rho)?;
        let weight = (-k * start).exp();
        if i + 1 == levels.len() {
            acc = acc + weight * s.laplace_average(k);
        } else {
            acc = acc + weight * s.partial_laplace_average(k, tau);
            let u = eig.apply_fn(|l| crate::scalar::cis(l * tau));
            rho = u.conjugate(&rho);
            start = start + tau;
        }
    }
    Ok(acc)
}

fn alternating_levels(first: SensorLevel, other: SensorLevel, segments: usize) -> Vec<SensorLevel> {
    (0..segments.max(1))
        .map(|i| if i % 2 == 0 { first } else { other })
        .collect()
}

/// Singlet yield with the sensor in `(|0> + |m>)/√2`, flipped between `M`
/// segments of length `τ` and left alone afterwards.
pub fn controlled_yield<T: Real>(p: &RadicalPairParams<T>, tau: T, m_pulses: usize) -> Result<T> {
    if m_pulses % 2 == 1 {
        return Err(Error::OddSegmentCount(m_pulses));
    }
    if !(tau >= T::zero() && tau.is_finite()) {
        return Err(invalid("tau", "must be finite and non-negative"));
    }
    let (zero, active) = (SensorLevel::Zero, p.subspace.active());
    let a = branch_history_yield(p, tau, &alternating_levels(zero, active, m_pulses))?;
    let b = branch_history_yield(p, tau, &alternating_levels(active, zero, m_pulses))?;
    Ok((a + b) * T::lit(0.5))
}

pub fn controlled_yield_scan<T: Real>(p: &RadicalPairParams<T>, taus: &[T], m_pulses: usize) -> Result<Vec<YieldPoint<T>>> {
    p.validate()?;
    taus.par_iter()
        .map(|&tau| {
            Ok(YieldPoint {
                x: tau,
                phi_s: controlled_yield(p, tau, m_pulses)?,
            })
        })
        .collect()
}

/// Pair pulse in the middle of the echo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TeerVariant {
    Pi,
    PiHalf,
}

impl TeerVariant {
    pub fn angle<T: Real>(self) -> T {
        match self {
            TeerVariant::Pi => T::PI(),
            TeerVariant::PiHalf => T::FRAC_PI_2(),
        }
    }
}

/// Sensor echo with a simultaneous pair pulse:
/// `(π/2)ₓ, τ, πₓ ⊗ pair pulse, τ, (π/2)ₓ`.
pub fn teer_sequence<T: Real>(tau: T, variant: TeerVariant) -> PulseSequence<T> {
    PulseSequence::new()
        .pulse(PulseTarget::Sensor, Axis::X, T::FRAC_PI_2())
        .free(tau)
        .pulse(PulseTarget::Sensor, Axis::X, T::PI())
        .pulse(PulseTarget::BothElectrons, Axis::X, variant.angle())
        .free(tau)
        .pulse(PulseTarget::Sensor, Axis::X, T::FRAC_PI_2())
}

/// `g S^z (S_Az + S_Bz)` on the sensor layout.
pub fn frozen_hamiltonian<T: Real>(p: &RadicalPairParams<T>) -> Result<Operator<T>> {
    let layout = layout_for(p, true);
    let sz = spin_operators::<T>(3)?.z;
    let a = layout.embed(&[(Slot::Sensor, &sz)])?;
    Ok(a.matmul(&layout.electron_sz_total()?).scale_real(p.g))
}

/// Sensor population difference `P(0) - P(m)` after the echo, with the
/// sensor starting in `|0>` and the pair in `state`.
pub fn teer_contrast<T: Real>(
    p: &RadicalPairParams<T>,
    state: RpState,
    taus: &[T],
    variant: TeerVariant,
    frozen_rp: bool,
) -> Result<TimeSeries<T>> {
    let layout = layout_for(p, true);
    let (_, rho0) = initial_state_for(p, Some(SensorState::Level(SensorLevel::Zero)), state)?;
    let h = if frozen_rp {
        frozen_hamiltonian(p)?
    } else {
        build_hamiltonian(p, true)?
    };
    let sensor_idx = layout.require(Slot::Sensor)?;
    let (i0, im) = (SensorLevel::Zero.index(), p.subspace.active().index());
    let values = taus
        .par_iter()
        .map(|&tau| {
            let u = teer_sequence(tau, variant).unitary_with(&layout, &h, p)?;
            let sensor = rho0.evolve(&u).partial_trace(&[sensor_idx])?;
            let op = sensor.as_operator();
            Ok(op.get(i0, i0).re - op.get(im, im).re)
        })
        .collect::<Result<Vec<T>>>()?;
    TimeSeries::new(taus.to_vec(), values)
}

/// `Φ_S(ω)` with the sensor held in `|-1>`, so the pair sees `ω - g`.
pub fn toggle_field_nulling_scan<T: Real>(p: &RadicalPairParams<T>, omegas: &[T]) -> Result<Vec<YieldPoint<T>>> {
    p.validate()?;
    omegas
        .par_iter()
        .map(|&omega| {
            Ok(YieldPoint {
                x: omega,
                phi_s: branch_singlet_yield(&p.with_omega(omega), SensorLevel::Minus)?,
            })
        })
        .collect()
}

/// Grid point of the largest `Φ_S` (first one on ties).
pub fn argmax<T: Real>(curve: &[YieldPoint<T>]) -> Option<YieldPoint<T>> {
    curve.iter().copied().fold(None, |best, pt| match best {
        Some(b) if b.phi_s >= pt.phi_s => Some(b),
        _ => Some(pt),
    })
}

/// Singlet population of the pair at time `t` of a full-space evolution,
/// used to cross-check branch bookkeeping.
pub fn singlet_population_after<T: Real>(
    p: &RadicalPairParams<T>,
    seq: &PulseSequence<T>,
    sensor: SensorState,
) -> Result<T> {
    let (layout, rho0) = initial_state_for(p, Some(sensor), RpState::Singlet)?;
    let rho = apply_sequence(seq, &rho0, p)?;
    singlet_population(&layout, &rho)
}
