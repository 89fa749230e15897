//! Spin operators, subsystem layouts and the radical-pair spin states.
//!
//! Electrons and nuclei are spin-1/2 with eigenvalues ±1/2; the sensor is
//! spin-1 with `Sz = diag(+1, 0, -1)`. Basis order is `|↑>, |↓>` for
//! spin-1/2 and `|+1>, |0>, |-1>` for the sensor.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, Operator};
use crate::scalar::{c, cr, Cplx, Real};

/// Cartesian spin operators `(Sx, Sy, Sz)`.
#[derive(Clone, Debug)]
pub struct SpinOperators<T: Real> {
    pub x: Operator<T>,
    pub y: Operator<T>,
    pub z: Operator<T>,
}

/// Spin matrices for multiplicity `2s + 1` ∈ {2, 3}.
pub fn spin_operators<T: Real>(two_s_plus_1: usize) -> Result<SpinOperators<T>> {
    let zero = Cplx::<T>::zero();
    match two_s_plus_1 {
        2 => {
            let h = T::lit(0.5);
            Ok(SpinOperators {
                x: Operator::from_vec(2, vec![zero, cr(h), cr(h), zero])?,
                y: Operator::from_vec(2, vec![zero, c(T::zero(), -h), c(T::zero(), h), zero])?,
                z: Operator::from_real_diagonal(&[h, -h]),
            })
        }
        3 => {
            let r = T::one() / T::lit(2.0).sqrt();
            let (re, ip, im) = (cr(r), c(T::zero(), r), c(T::zero(), -r));
            Ok(SpinOperators {
                x: Operator::from_vec(3, vec![zero, re, zero, re, zero, re, zero, re, zero])?,
                y: Operator::from_vec(3, vec![zero, im, zero, ip, zero, im, zero, ip, zero])?,
                z: Operator::from_real_diagonal(&[T::one(), T::zero(), -T::one()]),
            })
        }
        other => Err(Error::UnsupportedSpin(other)),
    }
}

/// Physical role of one tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Sensor,
    ElectronA,
    ElectronB,
    NucleusA,
    NucleusB,
}

impl Slot {
    pub fn dim(self) -> usize {
        match self {
            Slot::Sensor => 3,
            _ => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Slot::Sensor => "sensor",
            Slot::ElectronA => "electron A",
            Slot::ElectronB => "electron B",
            Slot::NucleusA => "nucleus A",
            Slot::NucleusB => "nucleus B",
        }
    }
}

/// Ordered list of tensor factors making up the Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemLayout {
    slots: Vec<Slot>,
}

impl SystemLayout {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        for (i, s) in slots.iter().enumerate() {
            if slots[..i].contains(s) {
                return Err(Error::InvalidSubsystems(format!("{} appears twice", s.name())));
            }
        }
        if slots.is_empty() {
            return Err(Error::InvalidSubsystems("empty layout".into()));
        }
        Ok(Self { slots })
    }

    /// `A ⊗ B ⊗ N_A` (plus `N_B` when requested).
    pub fn radical_pair(nucleus_b: bool) -> Self {
        let mut slots = vec![Slot::ElectronA, Slot::ElectronB, Slot::NucleusA];
        if nucleus_b {
            slots.push(Slot::NucleusB);
        }
        Self { slots }
    }

    /// `S ⊗ A ⊗ B ⊗ N_A` (plus `N_B` when requested).
    pub fn with_sensor(nucleus_b: bool) -> Self {
        let mut slots = vec![Slot::Sensor];
        slots.extend(Self::radical_pair(nucleus_b).slots);
        Self { slots }
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slots.iter().map(|s| s.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.slots.iter().map(|s| s.dim()).product()
    }

    pub fn index_of(&self, slot: Slot) -> Option<usize> {
        self.slots.iter().position(|&s| s == slot)
    }

    pub fn require(&self, slot: Slot) -> Result<usize> {
        self.index_of(slot).ok_or(Error::MissingSlot(slot.name()))
    }

    pub fn has(&self, slot: Slot) -> bool {
        self.index_of(slot).is_some()
    }

    /// Product operator with the given single-slot factors and identity on
    /// every other slot.
    pub fn embed<T: Real>(&self, factors: &[(Slot, &Operator<T>)]) -> Result<Operator<T>> {
        let mut out: Option<Operator<T>> = None;
        for &slot in &self.slots {
            let matching: Vec<_> = factors.iter().filter(|(s, _)| *s == slot).collect();
            let factor = match matching.as_slice() {
                [] => Operator::identity(&[slot.dim()]),
                [(_, op)] => {
                    if op.dim() != slot.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: slot.dim(),
                            found: op.dim(),
                        });
                    }
                    (*op).clone()
                }
                _ => {
                    return Err(Error::InvalidSubsystems(format!(
                        "{} given twice",
                        slot.name()
                    )))
                }
            };
            out = Some(match out {
                None => factor,
                Some(acc) => acc.kron(&factor),
            });
        }
        for (slot, _) in factors {
            self.require(*slot)?;
        }
        Ok(out.expect("layout is non-empty"))
    }

    /// Indices of the two electron slots, in layout order.
    pub fn electron_indices(&self) -> Result<(usize, usize)> {
        Ok((self.require(Slot::ElectronA)?, self.require(Slot::ElectronB)?))
    }

    /// `∑_k S^k_a ⊗ S^k_b` for two spin-1/2 slots.
    pub fn spin_dot<T: Real>(&self, a: Slot, b: Slot) -> Result<Operator<T>> {
        let sa = spin_operators::<T>(a.dim())?;
        let sb = spin_operators::<T>(b.dim())?;
        let xx = self.embed(&[(a, &sa.x), (b, &sb.x)])?;
        let yy = self.embed(&[(a, &sa.y), (b, &sb.y)])?;
        let zz = self.embed(&[(a, &sa.z), (b, &sb.z)])?;
        Ok(&(&xx + &yy) + &zz)
    }

    /// `S_Az + S_Bz`.
    pub fn electron_sz_total<T: Real>(&self) -> Result<Operator<T>> {
        let s = spin_operators::<T>(2)?;
        let a = self.embed(&[(Slot::ElectronA, &s.z)])?;
        let b = self.embed(&[(Slot::ElectronB, &s.z)])?;
        Ok(&a + &b)
    }
}

/// Projector onto the electron singlet, identity on every other slot.
///
/// Uses `|S><S| = 1/4 - S_A·S_B`.
pub fn singlet_projector<T: Real>(layout: &SystemLayout) -> Result<Operator<T>> {
    layout.electron_indices()?;
    let dot = layout.spin_dot::<T>(Slot::ElectronA, Slot::ElectronB)?;
    let quarter = Operator::identity(&layout.dims()).scale_real(T::lit(0.25));
    Ok(&quarter - &dot)
}

/// The four two-electron spin states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RpState {
    Singlet,
    T0,
    TPlus,
    TMinus,
}

impl RpState {
    pub const ALL: [RpState; 4] = [RpState::Singlet, RpState::T0, RpState::TPlus, RpState::TMinus];

    /// Amplitudes on `|↑↑>, |↑↓>, |↓↑>, |↓↓>` (electron A first).
    pub fn amplitudes<T: Real>(self) -> [Cplx<T>; 4] {
        let r = cr(T::one() / T::lit(2.0).sqrt());
        let (o, z) = (Cplx::<T>::one(), Cplx::<T>::zero());
        match self {
            RpState::Singlet => [z, r, -r, z],
            RpState::T0 => [z, r, r, z],
            RpState::TPlus => [o, z, z, z],
            RpState::TMinus => [z, z, z, o],
        }
    }

    pub fn density<T: Real>(self) -> DensityMatrix<T> {
        DensityMatrix::pure(&self.amplitudes::<T>())
            .with_dims(&[2, 2])
            .expect("2x2 electron space")
    }

    pub fn label(self) -> &'static str {
        match self {
            RpState::Singlet => "S",
            RpState::T0 => "T0",
            RpState::TPlus => "Tplus",
            RpState::TMinus => "Tminus",
        }
    }
}

/// Nuclear spin state `(1 + p σz) / 2`; `p = 0` is the thermal state.
pub fn nuclear_state<T: Real>(polarization: T) -> DensityMatrix<T> {
    let half = T::lit(0.5);
    DensityMatrix::new_unchecked(Operator::from_real_diagonal(&[
        half * (T::one() + polarization),
        half * (T::one() - polarization),
    ]))
}

/// Product state over a layout: sensor state (if the layout has a sensor),
/// electron pair state, and the nuclear state on every nucleus slot.
///
/// The electron slots must be adjacent with A before B.
pub fn product_state<T: Real>(
    layout: &SystemLayout,
    sensor: Option<&DensityMatrix<T>>,
    pair: &DensityMatrix<T>,
    nuclear: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let (ia, ib) = layout.electron_indices()?;
    if ib != ia + 1 {
        return Err(Error::InvalidSubsystems(
            "electron slots must be adjacent (A then B)".into(),
        ));
    }
    let mut acc: Option<DensityMatrix<T>> = None;
    let push = |acc: Option<DensityMatrix<T>>, f: &DensityMatrix<T>| match acc {
        None => f.clone(),
        Some(a) => a.kron(f),
    };
    for &slot in layout.slots() {
        match slot {
            Slot::Sensor => {
                let s = sensor.ok_or_else(|| {
                    Error::InvalidSubsystems("layout has a sensor slot but no sensor state".into())
                })?;
                acc = Some(push(acc, s));
            }
            Slot::ElectronA => acc = Some(push(acc, pair)),
            Slot::ElectronB => {}
            Slot::NucleusA | Slot::NucleusB => acc = Some(push(acc, nuclear)),
        }
    }
    let rho = acc.expect("layout is non-empty");
    rho.with_dims(&layout.dims())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutator(a: &Operator<f64>, b: &Operator<f64>) -> Operator<f64> {
        &a.matmul(b) - &b.matmul(a)
    }

    #[test]
    fn su2_algebra_holds_for_both_multiplicities() {
        for d in [2, 3] {
            let s = spin_operators::<f64>(d).unwrap();
            let lhs = commutator(&s.x, &s.y);
            let rhs = s.z.scale(c(0.0, 1.0));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn sz_diagonals() {
        let half = spin_operators::<f64>(2).unwrap();
        assert_eq!(half.z, Operator::from_real_diagonal(&[0.5, -0.5]));
        let one = spin_operators::<f64>(3).unwrap();
        assert_eq!(one.z, Operator::from_real_diagonal(&[1.0, 0.0, -1.0]));
    }

    #[test]
    fn unsupported_multiplicity() {
        assert_eq!(spin_operators::<f64>(4).unwrap_err(), Error::UnsupportedSpin(4));
    }

    #[test]
    fn singlet_projector_properties() {
        for layout in [SystemLayout::radical_pair(false), SystemLayout::with_sensor(false)] {
            let p = singlet_projector::<f64>(&layout).unwrap();
            let others = layout.total_dim() / 4;
            assert!((p.trace().re - others as f64).abs() < 1e-12);
            assert!(p.matmul(&p).max_abs_diff(&p) < 1e-12);
        }
        let pair = SystemLayout::new(vec![Slot::ElectronA, Slot::ElectronB]).unwrap();
        let p = singlet_projector::<f64>(&pair).unwrap();
        let t0 = RpState::T0.amplitudes::<f64>();
        let s = RpState::Singlet.amplitudes::<f64>();
        assert!(p.sandwich(&t0, &t0).norm() < 1e-15);
        assert!((p.sandwich(&s, &s).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singlet_projector_needs_electrons() {
        let layout = SystemLayout::new(vec![Slot::Sensor, Slot::NucleusA]).unwrap();
        assert!(matches!(
            singlet_projector::<f64>(&layout),
            Err(Error::MissingSlot(_))
        ));
    }

    #[test]
    fn product_state_is_valid() {
        let layout = SystemLayout::with_sensor(false);
        let sensor = DensityMatrix::<f64>::maximally_mixed(3);
        let rho = product_state(
            &layout,
            Some(&sensor),
            &RpState::Singlet.density(),
            &nuclear_state(0.3),
        )
        .unwrap();
        assert_eq!(rho.dim(), 24);
        assert!(DensityMatrix::new(rho.into_operator()).is_ok());
    }
}
