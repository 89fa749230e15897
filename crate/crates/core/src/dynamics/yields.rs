//! Recombination-weighted yields `κ ∫₀^∞ f(t) e^{-κt} dt`.
//!
//! The integral is truncated at a horizon `T ≥ 20/κ` chosen so that the
//! neglected tail `≤ sup|f| · e^{-κT}` stays below `tail_tol`, and the
//! finite part is integrated by adaptive Gauss–Kronrod (7/15) refinement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Minimum horizon in units of `1/κ`.
pub const MIN_HORIZON: f64 = 20.0;

#[derive(Clone, Debug)]
pub struct LaplaceQuadrature<T: Real> {
    /// Target absolute error of the finite part.
    pub abs_tol: T,
    /// Target bound on the truncated tail.
    pub tail_tol: T,
    /// Known `sup |f|`; estimated from samples when absent.
    pub bound: Option<T>,
    /// Largest angular frequency in `f`, used to size the initial panels.
    pub frequency_hint: Option<T>,
    /// Points where `f` may have kinks; panels are aligned to them.
    pub breakpoints: Vec<T>,
    pub max_panels: usize,
}

impl<T: Real> Default for LaplaceQuadrature<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::tol(1e-9),
            tail_tol: T::tol(1e-12),
            bound: None,
            frequency_hint: None,
            breakpoints: Vec::new(),
            max_panels: 1 << 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YieldEstimate<T: Real> {
    pub value: T,
    /// Summed Kronrod–Gauss differences over the final panels.
    pub error_estimate: T,
    /// `sup|f| · e^{-κT}`.
    pub tail_bound: T,
    pub horizon: T,
    pub panels: usize,
}

struct Panel<T: Real> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .as_f64()
            .total_cmp(&other.error.as_f64())
            .then_with(|| other.a.as_f64().total_cmp(&self.a.as_f64()))
    }
}

fn kronrod<T: Real>(h: &impl Fn(T) -> T, a: T, b: T) -> Panel<T> {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = h(mid);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = half * T::lit(XGK[i]);
        let pair = h(mid - dx) + h(mid + dx);
        k = k + pair * T::lit(WGK[i]);
        if i % 2 == 1 {
            g = g + pair * T::lit(WG[i / 2]);
        }
    }
    Panel {
        a,
        b,
        value: k * half,
        error: ((k - g) * half).abs(),
    }
}

impl<T: Real> LaplaceQuadrature<T> {
    pub fn average(&self, f: impl Fn(T) -> T, kappa: T) -> Result<YieldEstimate<T>> {
        if !(kappa > T::zero()) || !kappa.is_finite() {
            return Err(Error::NonPositiveRate(kappa.as_f64()));
        }
        let base = T::lit(MIN_HORIZON) / kappa;
        let bound = match self.bound {
            Some(b) => b.abs(),
            None => {
                let n = 512;
                (0..=n).fold(T::zero(), |m, i| {
                    let t = base * T::from_usize_lossy(i) / T::from_usize_lossy(n);
                    m.max(f(t).abs())
                })
            }
        };
        let horizon = if bound > self.tail_tol {
            base.max((bound / self.tail_tol).ln() / kappa)
        } else {
            base
        };

        let width = match self.frequency_hint {
            Some(w) if w > T::zero() => (horizon / T::lit(16.0)).min(T::PI() / w),
            _ => horizon / T::lit(256.0),
        };
        let n0 = (horizon / width).ceil().to_usize().unwrap_or(1).clamp(1, self.max_panels / 2);
        let mut edges: Vec<T> = (0..=n0)
            .map(|i| horizon * T::from_usize_lossy(i) / T::from_usize_lossy(n0))
            .collect();
        edges.extend(
            self.breakpoints
                .iter()
                .copied()
                .filter(|&b| b > T::zero() && b < horizon),
        );
        edges.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
        edges.dedup_by(|x, y| (*x - *y).abs() <= T::epsilon() * horizon);

        let h = |t: T| kappa * f(t) * (-kappa * t).exp();
        let mut heap: BinaryHeap<Panel<T>> = edges
            .windows(2)
            .map(|w| kronrod(&h, w[0], w[1]))
            .collect();
        let mut total_err = heap.iter().fold(T::zero(), |s, p| s + p.error);
        while total_err > self.abs_tol && heap.len() < self.max_panels {
            let worst = heap.pop().expect("non-empty");
            let mid = (worst.a + worst.b) * T::lit(0.5);
            if !(mid > worst.a && mid < worst.b) {
                heap.push(worst);
                break;
            }
            let left = kronrod(&h, worst.a, mid);
            let right = kronrod(&h, mid, worst.b);
            total_err = total_err - worst.error + left.error + right.error;
            heap.push(left);
            heap.push(right);
        }

        let mut panels = heap.into_vec();
        panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
        let value = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let error_estimate = panels.iter().fold(T::zero(), |s, p| s + p.error);
        Ok(YieldEstimate {
            value,
            error_estimate,
            tail_bound: bound * (-kappa * horizon).exp(),
            horizon,
            panels: panels.len(),
        })
    }
}

/// Normalized Laplace average `κ̃ ∫₀^∞ f(t) e^{-κ̃t} dt` with default
/// quadrature settings.
pub fn yield_with_recombination<T: Real>(f: impl Fn(T) -> T, kappa_tilde: T) -> Result<T> {
    Ok(LaplaceQuadrature::default().average(f, kappa_tilde)?.value)
}
