//! Closed-form expressions for the one-nucleus radical pair.
//!
//! * [`timmel_singlet_analytic`]: singlet probability of a singlet-born pair with one
//!   spin-1/2 nucleus on electron A, with an optional common phase offset.
//! * [`sensor_contrast_closed_form`] and [`contrast_yield_closed_form`]: the
//!   closed-form sensor-contrast expressions, transcribed term by term.
//!   They are kept separate from the numeric route and compared against it
//!   in [`crate::report`].

use crate::error::{Error, Result};
use crate::params::RadicalPairParams;
use crate::scalar::Real;

/// Constant part and `(amplitude, angular frequency)` cosine terms of the
/// one-nucleus singlet probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimmelTerms<T: Real> {
    pub constant: T,
    pub cosines: [(T, T); 5],
}

pub fn timmel_terms<T: Real>(h: T, omega: T) -> TimmelTerms<T> {
    let eighth = T::lit(0.125);
    let half = T::lit(0.5);
    let big = (h * h + omega * omega).sqrt();
    let ratio = omega / big;
    let minus = eighth * (T::one() - ratio);
    let plus = eighth * (T::one() + ratio);
    TimmelTerms {
        constant: T::lit(0.375) + eighth * ratio * ratio,
        cosines: [
            (eighth * h * h / (big * big), big),
            (minus, half * (h + omega + big)),
            (minus, half * (h - omega - big)),
            (plus, half * (h - omega + big)),
            (plus, half * (h + omega - big)),
        ],
    }
}

/// Singlet probability `Φ_S(t)` for hyperfine `h`, field `omega` (both
/// angular) and phase `phi` added to every oscillating term.
pub fn timmel_singlet_analytic<T: Real>(h: T, omega: T, t: T, phi: T) -> T {
    let terms = timmel_terms(h, omega);
    terms
        .cosines
        .iter()
        .fold(terms.constant, |s, &(a, w)| s + a * (w * t + phi).cos())
}

/// `Ω₁ = √(h_A² + ω²)` and `Ω₂ = √(h_A² + (ω + g)²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormFrequencies<T: Real> {
    pub omega1: T,
    pub omega2: T,
}

impl<T: Real> ClosedFormFrequencies<T> {
    pub fn from_params(p: &RadicalPairParams<T>) -> Self {
        let shifted = p.omega + p.signed_g();
        Self {
            omega1: (p.h_a * p.h_a + p.omega * p.omega).sqrt(),
            omega2: (p.h_a * p.h_a + shifted * shifted).sqrt(),
        }
    }
}

/// Printed closed form of the raw Ramsey contrast `C_Φ(t)` (value 4 at
/// `t = 0`).
pub fn sensor_contrast_closed_form<T: Real>(p: &RadicalPairParams<T>, t: T) -> T {
    let ClosedFormFrequencies { omega1: o1, omega2: o2 } = ClosedFormFrequencies::from_params(p);
    let (w, g) = (p.omega, p.signed_g());
    let two = T::lit(2.0);
    let (s1, c1) = (t * o1).sin_cos();
    let (s2, c2) = (t * o2).sin_cos();
    let (sg, cg) = (g * t).sin_cos();
    let first = s1 * (two * (o1 * o1 + g * w) * cg * s2 - two * w * o2 * sg * c2);
    let second = o1 * c1 * (two * (g + w) * sg * s2 + two * o2 * cg * c2);
    (first + second + two * o1 * o2) / (o1 * o2)
}

fn nonzero<T: Real>(value: T, factor: &'static str) -> Result<T> {
    if value == T::zero() || !value.is_finite() {
        Err(Error::SingularClosedForm { factor })
    } else {
        Ok(value)
    }
}

/// Printed closed form of the recombination-weighted contrast `C_φ(κ̃)`.
pub fn contrast_yield_closed_form<T: Real>(p: &RadicalPairParams<T>) -> Result<T> {
    p.validate()?;
    let k = p.kappa_tilde();
    if !(k > T::zero()) {
        return Err(Error::NonPositiveRate(k.as_f64()));
    }
    let ClosedFormFrequencies { omega1: o1, omega2: o2 } = ClosedFormFrequencies::from_params(p);
    let (w, g, h) = (p.omega, p.signed_g(), p.h_a);
    let (two, four, eighth) = (T::lit(2.0), T::lit(4.0), T::lit(0.125));
    let k2 = k * k;
    let g2 = g * g;
    let o2sq = o2 * o2;

    let d_a = nonzero(
        two * o2sq * (k2 - g2) + (g2 + k2) * (g2 + k2) + o2sq,
        "2Ω₂²(κ̃²-g²) + (g²+κ̃²)² + Ω₂²",
    )?;
    let d_b = nonzero(
        ((g - o2) * (g - o2) + k2) * ((g + o2) * (g + o2) + k2),
        "((g-Ω₂)²+κ̃²)((g+Ω₂)²+κ̃²)",
    )?;
    let d_c = nonzero(h * h + k2 + w * w, "h_A²+κ̃²+ω²")?;
    let d_o = nonzero(o1 * o2, "Ω₁Ω₂")?;

    let term_a = four * g * k * o2 * (g + w) / d_a;
    let term_b = two * k * o2 * (g2 + k2 + o2sq) / d_b;
    let first = k * o1 * (term_a + term_b) / d_c;

    let lorentz = |x: T, factor: &'static str| -> Result<T> { Ok(k / nonzero(x * x + k2, factor)?) };
    let l1 = lorentz(-g + o1 - o2, "(-g+Ω₁-Ω₂)²+κ̃²")?;
    let l2 = lorentz(g + o1 - o2, "(g+Ω₁-Ω₂)²+κ̃²")?;
    let l3 = lorentz(-g + o1 + o2, "(-g+Ω₁+Ω₂)²+κ̃²")?;
    let l4 = lorentz(g + o1 + o2, "(g+Ω₁+Ω₂)²+κ̃²")?;
    let second = eighth * (l1 + l2 - l3 - l4) * (h * h + w * (g + w));
    let third = -eighth * w * o2 * (l1 - l2 + l3 - l4);

    Ok(two + (first + second + third) / d_o)
}
