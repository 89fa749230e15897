//! Observables of unitary evolution written as finite sums of complex
//! exponentials, `f(t) = Re Σ a_k e^{i ω_k t}`.
//!
//! Built from one eigendecomposition, a spectrum evaluates an observable at
//! arbitrary times without re-exponentiating, and has closed-form
//! exponentially weighted averages.

use num_traits::Zero;

use crate::eigen::HermitianEigen;
use crate::linalg::Operator;
use crate::scalar::{c, cis, Cplx, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T: Real> {
    terms: Vec<(T, Cplx<T>)>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(terms: Vec<(T, Cplx<T>)>) -> Self {
        let mut s = Self { terms };
        s.compact();
        s
    }

    /// `Tr[A ρ(t)]` with `ρ(t) = e^{iHt} ρ e^{-iHt}`.
    pub fn expectation(eig: &HermitianEigen<T>, rho: &Operator<T>, obs: &Operator<T>) -> Self {
        let r = eig.to_eigenbasis(rho);
        let a = eig.to_eigenbasis(obs);
        let l = eig.values();
        let n = l.len();
        let mut terms = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                terms.push((l[j] - l[k], a.get(k, j) * r.get(j, k)));
            }
        }
        Self::new(terms)
    }

    /// `scale · Tr[e^{iH₀t} ρ e^{-iH₁t}]`.
    pub fn overlap(
        eig0: &HermitianEigen<T>,
        eig1: &HermitianEigen<T>,
        rho: &Operator<T>,
        scale: T,
    ) -> Self {
        let v0 = eig0.vectors();
        let v1 = eig1.vectors();
        // Tr[V0 e^{iΛ0 t} V0^H ρ V1 e^{-iΛ1 t} V1^H]
        //   = Σ_jk (V0^H ρ V1)_jk (V1^H V0)_kj e^{i(λ0_j - λ1_k) t}
        let left = v0.adjoint().matmul(rho).matmul(v1);
        let right = v1.adjoint().matmul(v0);
        let (l0, l1) = (eig0.values(), eig1.values());
        let n = l0.len();
        let mut terms = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                terms.push((l0[j] - l1[k], left.get(j, k) * right.get(k, j) * scale));
            }
        }
        Self::new(terms)
    }

    /// Folds `ω < 0` onto `ω > 0` (using `Re(a e^{-iωt}) = Re(ā e^{iωt})`),
    /// merges equal frequencies and drops vanishing amplitudes.
    fn compact(&mut self) {
        let mut folded: Vec<(T, Cplx<T>)> = self
            .terms
            .iter()
            .map(|&(w, a)| if w < T::zero() { (-w, a.conj()) } else { (w, a) })
            .collect();
        folded.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        let tol = T::tol(1e-12);
        let mut merged: Vec<(T, Cplx<T>)> = Vec::with_capacity(folded.len());
        for (w, a) in folded {
            match merged.last_mut() {
                Some((lw, la)) if (w - *lw).abs() <= tol * (T::one() + w.abs()) => {
                    *la = *la + a;
                }
                _ => merged.push((w, a)),
            }
        }
        let amp_tol = T::tol(1e-15);
        for (w, a) in merged.iter_mut() {
            // A zero-frequency term only contributes its real part.
            if *w == T::zero() || w.abs() <= tol {
                *w = T::zero();
                *a = c(a.re, T::zero());
            }
        }
        merged.retain(|(_, a)| a.norm() > amp_tol);
        self.terms = merged;
    }

    pub fn terms(&self) -> &[(T, Cplx<T>)] {
        &self.terms
    }

    pub fn eval(&self, t: T) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |s, &(w, a)| s + (a * cis(w * t)).re)
    }

    pub fn max_frequency(&self) -> T {
        self.terms.iter().fold(T::zero(), |m, &(w, _)| m.max(w))
    }

    /// Upper bound on `|f(t)|`.
    pub fn bound(&self) -> T {
        self.terms.iter().fold(T::zero(), |s, (_, a)| s + a.norm())
    }

    /// Exact `κ ∫₀^∞ f(t) e^{-κt} dt`.
    pub fn laplace_average(&self, kappa: T) -> T {
        self.terms.iter().fold(T::zero(), |s, &(w, a)| {
            s + (a * c(kappa, T::zero()) / c(kappa, -w)).re
        })
    }

    /// Exact `κ ∫₀^τ f(t) e^{-κt} dt`.
    pub fn partial_laplace_average(&self, kappa: T, tau: T) -> T {
        let mut acc = Cplx::<T>::zero();
        for &(w, a) in &self.terms {
            let z = c(-kappa, w);
            let edge = (z * tau).exp() - Cplx::new(T::one(), T::zero());
            acc = acc + a * edge / z;
        }
        (acc * kappa).re
    }
}
