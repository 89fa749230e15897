//! Hermitian eigendecomposition (cyclic complex Jacobi) and the unitary
//! propagator `exp(iHt)` built on it.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::scalar::{cis, Cplx, Real};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with the matching orthonormal
/// eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    values: Vec<T>,
    vectors: Operator<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn vectors(&self) -> &Operator<T> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(Λ) V^H` for a complex function of the eigenvalues.
    pub fn apply_fn(&self, f: impl Fn(T) -> Cplx<T>) -> Operator<T> {
        let n = self.dim();
        let phases: Vec<Cplx<T>> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = Operator::zeros(v.subsystem_dims());
        for i in 0..n {
            for j in 0..n {
                let mut acc = Cplx::zero();
                for k in 0..n {
                    acc = acc + v.get(i, k) * phases[k] * v.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Rotates an operator into the eigenbasis: `V^H A V`.
    pub fn to_eigenbasis(&self, a: &Operator<T>) -> Operator<T> {
        self.vectors.adjoint().matmul(a).matmul(&self.vectors)
    }

    /// `max |H V - V Λ|` against the operator the decomposition came from.
    pub fn residual(&self, h: &Operator<T>) -> T {
        let hv = h.matmul(&self.vectors);
        let n = self.dim();
        let mut res = T::zero();
        for i in 0..n {
            for k in 0..n {
                let d = hv.get(i, k) - self.vectors.get(i, k) * self.values[k];
                res = res.max(d.norm());
            }
        }
        res
    }
}

/// Eigendecomposition of a Hermitian operator.
///
/// The input must be Hermitian to `1e-12` relative to its largest entry.
/// It is symmetrized before the sweep and the result must satisfy
/// `|HV - VΛ| ≤ 1e-11` (relative) or the call fails.
pub fn eigh<T: Real>(h: &Operator<T>) -> Result<HermitianEigen<T>> {
    let scale = T::one().max(h.max_abs());
    let dev = h.hermiticity_deviation();
    if dev > T::tol(1e-12) * scale {
        return Err(Error::NotHermitian {
            deviation: dev.as_f64(),
        });
    }
    let sym = h.hermitian_part();
    let n = sym.dim();
    let mut a: Vec<Cplx<T>> = sym.as_slice().to_vec();
    let mut v = Operator::<T>::identity(&[n]);
    let mut vd: Vec<Cplx<T>> = v.as_slice().to_vec();

    let frob = a.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    let target = T::epsilon() * frob;
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut vd, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .re
            .partial_cmp(&a[j * n + j].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&i| a[i * n + i].re).collect();
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            v.set(row, new_col, vd[row * n + old_col]);
        }
    }
    let vectors = v.with_dims(h.subsystem_dims())?;
    let eig = HermitianEigen { values, vectors };

    let residual = eig.residual(&sym);
    if residual > T::tol(1e-11) * scale {
        return Err(Error::EigenResidual {
            residual: residual.as_f64(),
        });
    }
    Ok(eig)
}

/// One two-sided Jacobi rotation annihilating `a[p][q]`.
fn rotate<T: Real>(a: &mut [Cplx<T>], v: &mut [Cplx<T>], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    // Phase e^{iφ} of the off-diagonal element.
    let phase = apq / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (mag + mag);
    let t = if theta == T::zero() {
        T::one()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let cth = T::one() / (t * t + T::one()).sqrt();
    let sth = t * cth;
    let ph_conj = phase.conj();

    // Columns: A <- A J with J_pp = c, J_pq = s, J_qp = -s e^{-iφ}, J_qq = c e^{-iφ}.
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * cth - akq * ph_conj * sth;
        a[k * n + q] = akp * sth + akq * ph_conj * cth;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * cth - vkq * ph_conj * sth;
        v[k * n + q] = vkp * sth + vkq * ph_conj * cth;
    }
    // Rows: A <- J^H A.
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * cth - aqk * phase * sth;
        a[q * n + k] = apk * sth + aqk * phase * cth;
    }
    a[p * n + q] = Cplx::zero();
    a[q * n + p] = Cplx::zero();
    a[p * n + p] = Cplx::new(a[p * n + p].re, T::zero());
    a[q * n + q] = Cplx::new(a[q * n + q].re, T::zero());
}

/// Cached spectral form of a Hermitian generator, evaluating
/// `U(t) = exp(+iHt)` for any `t`.
#[derive(Clone, Debug)]
pub struct Propagator<T: Real> {
    eig: HermitianEigen<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: &Operator<T>) -> Result<Self> {
        Ok(Self { eig: eigh(h)? })
    }

    pub fn at(&self, t: T) -> Operator<T> {
        self.eig.apply_fn(|l| cis(l * t))
    }

    pub fn eigen(&self) -> &HermitianEigen<T> {
        &self.eig
    }
}

/// `exp(+iHt)` for Hermitian `h`.
pub fn propagator<T: Real>(h: &Operator<T>, t: T) -> Result<Operator<T>> {
    Ok(Propagator::new(h)?.at(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn random_hermitian(n: usize, seed: u64) -> Operator<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let raw = Operator::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        raw.hermitian_part()
    }

    #[test]
    fn diagonalizes_random_hermitian_matrices() {
        for (n, seed) in [(2, 1), (5, 2), (8, 3), (24, 4)] {
            let h = random_hermitian(n, seed);
            let eig = eigh(&h).unwrap();
            assert!(eig.residual(&h) < 1e-13, "n={n}");
            assert!(eig.vectors().unitarity_deviation() < 1e-13);
            assert!(eig.values().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut h = Operator::<f64>::identity(&[2]);
        h.set(0, 1, c(1.0, 0.0));
        assert!(matches!(eigh(&h), Err(Error::NotHermitian { .. })));
        assert!(propagator(&h, 1.0).is_err());
    }

    #[test]
    fn degenerate_spectrum() {
        let h = Operator::<f64>::identity(&[6]).scale_real(3.0);
        let eig = eigh(&h).unwrap();
        assert!(eig.values().iter().all(|&l| (l - 3.0).abs() < 1e-15));
    }

    #[test]
    fn propagator_identity_at_zero() {
        let h = random_hermitian(8, 7);
        let u = propagator(&h, 0.0).unwrap();
        assert!(u.max_abs_diff(&Operator::identity(&[8])) < 1e-13);
    }

    #[test]
    fn propagator_group_property_and_unitarity() {
        let h = random_hermitian(8, 11);
        let prop = Propagator::new(&h).unwrap();
        let (t1, t2) = (0.37, 1.91);
        let lhs = prop.at(t1).matmul(&prop.at(t2));
        assert!(lhs.max_abs_diff(&prop.at(t1 + t2)) < 1e-12);
        assert!(prop.at(5.3).unitarity_deviation() < 1e-12);
    }

    #[test]
    fn diagonal_generator_exponentiates_entrywise() {
        let (a, b, t) = (0.7, -1.3, 2.5);
        let u = propagator(&Operator::from_real_diagonal(&[a, b]), t).unwrap();
        assert!((u.get(0, 0) - cis(a * t)).norm() < 1e-15);
        assert!((u.get(1, 1) - cis(b * t)).norm() < 1e-15);
        assert!(u.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn single_precision_smoke() {
        let h = Operator::<f32>::from_fn(3, |i, j| if i == j { c(i as f32, 0.0) } else { c(0.5, 0.0) });
        let eig = eigh(&h).unwrap();
        assert!(eig.residual(&h) < 1e-5);
    }
}
