//! Dense complex operators on small tensor-product Hilbert spaces.
//!
//! Matrices are stored row-major. Every operator carries the dimensions of
//! the subsystems it acts on so that tensor products and partial traces can
//! be checked against the physical layout.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cr, Cplx, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T: Real> {
    dim: usize,
    dims: Vec<usize>,
    data: Vec<Cplx<T>>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dims: &[usize]) -> Self {
        let dim = dims.iter().product();
        Self {
            dim,
            dims: dims.to_vec(),
            data: vec![Cplx::zero(); dim * dim],
        }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let mut out = Self::zeros(dims);
        for i in 0..out.dim {
            out.data[i * out.dim + i] = Cplx::one();
        }
        out
    }

    /// Single-subsystem operator built from `f(row, col)`.
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        Self::from_fn_with_dims(&[dim], f)
    }

    pub fn from_fn_with_dims(dims: &[usize], mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let dim: usize = dims.iter().product();
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self {
            dim,
            dims: dims.to_vec(),
            data,
        }
    }

    /// Row-major entries for a single subsystem of dimension `dim`.
    pub fn from_vec(dim: usize, data: Vec<Cplx<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self {
            dim,
            dims: vec![dim],
            data,
        })
    }

    pub fn from_real_diagonal(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { cr(values[i]) } else { Cplx::zero() })
    }

    /// `|v><v|` for a (not necessarily normalized) vector.
    pub fn outer(v: &[Cplx<T>]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    /// Re-labels the subsystem structure; the product must match `dim`.
    pub fn with_dims(mut self, dims: &[usize]) -> Result<Self> {
        let prod: usize = dims.iter().product();
        if prod != self.dim || dims.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: prod,
            });
        }
        self.dims = dims.to_vec();
        Ok(self)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Cplx<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Cplx<T>) {
        self.data[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.data[j * n + i].conj());
            }
        }
        Self {
            dim: n,
            dims: self.dims.clone(),
            data,
        }
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.dim).fold(Cplx::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Cplx<T>) -> Cplx<T>) -> Self {
        Self {
            dim: self.dim,
            dims: self.dims.clone(),
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![Cplx::zero(); n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let src = &rhs.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = *d + a * b;
                }
            }
        }
        Self {
            dim: n,
            dims: self.dims.clone(),
            data: out,
        }
    }

    /// `self * rho * self^H`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        self.matmul(rho).matmul(&self.adjoint())
    }

    /// Tensor product; subsystem lists are concatenated.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim, rhs.dim);
        let dim = n * m;
        let mut data = vec![Cplx::zero(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * dim + j * m + l] = a * rhs.data[k * m + l];
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&rhs.dims);
        Self { dim, dims, data }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "comparison dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// `max |A - A^H|`.
    pub fn hermiticity_deviation(&self) -> T {
        let n = self.dim;
        let mut dev = T::zero();
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `max |U^H U - 1|`.
    pub fn unitarity_deviation(&self) -> T {
        let prod = self.adjoint().matmul(self);
        prod.max_abs_diff(&Self::identity(&self.dims))
    }

    /// `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        let adj = self.adjoint();
        Self {
            dim: self.dim,
            dims: self.dims.clone(),
            data: self
                .data
                .iter()
                .zip(&adj.data)
                .map(|(a, b)| (*a + *b) * half)
                .collect(),
        }
    }

    /// `<u| A |v>`.
    pub fn sandwich(&self, u: &[Cplx<T>], v: &[Cplx<T>]) -> Cplx<T> {
        let n = self.dim;
        let mut acc = Cplx::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            let row = &self.data[i * n..(i + 1) * n];
            let inner = row
                .iter()
                .zip(v)
                .fold(Cplx::zero(), |s, (a, b)| s + *a * *b);
            acc = acc + u[i].conj() * inner;
        }
        acc
    }

    /// Principal sub-block selecting `rows` and `cols` (in that order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Cplx<T>> {
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                out.push(self.get(r, c));
            }
        }
        out
    }

    /// Traces out every subsystem not listed in `keep`.
    ///
    /// `keep` is interpreted as a set; the result orders the kept subsystems
    /// as they appear in the input.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let nsub = self.dims.len();
        if keep.is_empty() {
            return Err(Error::InvalidSubsystems("keep set is empty".into()));
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::InvalidSubsystems("duplicate subsystem index".into()));
        }
        if let Some(&bad) = kept.iter().find(|&&k| k >= nsub) {
            return Err(Error::InvalidSubsystems(format!(
                "index {bad} out of range for {nsub} subsystems"
            )));
        }
        let traced: Vec<usize> = (0..nsub).filter(|i| !kept.contains(i)).collect();

        // Row-major strides of each subsystem in the full index.
        let mut strides = vec![1usize; nsub];
        for s in (0..nsub.saturating_sub(1)).rev() {
            strides[s] = strides[s + 1] * self.dims[s + 1];
        }
        let kept_dims: Vec<usize> = kept.iter().map(|&k| self.dims[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| self.dims[k]).collect();
        let kdim: usize = kept_dims.iter().product();
        let tdim: usize = traced_dims.iter().product();

        let offsets = |sel: &[usize], sub_dims: &[usize], count: usize| -> Vec<usize> {
            (0..count)
                .map(|mut flat| {
                    let mut off = 0;
                    for (pos, &s) in sel.iter().enumerate().rev() {
                        let d = sub_dims[pos];
                        off += (flat % d) * strides[s];
                        flat /= d;
                    }
                    off
                })
                .collect()
        };
        let kept_off = offsets(&kept, &kept_dims, kdim);
        let traced_off = offsets(&traced, &traced_dims, tdim);

        let n = self.dim;
        let mut out = Self::zeros(&kept_dims);
        for (a, &ra) in kept_off.iter().enumerate() {
            for (b, &rb) in kept_off.iter().enumerate() {
                let mut acc = Cplx::zero();
                for &t in &traced_off {
                    acc = acc + self.data[(ra + t) * n + rb + t];
                }
                out.data[a * kdim + b] = acc;
            }
        }
        Ok(out)
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        Operator {
            dim: self.dim,
            dims: self.dims.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        Operator {
            dim: self.dim,
            dims: self.dims.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: Self) -> Operator<T> {
        self.matmul(rhs)
    }
}

/// Tensor product of two operators.
pub fn kron<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Operator<T> {
    a.kron(b)
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    op: Operator<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates hermiticity (1e-12), trace (1 ± 1e-12) and positivity
    /// (eigenvalues ≥ -1e-10).
    pub fn new(op: Operator<T>) -> Result<Self> {
        let herm = op.hermiticity_deviation();
        if herm > T::tol(1e-12) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {:e})",
                herm.as_f64()
            )));
        }
        let tr = op.trace();
        if (tr.re - T::one()).abs() > T::tol(1e-12) || tr.im.abs() > T::tol(1e-12) {
            return Err(Error::InvalidState(format!(
                "trace {} + {}i is not 1",
                tr.re, tr.im
            )));
        }
        let eig = crate::eigen::eigh(&op)?;
        if let Some(&min) = eig.values().first() {
            if min < -T::tol(1e-10) {
                return Err(Error::InvalidState(format!(
                    "negative eigenvalue {:e}",
                    min.as_f64()
                )));
            }
        }
        Ok(Self { op })
    }

    pub(crate) fn new_unchecked(op: Operator<T>) -> Self {
        Self { op }
    }

    /// Pure state `|psi><psi|` (normalized here).
    pub fn pure(psi: &[Cplx<T>]) -> Self {
        let norm = psi.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        let v: Vec<_> = psi.iter().map(|z| *z / norm).collect();
        Self::new_unchecked(Operator::outer(&v))
    }

    /// `1/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let inv = T::one() / T::from_usize_lossy(dim);
        Self::new_unchecked(Operator::identity(&[dim]).scale_real(inv))
    }

    pub fn with_dims(self, dims: &[usize]) -> Result<Self> {
        Ok(Self::new_unchecked(self.op.with_dims(dims)?))
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        Self::new_unchecked(self.op.kron(&rhs.op))
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        Ok(Self::new_unchecked(self.op.partial_trace(keep)?))
    }

    /// `U rho U^H`.
    pub fn evolve(&self, u: &Operator<T>) -> Self {
        Self::new_unchecked(u.conjugate(&self.op))
    }

    /// `Re Tr[A rho]`.
    pub fn expectation(&self, obs: &Operator<T>) -> T {
        let n = self.op.dim();
        let mut acc = T::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc + (obs.get(i, k) * self.op.get(k, i)).re;
            }
        }
        acc
    }

    /// Trace distance `||a - b||_1 / 2`.
    pub fn trace_distance(&self, other: &Self) -> Result<T> {
        let diff = &self.op - &other.op;
        let eig = crate::eigen::eigh(&diff.hermitian_part())?;
        Ok(eig.values().iter().fold(T::zero(), |s, v| s + v.abs()) * T::lit(0.5))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn into_operator(self) -> Operator<T> {
        self.op
    }
}

/// Reduced state on the subsystems listed in `keep`.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: &[usize]) -> Result<DensityMatrix<T>> {
    rho.partial_trace(keep)
}
