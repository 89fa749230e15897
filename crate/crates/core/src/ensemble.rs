//! Ensemble averages: Gaussian spread of the sensor–pair coupling and a
//! random common phase on the singlet oscillations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::dynamics::{closed_form::timmel_terms, sensor_contrast_numeric, TimeGrid, TimeSeries};
use crate::eigen::eigh;
use crate::error::{invalid, Result};
use crate::linalg::Operator;
use crate::params::RadicalPairParams;
use crate::scalar::{c, cr, Cplx};

/// Distribution of the random phase `φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseModel {
    /// `φ = 0`.
    None,
    /// Uniform on `[0, 2π)`.
    Uniform,
    /// Zero-mean normal with the given standard deviation.
    Gaussian { width: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub g0: f64,
    /// Inverse-variance weight in `exp(-η (g - g0)²)`; `+∞` is the delta limit.
    pub eta: f64,
    pub n_nodes: usize,
    pub phi_model: PhaseModel,
    pub n_samples: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub const DEFAULT_NODES: usize = 81;

    pub fn new(g0: f64, eta: f64) -> Self {
        Self {
            g0,
            eta,
            n_nodes: if eta.is_infinite() { 1 } else { Self::DEFAULT_NODES },
            phi_model: PhaseModel::Uniform,
            n_samples: 1000,
            seed: 0,
        }
    }

    pub fn with_nodes(mut self, n_nodes: usize) -> Self {
        self.n_nodes = n_nodes;
        self
    }

    pub fn with_phase(mut self, model: PhaseModel, n_samples: usize, seed: u64) -> Self {
        self.phi_model = model;
        self.n_samples = n_samples;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.g0.is_finite() {
            return Err(invalid("g0", "must be finite"));
        }
        if !(self.eta > 0.0) {
            return Err(invalid("eta", "must be positive"));
        }
        if self.n_nodes == 0 || self.n_nodes % 2 == 0 {
            return Err(invalid("n_nodes", "must be odd and at least 1"));
        }
        if self.n_samples == 0 {
            return Err(invalid("n_samples", "must be at least 1"));
        }
        if let PhaseModel::Gaussian { width } = self.phi_model {
            if !(width >= 0.0 && width.is_finite()) {
                return Err(invalid("phi_width", "must be finite and non-negative"));
            }
        }
        Ok(())
    }

    /// Variance `1/(2η)` of the normalized weight.
    pub fn variance(&self) -> f64 {
        0.5 / self.eta
    }
}

/// Gauss–Hermite rule for the weight `e^{-x²}`, normalized to unit mass.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix with
    /// off-diagonal `√(k/2)`, weights the squared first eigenvector components.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n_nodes", "must be at least 1"));
        }
        if n == 1 {
            return Ok(Self {
                nodes: vec![0.0],
                weights: vec![1.0],
            });
        }
        let jacobi = Operator::<f64>::from_fn(n, |i, j| {
            if i.abs_diff(j) == 1 {
                cr((i.max(j) as f64 / 2.0).sqrt())
            } else {
                c(0.0, 0.0)
            }
        });
        let eig = eigh(&jacobi)?;
        let raw: Vec<f64> = (0..n).map(|k| eig.vectors().get(0, k).norm_sqr()).collect();
        let mass: f64 = raw.iter().sum();
        let mut nodes = eig.values().to_vec();
        let mut weights: Vec<f64> = raw.iter().map(|w| w / mass).collect();
        // Exact symmetry about 0.
        for k in 0..n / 2 {
            let m = n - 1 - k;
            let x = 0.5 * (nodes[m] - nodes[k]);
            let w = 0.5 * (weights[k] + weights[m]);
            nodes[k] = -x;
            nodes[m] = x;
            weights[k] = w;
            weights[m] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    /// Nodes mapped to `g0 + x/√η` with their weights.
    pub fn coupling_nodes(spec: &EnsembleSpec) -> Result<Vec<(f64, f64)>> {
        spec.validate()?;
        if spec.n_nodes == 1 || spec.eta.is_infinite() {
            return Ok(vec![(spec.g0, 1.0)]);
        }
        let rule = Self::new(spec.n_nodes)?;
        let scale = 1.0 / spec.eta.sqrt();
        Ok(rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| (spec.g0 + x * scale, w))
            .collect())
    }
}

/// `∫ w(g) f(g) dg` for the normalized Gaussian of `spec`.
pub fn gauss_average(f: impl Fn(f64) -> f64, spec: &EnsembleSpec) -> Result<f64> {
    Ok(GaussHermite::coupling_nodes(spec)?
        .iter()
        .fold(0.0, |acc, &(g, w)| acc + w * f(g)))
}

/// Normalized contrast averaged over the coupling distribution of `spec`
/// (`p.g` is replaced by the node values).
pub fn averaged_contrast_series(
    p: &RadicalPairParams<f64>,
    grid: &TimeGrid<f64>,
    spec: &EnsembleSpec,
) -> Result<TimeSeries<f64>> {
    let nodes = GaussHermite::coupling_nodes(spec)?;
    let per_node = nodes
        .par_iter()
        .map(|&(g, _)| sensor_contrast_numeric(&p.with_g(g), grid).map(|c| c.normalized))
        .collect::<Result<Vec<_>>>()?;
    let times = grid.times();
    let mut values = vec![0.0; times.len()];
    for (series, &(_, w)) in per_node.iter().zip(&nodes) {
        for (acc, v) in values.iter_mut().zip(series.values()) {
            *acc += w * v;
        }
    }
    TimeSeries::new(times, values)
}

/// Mean of `e^{iφ}` over `n_samples` seeded draws of `φ`.
pub fn phase_factor(spec: &EnsembleSpec) -> Result<Cplx<f64>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let draw: Box<dyn FnMut(&mut ChaCha8Rng) -> f64> = match spec.phi_model {
        PhaseModel::None => Box::new(|_| 0.0),
        PhaseModel::Uniform => Box::new(|r| r.random_range(0.0..std::f64::consts::TAU)),
        PhaseModel::Gaussian { width } => {
            let normal = Normal::new(0.0, width).map_err(|e| invalid("phi_width", &e.to_string()))?;
            Box::new(move |r| normal.sample(r))
        }
    };
    let mut draw = draw;
    let mut sum = c(0.0, 0.0);
    for _ in 0..spec.n_samples {
        sum += Cplx::from_polar(1.0, draw(&mut rng));
    }
    Ok(sum / spec.n_samples as f64)
}

/// Triplet fraction `1 - Φ_S(t)` of the one-nucleus pair (hyperfine `h`,
/// field `omega`) averaged over the phase draws of `spec`.
pub fn random_phase_triplet_series(h: f64, omega: f64, grid: &TimeGrid<f64>, spec: &EnsembleSpec) -> Result<TimeSeries<f64>> {
    if !(h > 0.0) || !omega.is_finite() {
        return Err(invalid("h", "hyperfine must be positive and field finite"));
    }
    let z = phase_factor(spec)?;
    let terms = timmel_terms(h, omega);
    Ok(TimeSeries::from_fn(grid, |t| {
        let singlet = terms
            .cosines
            .iter()
            .fold(terms.constant, |s, &(a, w)| s + a * (z * Cplx::from_polar(1.0, w * t)).re);
        1.0 - singlet
    }))
}
