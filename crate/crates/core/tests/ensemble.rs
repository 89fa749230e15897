use spinpair::dynamics::{sensor_contrast_numeric, timmel_singlet_analytic, TimeGrid};
use spinpair::ensemble::*;
use spinpair::RadicalPairParams;

fn grid(t_end: f64, n: usize) -> TimeGrid<f64> {
    TimeGrid::new(0.0, t_end, n).unwrap()
}

/// Trapezoid over ±12 standard deviations of the normalized Gaussian.
fn dense_average(f: impl Fn(f64) -> f64, g0: f64, eta: f64) -> f64 {
    let n = 200_000;
    let half = 12.0 / (2.0 * eta).sqrt();
    let h = 2.0 * half / n as f64;
    let norm = (eta / std::f64::consts::PI).sqrt();
    (0..=n)
        .map(|i| {
            let g = g0 - half + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            w * norm * (-eta * (g - g0).powi(2)).exp() * f(g)
        })
        .sum::<f64>()
        * h
}

#[test]
fn gaussian_moments() {
    for (g0, eta) in [(0.1, 400.0), (0.1, 100.0), (-0.3, 2.0)] {
        let spec = EnsembleSpec::new(g0, eta);
        assert!((gauss_average(|_| 1.0, &spec).unwrap() - 1.0).abs() < 1e-13);
        assert!((gauss_average(|g| g, &spec).unwrap() - g0).abs() < 1e-13);
        let var = gauss_average(|g| (g - g0).powi(2), &spec).unwrap();
        assert!((var - spec.variance()).abs() < 1e-13);
        for f in [|g: f64| g * g, |g: f64| (5.0 * g).cos()] {
            let oracle = dense_average(f, g0, eta);
            assert!((gauss_average(f, &spec).unwrap() - oracle).abs() < 1e-10);
        }
    }
}

#[test]
fn characteristic_function() {
    // E[cos(k g)] = cos(k g0) exp(-k²/(4η)).
    let (g0, eta, k) = (0.1, 100.0, 30.0);
    let spec = EnsembleSpec::new(g0, eta);
    let exact = (k * g0).cos() * (-k * k / (4.0 * eta)).exp();
    assert!((gauss_average(|g| (k * g).cos(), &spec).unwrap() - exact).abs() < 1e-12);
}

#[test]
fn polynomial_exactness() {
    for n in [3usize, 5, 9] {
        let spec = EnsembleSpec::new(0.0, 0.5).with_nodes(n);
        // With variance 1 the even moments are (k-1)!!.
        let mut double_factorial = 1.0;
        for k in (0..2 * n).step_by(2) {
            if k > 0 {
                double_factorial *= (k - 1) as f64;
            }
            let m = gauss_average(|g| g.powi(k as i32), &spec).unwrap();
            assert!((m - double_factorial).abs() < 1e-9 * double_factorial, "n = {n}, k = {k}: {m}");
            let odd = gauss_average(|g| g.powi(k as i32 + 1), &spec).unwrap();
            assert!(odd.abs() < 1e-9 * double_factorial.max(1.0));
        }
    }
}

#[test]
fn delta_limit_is_single_coupling() {
    let p = RadicalPairParams::reference(0.5);
    let g = grid(100.0, 201);
    let spec = EnsembleSpec::new(0.1, f64::INFINITY);
    let avg = averaged_contrast_series(&p, &g, &spec).unwrap();
    let single = sensor_contrast_numeric(&p.with_g(0.1), &g).unwrap().normalized;
    assert_eq!(avg.max_abs_diff(&single), 0.0);
}

#[test]
fn averaged_contrast_starts_at_one_and_stays_in_envelope() {
    let p = RadicalPairParams::reference(0.5);
    let g = grid(60.0, 61);
    let spec = EnsembleSpec::new(0.1, 400.0).with_nodes(21);
    let avg = averaged_contrast_series(&p, &g, &spec).unwrap();
    assert!((avg.values()[0] - 1.0).abs() < 1e-12);
    let per_node: Vec<_> = GaussHermite::coupling_nodes(&spec)
        .unwrap()
        .iter()
        .map(|&(gc, _)| sensor_contrast_numeric(&p.with_g(gc), &g).unwrap().normalized)
        .collect();
    for i in 0..g.len() {
        let lo = per_node.iter().map(|s| s.values()[i]).fold(f64::INFINITY, f64::min);
        let hi = per_node.iter().map(|s| s.values()[i]).fold(f64::NEG_INFINITY, f64::max);
        assert!(avg.values()[i] >= lo - 1e-12 && avg.values()[i] <= hi + 1e-12);
    }
}

#[test]
fn broadening_damps_late_oscillations() {
    let p = RadicalPairParams::reference(0.5);
    let g = grid(200.0, 401);
    let sharp = averaged_contrast_series(&p, &g, &EnsembleSpec::new(0.1, f64::INFINITY)).unwrap();
    let broad = averaged_contrast_series(&p, &g, &EnsembleSpec::new(0.1, 100.0).with_nodes(41)).unwrap();
    assert!(broad.peak_to_peak_after(100.0) < 0.5 * sharp.peak_to_peak_after(100.0));
}

#[test]
fn averaging_is_deterministic() {
    let p = RadicalPairParams::reference(1.0);
    let g = grid(50.0, 51);
    let spec = EnsembleSpec::new(0.1, 400.0).with_nodes(15);
    let a = averaged_contrast_series(&p, &g, &spec).unwrap();
    let b = averaged_contrast_series(&p, &g, &spec).unwrap();
    assert_eq!(a, b);
}

#[test]
fn uniform_phase_leaves_mean_triplet_fraction() {
    // Every cosine carries φ, including the two zero-frequency terms at
    // ω = 0, so only the constant 3/8 of Φ_S survives.
    let n = 100_000;
    let spec = EnsembleSpec::new(0.0, 1.0).with_phase(PhaseModel::Uniform, n, 7);
    let s = random_phase_triplet_series(1.0, 0.0, &grid(20.0, 101), &spec).unwrap();
    let bound = 3.0 * 0.625 / (n as f64).sqrt();
    for v in s.values() {
        assert!((v - 0.625).abs() < bound, "{v}");
    }
}

#[test]
fn phase_draws_are_seeded() {
    let spec = EnsembleSpec::new(0.0, 1.0).with_phase(PhaseModel::Gaussian { width: 0.4 }, 5000, 11);
    assert_eq!(phase_factor(&spec).unwrap(), phase_factor(&spec).unwrap());
    let other = phase_factor(&EnsembleSpec { seed: 12, ..spec }).unwrap();
    assert_ne!(phase_factor(&spec).unwrap(), other);
    // E[e^{iφ}] = e^{-σ²/2} for a centred normal.
    let z = phase_factor(&spec).unwrap();
    assert!((z.re - (-0.08f64).exp()).abs() < 4.0 / (5000f64).sqrt());
}

#[test]
fn fixed_phase_reproduces_analytic_triplet_fraction() {
    let spec = EnsembleSpec::new(0.0, 1.0).with_phase(PhaseModel::None, 3, 0);
    let g = grid(40.0, 81);
    for omega in [0.0, 0.7] {
        let s = random_phase_triplet_series(1.3, omega, &g, &spec).unwrap();
        for (&t, &v) in s.times().iter().zip(s.values()) {
            assert!((v - (1.0 - timmel_singlet_analytic(1.3, omega, t, 0.0))).abs() < 1e-14);
        }
    }
}

#[test]
fn invalid_specs_are_rejected() {
    let p = RadicalPairParams::reference(0.5);
    let g = grid(10.0, 11);
    assert!(averaged_contrast_series(&p, &g, &EnsembleSpec::new(0.1, -1.0)).is_err());
    assert!(averaged_contrast_series(&p, &g, &EnsembleSpec::new(0.1, 1.0).with_nodes(10)).is_err());
    let bad_width = EnsembleSpec::new(0.0, 1.0).with_phase(PhaseModel::Gaussian { width: -1.0 }, 10, 0);
    assert!(phase_factor(&bad_width).is_err());
    assert!(random_phase_triplet_series(0.0, 0.0, &g, &EnsembleSpec::new(0.0, 1.0)).is_err());
}
