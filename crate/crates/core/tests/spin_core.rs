use proptest::prelude::*;
use spinpair::hamiltonian::{branch_hamiltonian, build_hamiltonian, sensor_block};
use spinpair::linalg::{kron, partial_trace};
use spinpair::spin::{singlet_projector, spin_operators};
use spinpair::{Complex, DensityMatrix, Error, Operator, RadicalPairParams, RpState, SensorLevel, Slot, SystemLayout};

fn z(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn mat(n: usize, entries: &[Complex]) -> Operator {
    Operator::from_vec(n, entries.to_vec()).unwrap()
}

/// Plain nested-loop product, independent of `Operator::matmul`.
fn brute_mul(a: &Operator, b: &Operator) -> Vec<Complex> {
    let n = a.dim();
    let mut out = vec![z(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i * n + j] += a.get(i, k) * b.get(k, j);
            }
        }
    }
    out
}

fn max_diff(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn entries(a: &Operator) -> Vec<Complex> {
    a.as_slice().to_vec()
}

fn complex_entry() -> impl Strategy<Value = Complex> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, i)| z(r, i))
}

fn matrix2() -> impl Strategy<Value = Operator> {
    proptest::collection::vec(complex_entry(), 4).prop_map(|v| mat(2, &v))
}

fn random_state(n: usize) -> impl Strategy<Value = Operator> {
    proptest::collection::vec(complex_entry(), n * n).prop_map(move |v| {
        let a = mat(n, &v);
        let m = a.matmul(&a.adjoint());
        let tr = m.trace().re;
        m.scale_real(1.0 / tr)
    })
}

#[test]
fn kron_of_identities_and_pauli_z() {
    let i2 = Operator::identity(&[2]);
    let i4 = kron(&i2, &i2);
    assert_eq!(i4.dim(), 4);
    assert_eq!(i4.subsystem_dims(), &[2, 2]);
    assert_eq!(i4.max_abs_diff(&Operator::identity(&[4])), 0.0);

    let sz = Operator::from_real_diagonal(&[1.0, -1.0]);
    let zz = kron(&sz, &sz);
    let expected = [1.0, -1.0, -1.0, 1.0];
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { expected[i] } else { 0.0 };
            assert_eq!(zz.get(i, j), z(want, 0.0));
        }
    }
}

proptest! {
    #[test]
    fn kron_mixed_product(a in matrix2(), b in matrix2(), c in matrix2(), d in matrix2()) {
        let lhs = brute_mul(&kron(&a, &b), &kron(&c, &d));
        let ac = mat(2, &brute_mul(&a, &c));
        let bd = mat(2, &brute_mul(&b, &d));
        prop_assert!(max_diff(&lhs, &entries(&kron(&ac, &bd))) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace(rho in random_state(8)) {
        let rho = DensityMatrix::new(rho.with_dims(&[2, 2, 2]).unwrap()).unwrap();
        for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]] {
            let r = partial_trace(&rho, &keep).unwrap();
            prop_assert!((r.as_operator().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_undoes_kron(a in random_state(2), b in random_state(3)) {
        let ra = DensityMatrix::new(a).unwrap();
        let rb = DensityMatrix::new(b).unwrap();
        let ab = ra.kron(&rb);
        prop_assert!(ab.partial_trace(&[0]).unwrap().as_operator().max_abs_diff(ra.as_operator()) < 1e-12);
        prop_assert!(ab.partial_trace(&[1]).unwrap().as_operator().max_abs_diff(rb.as_operator()) < 1e-12);
    }

    #[test]
    fn hamiltonian_hermitian_and_block_structure(
        omega in -3.0f64..3.0,
        g in -1.0f64..1.0,
        h_b in prop_oneof![Just(0.0), -1.0f64..1.0],
    ) {
        let mut p = RadicalPairParams::unit_hyperfine().with_omega(omega).with_g(g);
        p.h_b = h_b;
        let h = build_hamiltonian(&p, true).unwrap();
        prop_assert!(h.hermiticity_deviation() <= 1e-12);
        for level in [SensorLevel::Plus, SensorLevel::Zero, SensorLevel::Minus] {
            let block = sensor_block(&h, level, level).unwrap();
            let expected = build_hamiltonian(&p.with_omega(omega + level.m::<f64>() * g), false).unwrap();
            prop_assert!(block.max_abs_diff(&expected) <= 1e-12);
            for other in [SensorLevel::Plus, SensorLevel::Zero, SensorLevel::Minus] {
                if other != level {
                    prop_assert_eq!(sensor_block(&h, level, other).unwrap().max_abs(), 0.0);
                }
            }
        }
    }
}

#[test]
fn spin_algebra() {
    for n in [2, 3] {
        let s = spin_operators::<f64>(n).unwrap();
        let comm = &s.x.matmul(&s.y) - &s.y.matmul(&s.x);
        assert!(comm.max_abs_diff(&s.z.scale(z(0.0, 1.0))) < 1e-12);
    }
    let half = spin_operators::<f64>(2).unwrap();
    assert_eq!(half.z.get(0, 0), z(0.5, 0.0));
    assert_eq!(half.z.get(1, 1), z(-0.5, 0.0));
    let one = spin_operators::<f64>(3).unwrap();
    for (i, v) in [1.0, 0.0, -1.0].iter().enumerate() {
        assert_eq!(one.z.get(i, i), z(*v, 0.0));
    }
    assert!(matches!(spin_operators::<f64>(4), Err(Error::UnsupportedSpin(4))));
}

#[test]
fn singlet_projector_properties() {
    for layout in [SystemLayout::radical_pair(false), SystemLayout::with_sensor(false)] {
        let p = singlet_projector::<f64>(&layout).unwrap();
        let other: usize = layout.total_dim() / 4;
        assert!((p.trace().re - other as f64).abs() < 1e-12);
        assert!(p.matmul(&p).max_abs_diff(&p) < 1e-12);
    }
    let pair = SystemLayout::new(vec![Slot::ElectronA, Slot::ElectronB]).unwrap();
    let p = singlet_projector::<f64>(&pair).unwrap();
    let t0 = RpState::T0.amplitudes::<f64>();
    let s = RpState::Singlet.amplitudes::<f64>();
    assert!(p.sandwich(&t0, &t0).norm() < 1e-15);
    assert!((p.sandwich(&s, &s).re - 1.0).abs() < 1e-15);

    let no_electrons = SystemLayout::new(vec![Slot::Sensor, Slot::NucleusA]).unwrap();
    assert!(singlet_projector::<f64>(&no_electrons).is_err());
}

#[test]
fn decoupled_sensor_blocks_are_identical() {
    let p = RadicalPairParams::reference(0.7).with_g(0.0);
    let h = build_hamiltonian(&p, true).unwrap();
    let h0 = sensor_block(&h, SensorLevel::Zero, SensorLevel::Zero).unwrap();
    let hp = sensor_block(&h, SensorLevel::Plus, SensorLevel::Plus).unwrap();
    assert_eq!(hp.max_abs_diff(&h0), 0.0);
    assert_eq!(branch_hamiltonian(&p, SensorLevel::Minus).unwrap().max_abs_diff(&h0), 0.0);
}

#[test]
fn zero_field_spectrum_from_angular_momentum() {
    // I·S_A has eigenvalue (F(F+1) - 3/2)/2: 1/4 on F = 1, -3/4 on F = 0;
    // electron B doubles each level.
    let h = build_hamiltonian(&RadicalPairParams::unit_hyperfine(), false).unwrap();
    let eig = spinpair::eigen::eigh(&h).unwrap();
    let mut expected = vec![-0.75, -0.75, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25];
    expected.sort_by(f64::total_cmp);
    for (a, b) in eig.values().iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn hamiltonian_matches_hand_built_matrix() {
    // A ⊗ B ⊗ N with Pauli matrices written out explicitly.
    let (w, h_a) = (0.37, 1.0);
    let p = RadicalPairParams::unit_hyperfine().with_omega(w);
    let sx = mat(2, &[z(0.0, 0.0), z(0.5, 0.0), z(0.5, 0.0), z(0.0, 0.0)]);
    let sy = mat(2, &[z(0.0, 0.0), z(0.0, -0.5), z(0.0, 0.5), z(0.0, 0.0)]);
    let sz = mat(2, &[z(0.5, 0.0), z(0.0, 0.0), z(0.0, 0.0), z(-0.5, 0.0)]);
    let i2 = Operator::identity(&[2]);
    let three = |a: &Operator, b: &Operator, c: &Operator| kron(&kron(a, b), c);
    let hyper = &(&three(&sx, &i2, &sx) + &three(&sy, &i2, &sy)) + &three(&sz, &i2, &sz);
    let zeeman = &three(&sz, &i2, &i2) + &three(&i2, &sz, &i2);
    let expected = &hyper.scale_real(h_a) + &zeeman.scale_real(w);
    assert!(build_hamiltonian(&p, false).unwrap().max_abs_diff(&expected) < 1e-15);
}

#[test]
fn bell_state_reduces_to_maximally_mixed() {
    let r = 1.0 / 2f64.sqrt();
    let bell = DensityMatrix::pure(&[z(r, 0.0), z(0.0, 0.0), z(0.0, 0.0), z(r, 0.0)])
        .with_dims(&[2, 2])
        .unwrap();
    let reduced = bell.partial_trace(&[0]).unwrap();
    assert!(reduced.as_operator().max_abs_diff(&Operator::identity(&[2]).scale_real(0.5)) < 1e-12);
    assert!(bell.partial_trace(&[]).is_err());
    assert!(bell.partial_trace(&[2]).is_err());
}

#[test]
fn density_matrix_validation() {
    let not_unit_trace = Operator::identity(&[2]);
    assert!(DensityMatrix::new(not_unit_trace).is_err());
    let negative = Operator::from_real_diagonal(&[1.5, -0.5]);
    assert!(DensityMatrix::new(negative).is_err());
    let mut non_herm = Operator::identity(&[2]).scale_real(0.5);
    non_herm.set(0, 1, z(0.1, 0.0));
    assert!(DensityMatrix::new(non_herm).is_err());
}

#[test]
fn single_precision_hamiltonian() {
    let p = spinpair::params::RadicalPairParams::<f32>::reference(0.5);
    let h = build_hamiltonian(&p, true).unwrap();
    assert_eq!(h.dim(), 24);
    assert!(h.hermiticity_deviation() < 1e-6);
}
