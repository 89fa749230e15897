use spinpair::planner::*;

fn at(distance: f64) -> ExperimentParams {
    ExperimentParams {
        distance,
        ..Default::default()
    }
}

#[test]
fn halving_distance_multiplies_field_by_eight() {
    for r in [5e-9, 20e-9, 1e-6] {
        let ratio = dipole_field(&at(r / 2.0)).unwrap() / dipole_field(&at(r)).unwrap();
        assert!((ratio - 8.0).abs() < 1e-12);
    }
}

#[test]
fn bohr_magneton_at_twenty_nanometres() {
    // 1e-7 · 9.2740100783e-24 / (2e-8)³
    let oracle = 1e-7 * 9.2740100783e-24 / 8e-24;
    let b = dipole_field(&ExperimentParams::default()).unwrap();
    assert!((b - oracle).abs() < 1e-12 * oracle);
    assert!((b / 1.159e-7 - 1.0).abs() < 0.005);
}

#[test]
fn quoted_field_belongs_to_a_larger_distance() {
    let at_25 = dipole_field(&at(25e-9)).unwrap();
    assert!((at_25 / QUOTED_FIELD_AT_20NM - 1.0).abs() < 0.02);
    let at_20 = dipole_field(&at(20e-9)).unwrap();
    assert!((at_20 / QUOTED_FIELD_AT_20NM - 1.0).abs() > 0.5);
    let r = distance_for_field(QUOTED_FIELD_AT_20NM, BOHR_MAGNETON).unwrap();
    assert!((r - 25.05e-9).abs() < 0.01e-9);
    assert!((dipole_field(&at(r)).unwrap() / QUOTED_FIELD_AT_20NM - 1.0).abs() < 1e-12);
}

#[test]
fn power_law_on_log_grid() {
    let rs: Vec<f64> = (0..30).map(|i| 1e-9 * 10f64.powf(i as f64 / 10.0)).collect();
    let xs: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = rs.iter().map(|&r| dipole_field(&at(r)).unwrap().ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    assert!((sxy / sxx + 3.0).abs() < 1e-9);
    for w in ys.windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn repetition_counts() {
    let e = ExperimentParams::default();
    let reps = repetitions_for_snr(&e).unwrap();
    assert_eq!(reps, 111_112);
    assert!(reps >= 100_000);
    let same = ExperimentParams {
        target_snr: 0.03,
        ..e
    };
    assert_eq!(repetitions_for_snr(&same).unwrap(), 1);
    let four_x = ExperimentParams {
        target_snr: 1.2,
        single_shot_snr: 0.3,
        ..e
    };
    let base = ExperimentParams {
        target_snr: 0.3,
        single_shot_snr: 0.3,
        ..e
    };
    assert_eq!(repetitions_for_snr(&four_x).unwrap(), 16 * repetitions_for_snr(&base).unwrap());
}

#[test]
fn measurement_times() {
    let e = ExperimentParams::default();
    assert!((measurement_time(&e, 100_000).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(measurement_time(&e, 1).unwrap(), e.shot_duration);
    let t = measurement_time(&e, 777).unwrap();
    assert!((measurement_time(&e, 1554).unwrap() - 2.0 * t).abs() < 1e-18);
    let reps = repetitions_for_snr(&e).unwrap();
    assert!((measurement_time(&e, reps).unwrap() - reps as f64 * e.shot_duration).abs() < 1e-15);
}

#[test]
fn time_to_snr_examples() {
    let e = ExperimentParams {
        target_snr: 1.0,
        ..Default::default()
    };
    assert!((time_to_snr(10e-9, &e).unwrap() - 1.0).abs() < 1e-12);
    let half = ExperimentParams { efficiency: 0.5, ..e };
    assert!((time_to_snr(10e-9, &half).unwrap() - 4.0).abs() < 1e-12);
    assert!(time_to_snr(0.0, &e).is_err());
}

#[test]
fn efficiency_needed_for_ten_seconds() {
    let e = ExperimentParams {
        target_snr: 1.0,
        ..Default::default()
    };
    let at_quoted = required_efficiency(QUOTED_FIELD_AT_20NM, 10.0, &e).unwrap();
    // 10 nT / (59 nT · √10)
    assert!((at_quoted - 10.0 / (59.0 * 10f64.sqrt())).abs() < 1e-12);
    assert!((at_quoted - 0.0536).abs() < 1e-4);
    let back = ExperimentParams {
        efficiency: at_quoted,
        ..e
    };
    assert!((time_to_snr(QUOTED_FIELD_AT_20NM, &back).unwrap() - 10.0).abs() < 1e-9);
}

#[test]
fn report_lines() {
    let r = PlannerReport::new(&ExperimentParams::default(), 3600, 1.0, 10.0).unwrap();
    let text = r.render();
    assert!(text.contains("repetitions = 111112"));
    assert!(text.contains("nominal_time_per_point_s = 1.000000"));
    assert!(text.contains("nominal_total_time_s = 3600.000 (3600 points, 1.0000 h)"));
    assert!(text.contains("dipole_field_nT = 115.9251"));
    assert!(text.contains("computed = 115.93 nT, quoted = 59 nT"));
    assert!(text.contains("r = 25.05 nm"));
    assert!(PlannerReport::new(&ExperimentParams::default(), 0, 1.0, 10.0).is_err());
}
