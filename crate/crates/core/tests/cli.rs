use std::process::Command;

use spinpair::cli::run;

fn run_in_process(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let argv = std::iter::once("spinpair").chain(args.iter().copied());
    run(argv, &mut out).map_err(|e| e.to_string())?;
    Ok(String::from_utf8(out).unwrap())
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn header(csv: &str) -> &str {
    csv.lines().next().unwrap()
}

#[test]
fn oscillations_schema_and_initial_row() {
    let csv = run_in_process(&["oscillations", "--t-max", "20", "--t-steps", "41"]).unwrap();
    assert_eq!(header(&csv), "t,P_S,Phi_T,C_norm");
    let r = rows(&csv);
    assert_eq!(r.len(), 41);
    assert!((r[0][1] - 1.0).abs() < 1e-12);
    assert!((r[0][3] - 1.0).abs() < 1e-12);
    for row in &r {
        assert!((row[1] + row[2] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn numbers_carry_enough_digits() {
    let csv = run_in_process(&["oscillations", "--t-max", "1", "--t-steps", "2"]).unwrap();
    let cell = csv.lines().nth(2).unwrap().split(',').nth(1).unwrap();
    let mantissa = cell.split('e').next().unwrap().replace(['.', '-'], "");
    assert!(mantissa.len() >= 12, "{cell}");
}

#[test]
fn decoupled_sensor_gives_flat_contrast() {
    let csv = run_in_process(&["oscillations", "--g", "0", "--t-steps", "50"]).unwrap();
    for row in rows(&csv) {
        assert!((row[3] - 1.0).abs() < 1e-12);
    }
    let scan = run_in_process(&["field-scan", "--g", "0", "--omega-steps", "7"]).unwrap();
    let r = rows(&scan);
    for row in &r {
        assert!((row[2] - r[0][2]).abs() < 1e-6);
    }
}

#[test]
fn field_scan_schema_and_low_field_effect() {
    let csv = run_in_process(&["field-scan", "--omega-max", "1", "--omega-steps", "11"]).unwrap();
    assert_eq!(header(&csv), "omega,Phi_S,C_yield");
    let r = rows(&csv);
    assert_eq!(r.len(), 11);
    for row in &r {
        assert!((0.0..=1.0).contains(&row[1]));
    }
    assert!((r[0][1] - r[10][1]).abs() > 0.01);
    let physical = run_in_process(&["field-scan", "--units", "physical", "--omega-max", "1e-4", "--omega-steps", "3"]).unwrap();
    assert_eq!(header(&physical), "B,Phi_S,C_yield");
}

#[test]
fn ensemble_delta_limit_matches_oscillations() {
    let args = ["--t-max", "100", "--t-steps", "51"];
    let ens = run_in_process(&[&["ensemble", "--eta", "inf"][..], &args].concat()).unwrap();
    let osc = run_in_process(&[&["oscillations"][..], &args].concat()).unwrap();
    assert_eq!(header(&ens), "t,C_eta_inf");
    for (a, b) in rows(&ens).iter().zip(rows(&osc)) {
        assert_eq!(a[1], b[3]);
    }
}

#[test]
fn ensemble_amplitudes_ordered_along_eta_ladder() {
    let csv = run_in_process(&["ensemble", "--t-steps", "401", "--nodes", "41"]).unwrap();
    assert_eq!(header(&csv), "t,C_eta_inf,C_eta_400,C_eta_100");
    let r = rows(&csv);
    let amplitude = |col: usize| {
        let tail: Vec<f64> = r.iter().filter(|row| row[0] >= 100.0).map(|row| row[col]).collect();
        tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - tail.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    assert!(amplitude(1) > amplitude(2) && amplitude(2) > amplitude(3));
}

#[test]
fn teer_schema_and_zero_tau_row() {
    let csv = run_in_process(&["teer", "--tau-steps", "11"]).unwrap();
    assert_eq!(header(&csv), "tau,C_S,C_T0,C_Tplus,C_Tminus");
    let r = rows(&csv);
    assert_eq!(r.len(), 11);
    for v in &r[0][1..] {
        assert!((v - 1.0).abs() < 1e-12);
    }
    let pi = run_in_process(&["teer", "--variant", "pi", "--tau-steps", "11"]).unwrap();
    for row in rows(&pi) {
        assert!((row[1] - row[2]).abs() < 1e-12);
    }
}

#[test]
fn control_schemas() {
    let tau = run_in_process(&["control", "--m-pulses", "0", "--tau-min", "1", "--tau-max", "5", "--tau-steps", "3"]).unwrap();
    assert_eq!(header(&tau), "tau,Phi_S");
    let r = rows(&tau);
    let plain = spinpair::dynamics::sensor_averaged_singlet_yield(&spinpair::RadicalPairParams::reference(0.5)).unwrap();
    for row in &r {
        assert!((row[1] - plain).abs() < 1e-10);
    }
    let toggle = run_in_process(&["control", "--mode", "toggle", "--omega-max", "0.3", "--omega-steps", "31"]).unwrap();
    assert_eq!(header(&toggle), "omega,Phi_S");
    let best = rows(&toggle).into_iter().max_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
    assert!((best[0] - 0.1).abs() <= 0.01 + 0.01);
}

#[test]
fn planner_report() {
    let text = run_in_process(&["planner"]).unwrap();
    assert!(text.contains("repetitions = 111112"));
    assert!(text.contains("nominal_time_per_point_s = 1.000000"));
    assert!(text.contains("nominal_total_time_s = 3600.000"));
    assert!(text.contains("quoted = 59 nT"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# decoupled\ng = 0\nt_max = 10\nt-steps = 5\n").unwrap();
    let path = cfg.to_str().unwrap();
    let from_file = run_in_process(&["oscillations", "--config", path]).unwrap();
    assert_eq!(rows(&from_file).len(), 5);
    for row in rows(&from_file) {
        assert!((row[3] - 1.0).abs() < 1e-12);
    }
    let overridden = run_in_process(&["oscillations", "--config", path, "--t-steps", "3"]).unwrap();
    assert_eq!(rows(&overridden).len(), 3);
}

#[test]
fn invalid_input_names_the_field() {
    let e = run_in_process(&["oscillations", "--g", "abc"]).unwrap_err();
    assert!(e.starts_with("error[g]:"), "{e}");
    let e = run_in_process(&["ensemble", "--nodes", "4"]).unwrap_err();
    assert!(e.starts_with("error[nodes]:"), "{e}");
    let e = run_in_process(&["teer", "--variant", "pi3"]).unwrap_err();
    assert!(e.starts_with("error[variant]:"), "{e}");
    assert!(run_in_process(&["nonsense"]).unwrap_err().starts_with("error[args]:"));
}

#[test]
fn binary_exit_codes_and_output_file() {
    let exe = env!("CARGO_BIN_EXE_spinpair");
    let bad = Command::new(exe).args(["oscillations", "--t-steps", "zero"]).output().unwrap();
    assert!(!bad.status.success());
    let err = String::from_utf8(bad.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1);
    assert!(err.starts_with("error[t-steps]:"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let args = ["ensemble", "--t-steps", "21", "--nodes", "9", "--phase", "uniform", "--seed", "5", "--out"];
    let status = Command::new(exe).args(args).arg(&out).status().unwrap();
    assert!(status.success());
    let first = std::fs::read(&out).unwrap();
    Command::new(exe).args(args).arg(&out).status().unwrap();
    assert_eq!(first, std::fs::read(&out).unwrap());
    assert!(String::from_utf8(first).unwrap().starts_with("t,C_eta_inf,C_eta_400,C_eta_100,Phi_T_phase\n"));
}
