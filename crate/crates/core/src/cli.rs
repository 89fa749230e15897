//! Command-line front end. Every setting is a `key=value` pair that can come
//! from `--config FILE` or from a `--key value` flag; flags win.
//!
//! CSV schemas (first column in physical units when `--units physical`):
//!
//! | command | columns |
//! |---|---|
//! | `oscillations` | `t,P_S,Phi_T,C_norm` |
//! | `field-scan` | `omega,Phi_S,C_yield` (`B,…` in physical units) |
//! | `ensemble` | `t,C_eta_<η>…` plus `Phi_T_phase` when `--phase` is not `none` |
//! | `teer` | `tau,C_S,C_T0,C_Tplus,C_Tminus` |
//! | `control --mode tau` | `tau,Phi_S` |
//! | `control --mode toggle` | `omega,Phi_S` (`B,…` in physical units) |
//!
//! `planner` prints a `key = value` text report in SI units.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Arg, ArgAction, Command};

use crate::control::{controlled_yield_scan, teer_contrast, toggle_field_nulling_scan, TeerVariant};
use crate::dynamics::{
    field_scan, linspace, sensor_contrast_numeric, singlet_probability_series, SensorState, TimeGrid,
};
use crate::ensemble::{averaged_contrast_series, random_phase_triplet_series, EnsembleSpec, PhaseModel};
use crate::params::{RadicalPairParams, SensorSubspace};
use crate::planner::{ExperimentParams, PlannerReport, BOHR_MAGNETON};
use crate::spin::RpState;
use crate::units::{HyperfineScale, DEFAULT_FIELD_T, DEFAULT_HYPERFINE_HZ};

pub const COMMANDS: [&str; 6] = ["oscillations", "field-scan", "ensemble", "teer", "control", "planner"];

/// Single-line error: `error[<field>]: <message>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub field: String,
    pub message: String,
}

impl CliError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg: String = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "error[{}]: {}", self.field, msg)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match &e {
            crate::Error::InvalidParameter { field, reason } => CliError::new(field.replace('_', "-"), reason.clone()),
            _ => CliError::new("compute", e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct OptSpec {
    key: &'static str,
    /// Default in `h_A` units; `None` when derived elsewhere or optional.
    default: Option<&'static str>,
    help: &'static str,
}

const fn opt(key: &'static str, default: Option<&'static str>, help: &'static str) -> OptSpec {
    OptSpec { key, default, help }
}

const OPTIONS: &[OptSpec] = &[
    opt("out", None, "output path (stdout when absent)"),
    opt("seed", Some("0"), "seed for random phase draws"),
    opt("units", Some("ha"), "ha | physical"),
    opt("h-a", None, "hyperfine constant (1 in ha units, Hz in physical units; default 14e6)"),
    opt("h-b", Some("0"), "hyperfine constant of a second nucleus on electron B"),
    opt("omega", None, "Larmor term (ha units, default 0.5) or field in T (physical, default 50e-6)"),
    opt("g", Some("0.1"), "sensor-pair coupling (Hz in physical units)"),
    opt("kappa", Some("0.01"), "recombination rate (1/s in physical units)"),
    opt("gamma", Some("0"), "sensor relaxation rate (1/s in physical units)"),
    opt("polarization", Some("0"), "nuclear polarization in [-1, 1]"),
    opt("subspace", Some("plus"), "plus | minus"),
    opt("t-min", Some("0"), "first time point"),
    opt("t-max", Some("200"), "last time point"),
    opt("t-steps", Some("2000"), "number of time points"),
    opt("omega-min", Some("0"), "scan start (field in T in physical units)"),
    opt("omega-max", Some("2"), "scan end"),
    opt("omega-steps", Some("200"), "number of scan points"),
    opt("tau-min", Some("0"), "first free-evolution time"),
    opt("tau-max", Some("50"), "last free-evolution time"),
    opt("tau-steps", Some("201"), "number of tau points"),
    opt("eta", Some("inf,400,100"), "comma-separated inverse-variance weights (s^2 in physical units)"),
    opt("nodes", None, "Gauss-Hermite node count (odd)"),
    opt("phase", Some("none"), "none | uniform | gaussian"),
    opt("phase-width", Some("1"), "standard deviation of the gaussian phase"),
    opt("samples", Some("1000"), "number of phase draws"),
    opt("m-pulses", Some("4"), "even number of segments for the tau scan"),
    opt("mode", Some("tau"), "control scan: tau | toggle"),
    opt("variant", Some("pi2"), "pair pulse: pi | pi2"),
    opt("frozen-rp", Some("true"), "drop hyperfine and field during the echo"),
    opt("distance", Some("20e-9"), "sensor-electron distance in m"),
    opt("moment", None, "magnetic moment in J/T (default Bohr magneton)"),
    opt("angle", Some("1.5707963267948966"), "angle between moment and separation in rad"),
    opt("sensitivity", Some("10e-9"), "field sensitivity in T/sqrt(Hz)"),
    opt("shot-duration", Some("10e-6"), "duration of one repetition in s"),
    opt("single-shot-snr", Some("0.03"), "SNR of one repetition"),
    opt("target-snr", Some("10"), "SNR per data point"),
    opt("efficiency", Some("1"), "signal efficiency for the time-to-SNR estimate"),
    opt("data-points", Some("3600"), "number of data points"),
    opt("detection-snr", Some("1"), "SNR for the detection-time estimate"),
    opt("target-time", Some("10"), "acquisition time the efficiency is solved for, in s"),
];

fn spec_of(key: &str) -> Option<&'static OptSpec> {
    OPTIONS.iter().find(|o| o.key == key)
}

fn command() -> Command {
    let mut cmd = Command::new("spinpair")
        .about("Radical pair dynamics seen through a spin-1 sensor")
        .version(env!("CARGO_PKG_VERSION"))
        .arg(
            Arg::new("command")
                .value_parser(COMMANDS)
                .help("oscillations | field-scan | ensemble | teer | control | planner"),
        )
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .help("key=value file with # comments"),
        );
    for o in OPTIONS {
        cmd = cmd.arg(
            Arg::new(o.key)
                .long(o.key)
                .value_name("VALUE")
                .action(ArgAction::Set)
                .help(o.help),
        );
    }
    cmd
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::new("config", format!("line {}: expected key=value", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if key != "command" && spec_of(&key).is_none() {
            return Err(CliError::new("config", format!("line {}: unknown key `{key}`", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitsMode {
    Ha,
    Physical,
}

/// Resolved settings for one run.
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<String, String>,
    pub units: UnitsMode,
    scale: Option<HyperfineScale>,
    pub params: RadicalPairParams<f64>,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    fn from_matches(m: &clap::ArgMatches) -> CliResult<Self> {
        let mut values = match m.get_one::<String>("config") {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::new("config", format!("{path}: {e}")))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        for o in OPTIONS {
            if let Some(v) = m.get_one::<String>(o.key) {
                values.insert(o.key.to_string(), v.clone());
            }
        }
        if let Some(c) = m.get_one::<String>("command") {
            values.insert("command".into(), c.clone());
        }
        Self::from_values(values)
    }

    pub fn from_values(values: BTreeMap<String, String>) -> CliResult<Self> {
        let command = values
            .get("command")
            .cloned()
            .ok_or_else(|| CliError::new("command", "missing command"))?;
        if !COMMANDS.contains(&command.as_str()) {
            return Err(CliError::new("command", format!("unknown command `{command}`")));
        }
        let mut cfg = RunConfig {
            command,
            values,
            units: UnitsMode::Ha,
            scale: None,
            params: RadicalPairParams::unit_hyperfine(),
            seed: 0,
            output_path: None,
        };
        cfg.units = match cfg.text("units")?.as_str() {
            "ha" => UnitsMode::Ha,
            "physical" => UnitsMode::Physical,
            other => return Err(CliError::new("units", format!("expected ha or physical, got `{other}`"))),
        };
        cfg.seed = cfg.parse::<u64>("seed")?;
        cfg.output_path = cfg.optional("out").map(PathBuf::from);
        cfg.params = cfg.build_params()?;
        Ok(cfg)
    }

    fn optional(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }

    fn user_value(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn text(&self, key: &'static str) -> CliResult<String> {
        self.values
            .get(key)
            .cloned()
            .or_else(|| spec_of(key).and_then(|o| o.default).map(str::to_string))
            .ok_or_else(|| CliError::new(key, "missing value"))
    }

    fn parse<V: std::str::FromStr>(&self, key: &'static str) -> CliResult<V> {
        let raw = self.text(key)?;
        raw.trim()
            .parse::<V>()
            .map_err(|_| CliError::new(key, format!("cannot parse `{raw}`")))
    }

    fn real(&self, key: &'static str) -> CliResult<f64> {
        let v: f64 = self.parse(key)?;
        if !v.is_finite() {
            return Err(CliError::new(key, "must be finite"));
        }
        Ok(v)
    }

    fn flag(&self, key: &'static str) -> CliResult<bool> {
        match self.text(key)?.to_ascii_lowercase().as_str() {
            "true" | "1" | "yes" | "on" => Ok(true),
            "false" | "0" | "no" | "off" => Ok(false),
            other => Err(CliError::new(key, format!("expected a boolean, got `{other}`"))),
        }
    }

    fn physical(&self) -> Option<&HyperfineScale> {
        self.scale.as_ref()
    }

    /// A user-supplied quantity converted to `h_A` units; defaults are
    /// already in `h_A` units.
    fn quantity(&self, key: &'static str, convert: impl Fn(&HyperfineScale, f64) -> f64) -> CliResult<f64> {
        let v = self.real(key)?;
        match (self.physical(), self.user_value(key)) {
            (Some(s), Some(_)) => Ok(convert(s, v)),
            _ => Ok(v),
        }
    }

    fn time(&self, key: &'static str) -> CliResult<f64> {
        self.quantity(key, |s, v| s.time(v))
    }

    fn field(&self, key: &'static str) -> CliResult<f64> {
        self.quantity(key, |s, v| s.field(v))
    }

    fn build_params(&mut self) -> CliResult<RadicalPairParams<f64>> {
        let h_a = match self.units {
            UnitsMode::Ha => match self.user_value("h-a") {
                Some(_) => self.real("h-a")?,
                None => 1.0,
            },
            UnitsMode::Physical => {
                let hz = match self.user_value("h-a") {
                    Some(_) => self.real("h-a")?,
                    None => DEFAULT_HYPERFINE_HZ,
                };
                self.scale = Some(HyperfineScale::from_hz(hz)?);
                1.0
            }
        };
        let omega = match (self.user_value("omega"), self.physical()) {
            (Some(_), _) => self.field("omega")?,
            (None, Some(s)) => s.field(DEFAULT_FIELD_T),
            (None, None) => 0.5,
        };
        let subspace = match self.text("subspace")?.as_str() {
            "plus" => SensorSubspace::Plus,
            "minus" => SensorSubspace::Minus,
            other => return Err(CliError::new("subspace", format!("expected plus or minus, got `{other}`"))),
        };
        let p = RadicalPairParams {
            h_a,
            h_b: self.quantity("h-b", |s, v| s.frequency_hz(v))?,
            omega,
            g: self.quantity("g", |s, v| s.frequency_hz(v))?,
            kappa: self.quantity("kappa", |s, v| s.rate(v))?,
            gamma: self.quantity("gamma", |s, v| s.rate(v))?,
            nuclear_polarization: self.real("polarization")?,
            subspace,
        };
        p.validate()?;
        Ok(p)
    }

    fn count(&self, key: &'static str, min: usize) -> CliResult<usize> {
        let n: usize = self.parse(key)?;
        if n < min {
            return Err(CliError::new(key, format!("must be at least {min}")));
        }
        Ok(n)
    }

    fn time_grid(&self) -> CliResult<TimeGrid<f64>> {
        let grid = TimeGrid::new(self.time("t-min")?, self.time("t-max")?, self.count("t-steps", 2)?)?;
        Ok(grid)
    }

    fn omega_range(&self) -> CliResult<Vec<f64>> {
        let (lo, hi) = (self.field("omega-min")?, self.field("omega-max")?);
        if hi < lo {
            return Err(CliError::new("omega-max", "must not be below omega-min"));
        }
        Ok(linspace(lo, hi, self.count("omega-steps", 1)?))
    }

    fn tau_range(&self) -> CliResult<Vec<f64>> {
        let (lo, hi) = (self.time("tau-min")?, self.time("tau-max")?);
        if lo < 0.0 {
            return Err(CliError::new("tau-min", "must be non-negative"));
        }
        if hi < lo {
            return Err(CliError::new("tau-max", "must not be below tau-min"));
        }
        Ok(linspace(lo, hi, self.count("tau-steps", 1)?))
    }

    fn time_out(&self, t: f64) -> f64 {
        self.physical().map_or(t, |s| s.time_back(t))
    }

    fn field_out(&self, w: f64) -> f64 {
        self.physical().map_or(w, |s| s.field_back(w))
    }

    fn field_header(&self) -> &'static str {
        match self.units {
            UnitsMode::Ha => "omega",
            UnitsMode::Physical => "B",
        }
    }

    /// `(label, η in h_A units)` for each entry of `--eta`.
    fn eta_list(&self) -> CliResult<Vec<(String, f64)>> {
        let raw = self.text("eta")?;
        let mut out = Vec::new();
        for token in raw.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v: f64 = if token.eq_ignore_ascii_case("inf") {
                f64::INFINITY
            } else {
                token
                    .parse()
                    .map_err(|_| CliError::new("eta", format!("cannot parse `{token}`")))?
            };
            if !(v > 0.0) {
                return Err(CliError::new("eta", "values must be positive"));
            }
            let scaled = self.physical().map_or(v, |s| v * s.h_a * s.h_a);
            out.push((token.to_string(), scaled));
        }
        if out.is_empty() {
            return Err(CliError::new("eta", "empty list"));
        }
        Ok(out)
    }

    fn phase_model(&self) -> CliResult<PhaseModel> {
        match self.text("phase")?.as_str() {
            "none" => Ok(PhaseModel::None),
            "uniform" => Ok(PhaseModel::Uniform),
            "gaussian" => Ok(PhaseModel::Gaussian {
                width: self.real("phase-width")?,
            }),
            other => Err(CliError::new("phase", format!("expected none, uniform or gaussian, got `{other}`"))),
        }
    }

    fn experiment(&self) -> CliResult<ExperimentParams> {
        let e = ExperimentParams {
            distance: self.real("distance")?,
            moment: match self.user_value("moment") {
                Some(_) => self.real("moment")?,
                None => BOHR_MAGNETON,
            },
            angle: self.real("angle")?,
            sensitivity: self.real("sensitivity")?,
            shot_duration: self.real("shot-duration")?,
            single_shot_snr: self.real("single-shot-snr")?,
            target_snr: self.real("target-snr")?,
            efficiency: self.real("efficiency")?,
        };
        e.validate()?;
        Ok(e)
    }
}

/// Column-major table written as CSV with `{:.13e}` numbers.
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    fn new() -> Self {
        Self {
            headers: Vec::new(),
            columns: Vec::new(),
        }
    }

    fn push(&mut self, header: impl Into<String>, column: Vec<f64>) {
        self.headers.push(header.into());
        self.columns.push(column);
    }

    pub fn to_csv(&self) -> String {
        let rows = self.columns.first().map_or(0, Vec::len);
        let mut s = self.headers.join(",");
        s.push('\n');
        for r in 0..rows {
            let line: Vec<String> = self.columns.iter().map(|c| format!("{:.13e}", c[r])).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

fn cmd_oscillations(cfg: &RunConfig) -> CliResult<String> {
    let grid = cfg.time_grid()?;
    let p = &cfg.params;
    let ps = singlet_probability_series(p, &grid, Some(SensorState::Superposition))?;
    let contrast = sensor_contrast_numeric(p, &grid)?;
    let mut t = Table::new();
    t.push("t", ps.times().iter().map(|&x| cfg.time_out(x)).collect());
    t.push("P_S", ps.values().to_vec());
    t.push("Phi_T", ps.values().iter().map(|v| 1.0 - v).collect());
    t.push("C_norm", contrast.normalized.values().to_vec());
    Ok(t.to_csv())
}

fn cmd_field_scan(cfg: &RunConfig) -> CliResult<String> {
    let points = field_scan(&cfg.params, &cfg.omega_range()?)?;
    let mut t = Table::new();
    t.push(cfg.field_header(), points.iter().map(|q| cfg.field_out(q.omega)).collect());
    t.push("Phi_S", points.iter().map(|q| q.phi_s).collect());
    t.push("C_yield", points.iter().map(|q| q.contrast_yield).collect());
    Ok(t.to_csv())
}

fn cmd_ensemble(cfg: &RunConfig) -> CliResult<String> {
    let grid = cfg.time_grid()?;
    let p = &cfg.params;
    let nodes: Option<usize> = match cfg.user_value("nodes") {
        Some(_) => Some(cfg.count("nodes", 1)?),
        None => None,
    };
    let mut t = Table::new();
    t.push("t", grid.times().iter().map(|&x| cfg.time_out(x)).collect());
    for (label, eta) in cfg.eta_list()? {
        let mut spec = EnsembleSpec::new(p.g, eta);
        if let (Some(n), false) = (nodes, eta.is_infinite()) {
            spec = spec.with_nodes(n);
        }
        let s = averaged_contrast_series(p, &grid, &spec).map_err(|e| match e {
            crate::Error::InvalidParameter { field: "n_nodes", reason } => CliError::new("nodes", reason),
            other => other.into(),
        })?;
        t.push(format!("C_eta_{label}"), s.values().to_vec());
    }
    let model = cfg.phase_model()?;
    if model != PhaseModel::None {
        let spec = EnsembleSpec::new(p.g, f64::INFINITY).with_phase(model, cfg.count("samples", 1)?, cfg.seed);
        let s = random_phase_triplet_series(p.h_a, p.omega, &grid, &spec)?;
        t.push("Phi_T_phase", s.values().to_vec());
    }
    Ok(t.to_csv())
}

fn cmd_teer(cfg: &RunConfig) -> CliResult<String> {
    let taus = cfg.tau_range()?;
    let variant = match cfg.text("variant")?.as_str() {
        "pi" => TeerVariant::Pi,
        "pi2" => TeerVariant::PiHalf,
        other => return Err(CliError::new("variant", format!("expected pi or pi2, got `{other}`"))),
    };
    let frozen = cfg.flag("frozen-rp")?;
    let mut t = Table::new();
    t.push("tau", taus.iter().map(|&x| cfg.time_out(x)).collect());
    for (state, header) in RpState::ALL.iter().zip(["C_S", "C_T0", "C_Tplus", "C_Tminus"]) {
        let s = teer_contrast(&cfg.params, *state, &taus, variant, frozen)?;
        t.push(header, s.values().to_vec());
    }
    Ok(t.to_csv())
}

fn cmd_control(cfg: &RunConfig) -> CliResult<String> {
    let mut t = Table::new();
    match cfg.text("mode")?.as_str() {
        "tau" => {
            let m: usize = cfg.parse("m-pulses")?;
            if m % 2 == 1 {
                return Err(CliError::new("m-pulses", format!("must be even, got {m}")));
            }
            let pts = controlled_yield_scan(&cfg.params, &cfg.tau_range()?, m)?;
            t.push("tau", pts.iter().map(|q| cfg.time_out(q.x)).collect());
            t.push("Phi_S", pts.iter().map(|q| q.phi_s).collect());
        }
        "toggle" => {
            let pts = toggle_field_nulling_scan(&cfg.params, &cfg.omega_range()?)?;
            t.push(cfg.field_header(), pts.iter().map(|q| cfg.field_out(q.x)).collect());
            t.push("Phi_S", pts.iter().map(|q| q.phi_s).collect());
        }
        other => return Err(CliError::new("mode", format!("expected tau or toggle, got `{other}`"))),
    }
    Ok(t.to_csv())
}

fn cmd_planner(cfg: &RunConfig) -> CliResult<String> {
    let e = cfg.experiment()?;
    let points: u64 = cfg.parse("data-points")?;
    let report = PlannerReport::new(&e, points, cfg.real("detection-snr")?, cfg.real("target-time")?)?;
    Ok(report.render())
}

/// Output of the selected command.
pub fn execute(cfg: &RunConfig) -> CliResult<String> {
    match cfg.command.as_str() {
        "oscillations" => cmd_oscillations(cfg),
        "field-scan" => cmd_field_scan(cfg),
        "ensemble" => cmd_ensemble(cfg),
        "teer" => cmd_teer(cfg),
        "control" => cmd_control(cfg),
        "planner" => cmd_planner(cfg),
        other => Err(CliError::new("command", format!("unknown command `{other}`"))),
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// result to `--out` or `stdout`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return Ok(());
            }
            let text = e.to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            return Err(CliError::new("args", first));
        }
    };
    let cfg = RunConfig::from_matches(&matches)?;
    let body = execute(&cfg)?;
    match &cfg.output_path {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::new("out", format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| CliError::new("out", e.to_string())),
    }
}
