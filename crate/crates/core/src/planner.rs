//! Feasibility arithmetic for a single-pair measurement: dipole field of one
//! electron at the sensor, repetitions for a target SNR, and acquisition time.

use std::fmt::Write as _;

use crate::error::{invalid, Result};

/// `μ₀/4π` in T·m/A (exact in the pre-2019 SI, 1e-7 to 10 digits now).
pub const MU0_OVER_4PI: f64 = 1.0e-7;
/// Bohr magneton in J/T (CODATA 2018).
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;

/// Field often quoted for one electron at 20 nm, in tesla. It does not
/// follow from the point-dipole formula at that distance; see
/// [`PlannerReport`].
pub const QUOTED_FIELD_AT_20NM: f64 = 59.0e-9;

/// Round repetition count used for the nominal acquisition budget.
pub const NOMINAL_REPETITIONS: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentParams {
    /// Sensor–electron distance in m.
    pub distance: f64,
    /// Magnetic moment in J/T.
    pub moment: f64,
    /// Angle between moment and separation vector in rad.
    pub angle: f64,
    /// AC field sensitivity in T/√Hz.
    pub sensitivity: f64,
    /// Duration of one sequence repetition in s.
    pub shot_duration: f64,
    pub single_shot_snr: f64,
    pub target_snr: f64,
    /// Fraction of the ideal signal retained (contrast, duty cycle).
    pub efficiency: f64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            distance: 20.0e-9,
            moment: BOHR_MAGNETON,
            angle: std::f64::consts::FRAC_PI_2,
            sensitivity: 10.0e-9,
            shot_duration: 10.0e-6,
            single_shot_snr: 0.03,
            target_snr: 10.0,
            efficiency: 1.0,
        }
    }
}

impl ExperimentParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("distance", self.distance),
            ("moment", self.moment),
            ("sensitivity", self.sensitivity),
            ("shot_duration", self.shot_duration),
            ("single_shot_snr", self.single_shot_snr),
            ("target_snr", self.target_snr),
            ("efficiency", self.efficiency),
        ];
        for (field, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(field, "must be positive and finite"));
            }
        }
        if !self.angle.is_finite() {
            return Err(invalid("angle", "must be finite"));
        }
        Ok(())
    }
}

/// `|B| = μ₀ m/(4π r³) √(1 + 3 cos²θ)` of a point dipole.
pub fn dipole_field(e: &ExperimentParams) -> Result<f64> {
    e.validate()?;
    let c = e.angle.cos();
    Ok(MU0_OVER_4PI * e.moment / e.distance.powi(3) * (1.0 + 3.0 * c * c).sqrt())
}

/// Distance at which a perpendicular dipole of moment `moment` produces `field`.
pub fn distance_for_field(field: f64, moment: f64) -> Result<f64> {
    if !(field > 0.0 && moment > 0.0) {
        return Err(invalid("field", "field and moment must be positive"));
    }
    Ok((MU0_OVER_4PI * moment / field).cbrt())
}

/// `ceil((target/single_shot)²)`.
pub fn repetitions_for_snr(e: &ExperimentParams) -> Result<u64> {
    e.validate()?;
    let r = e.target_snr / e.single_shot_snr;
    let n = r * r;
    // Guard against `(10/0.03)²` landing a few ulps above an integer.
    let rounded = n.round();
    let reps = if (n - rounded).abs() <= 4.0 * f64::EPSILON * n {
        rounded
    } else {
        n.ceil()
    };
    Ok(reps.max(1.0) as u64)
}

pub fn measurement_time(e: &ExperimentParams, reps: u64) -> Result<f64> {
    e.validate()?;
    if reps == 0 {
        return Err(invalid("reps", "must be at least 1"));
    }
    Ok(reps as f64 * e.shot_duration)
}

/// `(target · sensitivity / (efficiency · field))²` in s.
pub fn time_to_snr(field: f64, e: &ExperimentParams) -> Result<f64> {
    e.validate()?;
    if !(field > 0.0 && field.is_finite()) {
        return Err(invalid("field", "must be positive and finite"));
    }
    let r = e.target_snr * e.sensitivity / (e.efficiency * field);
    Ok(r * r)
}

/// Efficiency at which [`time_to_snr`] equals `seconds`.
pub fn required_efficiency(field: f64, seconds: f64, e: &ExperimentParams) -> Result<f64> {
    e.validate()?;
    if !(field > 0.0 && seconds > 0.0) {
        return Err(invalid("field", "field and time must be positive"));
    }
    Ok(e.target_snr * e.sensitivity / (field * seconds.sqrt()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerReport {
    pub params: ExperimentParams,
    pub field: f64,
    pub repetitions: u64,
    pub point_time: f64,
    pub data_points: u64,
    pub total_time: f64,
    /// Per-point time at [`NOMINAL_REPETITIONS`].
    pub nominal_point_time: f64,
    /// SNR used for the time-to-SNR estimate.
    pub detection_snr: f64,
    pub detection_time: f64,
    /// Acquisition time the efficiency is solved for.
    pub target_time: f64,
    pub efficiency_at_field: f64,
    pub efficiency_at_quoted: f64,
    pub field_at_20nm: f64,
    pub distance_for_quoted: f64,
}

impl PlannerReport {
    pub fn new(e: &ExperimentParams, data_points: u64, detection_snr: f64, target_time: f64) -> Result<Self> {
        if data_points == 0 {
            return Err(invalid("data_points", "must be at least 1"));
        }
        if !(detection_snr > 0.0) {
            return Err(invalid("detection_snr", "must be positive"));
        }
        if !(target_time > 0.0) {
            return Err(invalid("target_time", "must be positive"));
        }
        let field = dipole_field(e)?;
        let repetitions = repetitions_for_snr(e)?;
        let point_time = measurement_time(e, repetitions)?;
        let detect = ExperimentParams {
            target_snr: detection_snr,
            ..*e
        };
        let at_20nm = ExperimentParams {
            distance: 20.0e-9,
            angle: std::f64::consts::FRAC_PI_2,
            ..*e
        };
        Ok(Self {
            params: *e,
            field,
            repetitions,
            point_time,
            data_points,
            total_time: point_time * data_points as f64,
            nominal_point_time: measurement_time(e, NOMINAL_REPETITIONS)?,
            detection_snr,
            detection_time: time_to_snr(field, &detect)?,
            target_time,
            efficiency_at_field: required_efficiency(field, target_time, &detect)?,
            efficiency_at_quoted: required_efficiency(QUOTED_FIELD_AT_20NM, target_time, &detect)?,
            field_at_20nm: dipole_field(&at_20nm)?,
            distance_for_quoted: distance_for_field(QUOTED_FIELD_AT_20NM, e.moment)?,
        })
    }

    pub fn render(&self) -> String {
        let e = &self.params;
        let mut s = String::new();
        let _ = writeln!(s, "distance_nm = {:.4}", e.distance * 1e9);
        let _ = writeln!(s, "angle_rad = {:.6}", e.angle);
        let _ = writeln!(s, "dipole_field_nT = {:.4}", self.field * 1e9);
        let _ = writeln!(
            s,
            "repetitions = {} (target SNR {} at single-shot SNR {})",
            self.repetitions, e.target_snr, e.single_shot_snr
        );
        let _ = writeln!(s, "time_per_point_s = {:.6}", self.point_time);
        let _ = writeln!(
            s,
            "total_time_s = {:.3} ({} points, {:.4} h)",
            self.total_time,
            self.data_points,
            self.total_time / 3600.0
        );
        let _ = writeln!(
            s,
            "nominal_time_per_point_s = {:.6} ({} repetitions)",
            self.nominal_point_time, NOMINAL_REPETITIONS
        );
        let nominal_total = self.nominal_point_time * self.data_points as f64;
        let _ = writeln!(
            s,
            "nominal_total_time_s = {:.3} ({} points, {:.4} h)",
            nominal_total,
            self.data_points,
            nominal_total / 3600.0
        );
        let _ = writeln!(
            s,
            "time_to_snr_{}_s = {:.6} (efficiency {})",
            self.detection_snr, self.detection_time, e.efficiency
        );
        let _ = writeln!(
            s,
            "efficiency_for_{}_s = {:.4} at computed field, {:.4} at 59 nT",
            self.target_time, self.efficiency_at_field, self.efficiency_at_quoted
        );
        let _ = writeln!(
            s,
            "note: field at 20 nm (m perpendicular to r) computed = {:.2} nT, quoted = {:.0} nT; \
             the quoted value corresponds to r = {:.2} nm",
            self.field_at_20nm * 1e9,
            QUOTED_FIELD_AT_20NM * 1e9,
            self.distance_for_quoted * 1e9
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetitions_exact_squares() {
        let e = ExperimentParams {
            target_snr: 0.03,
            ..Default::default()
        };
        assert_eq!(repetitions_for_snr(&e).unwrap(), 1);
        let e = ExperimentParams {
            target_snr: 3.0,
            single_shot_snr: 1.0,
            ..Default::default()
        };
        assert_eq!(repetitions_for_snr(&e).unwrap(), 9);
    }

    #[test]
    fn invalid_inputs_name_the_field() {
        let e = ExperimentParams {
            distance: 0.0,
            ..Default::default()
        };
        assert!(dipole_field(&e).unwrap_err().to_string().contains("distance"));
        assert!(measurement_time(&ExperimentParams::default(), 0).is_err());
        assert!(time_to_snr(-1.0, &ExperimentParams::default()).is_err());
    }

    #[test]
    fn parallel_moment_doubles_field() {
        let perp = dipole_field(&ExperimentParams::default()).unwrap();
        let par = dipole_field(&ExperimentParams {
            angle: 0.0,
            ..Default::default()
        })
        .unwrap();
        assert!((par / perp - 2.0).abs() < 1e-14);
    }

    #[test]
    fn report_mentions_quoted_value() {
        let r = PlannerReport::new(&ExperimentParams::default(), 3600, 1.0, 10.0).unwrap();
        let text = r.render();
        assert!(text.contains("quoted = 59 nT"));
        assert!(text.contains("repetitions = 111112"));
    }
}
