//! Comparisons between the closed-form expressions and the numeric trace
//! route, rendered as Markdown for the docs.

use std::fmt::Write as _;

use crate::dynamics::{
    contrast_spectrum, contrast_yield, contrast_yield_closed_form, sensor_contrast_closed_form, TimeGrid,
    sensor_contrast_numeric,
};
use crate::error::Result;
use crate::params::RadicalPairParams;

/// Agreement threshold between closed form and numeric route.
pub const MATCH_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContrastCheck {
    pub omega: f64,
    pub g: f64,
    pub max_deviation: f64,
    /// Time of the largest deviation.
    pub at_t: f64,
    pub numeric: f64,
    pub closed: f64,
    /// `max |closed(t) - numeric(2t)|`.
    pub doubled_time_deviation: f64,
}

impl ContrastCheck {
    pub fn matches(&self) -> bool {
        self.max_deviation <= MATCH_TOLERANCE
    }
}

/// Raw contrast: closed form against the numeric trace over `grid`.
pub fn check_contrast(p: &RadicalPairParams<f64>, grid: &TimeGrid<f64>) -> Result<ContrastCheck> {
    let numeric = sensor_contrast_numeric(p, grid)?.raw;
    let spectrum = contrast_spectrum(p)?;
    let mut out = ContrastCheck {
        omega: p.omega,
        g: p.g,
        max_deviation: 0.0,
        at_t: 0.0,
        numeric: numeric.values()[0],
        closed: sensor_contrast_closed_form(p, 0.0),
        doubled_time_deviation: 0.0,
    };
    for (&t, &n) in numeric.times().iter().zip(numeric.values()) {
        let closed = sensor_contrast_closed_form(p, t);
        let d = (closed - n).abs();
        if d > out.max_deviation {
            out.max_deviation = d;
            out.at_t = t;
            out.numeric = n;
            out.closed = closed;
        }
        let doubled = (closed - spectrum.eval(2.0 * t)).abs();
        out.doubled_time_deviation = out.doubled_time_deviation.max(doubled);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct YieldCheck {
    pub omega: f64,
    pub g: f64,
    pub kappa_tilde: f64,
    /// Raw contrast yield by quadrature of the numeric contrast.
    pub numeric: f64,
    /// Printed closed form, or the singular factor.
    pub closed: std::result::Result<f64, String>,
}

impl YieldCheck {
    pub fn deviation(&self) -> Option<f64> {
        self.closed.as_ref().ok().map(|c| (c - self.numeric).abs())
    }

    pub fn matches(&self, tol: f64) -> bool {
        self.deviation().is_some_and(|d| d <= tol)
    }
}

pub fn check_contrast_yield(p: &RadicalPairParams<f64>) -> Result<YieldCheck> {
    Ok(YieldCheck {
        omega: p.omega,
        g: p.g,
        kappa_tilde: p.kappa_tilde(),
        numeric: contrast_yield(p)?,
        closed: contrast_yield_closed_form(p).map_err(|e| e.to_string()),
    })
}

/// Oscillation amplitude of the normalized contrast with thermal and fully
/// polarized nucleus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationCheck {
    pub omega: f64,
    pub thermal_amplitude: f64,
    pub polarized_amplitude: f64,
}

impl PolarizationCheck {
    pub fn ratio(&self) -> f64 {
        self.polarized_amplitude / self.thermal_amplitude
    }
}

/// Peak-to-peak of the normalized contrast over the whole grid.
pub fn check_polarization(p: &RadicalPairParams<f64>, grid: &TimeGrid<f64>) -> Result<PolarizationCheck> {
    let amp = |q: &RadicalPairParams<f64>| -> Result<f64> {
        let s = sensor_contrast_numeric(q, grid)?.normalized;
        Ok(s.max() - s.min())
    };
    Ok(PolarizationCheck {
        omega: p.omega,
        thermal_amplitude: amp(&p.with_polarization(0.0))?,
        polarized_amplitude: amp(&p.with_polarization(1.0))?,
    })
}

pub fn render_contrast_checks(checks: &[ContrastCheck], t_end: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "## Ramsey contrast: closed form vs numeric trace\n");
    let _ = writeln!(
        s,
        "Raw contrast (value 4 at t = 0), t in [0, {t_end}] in units of 1/h_A, tolerance {MATCH_TOLERANCE:e}.\n"
    );
    let _ = writeln!(
        s,
        "| omega | g | max abs deviation | at t | numeric | closed form | max abs deviation vs numeric at 2t | status |"
    );
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
    for c in checks {
        let _ = writeln!(
            s,
            "| {} | {} | {:.6e} | {:.4} | {:.10} | {:.10} | {:.3e} | {} |",
            c.omega,
            c.g,
            c.max_deviation,
            c.at_t,
            c.numeric,
            c.closed,
            c.doubled_time_deviation,
            if c.matches() { "match" } else { "DISCREPANCY" }
        );
    }
    s
}

pub fn render_yield_checks(checks: &[YieldCheck], tol: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "## Recombination-weighted contrast: closed form vs quadrature\n");
    let _ = writeln!(s, "Raw contrast yield (value 4 when g = 0), tolerance {tol:e}.\n");
    let _ = writeln!(s, "| omega | g | kappa_tilde | quadrature | closed form | abs deviation | status |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|");
    for c in checks {
        let (closed, dev) = match &c.closed {
            Ok(v) => (format!("{v:.10}"), format!("{:.6e}", (v - c.numeric).abs())),
            Err(e) => (format!("singular: {e}"), "n/a".into()),
        };
        let _ = writeln!(
            s,
            "| {} | {} | {} | {:.10} | {} | {} | {} |",
            c.omega,
            c.g,
            c.kappa_tilde,
            c.numeric,
            closed,
            dev,
            if c.matches(tol) { "match" } else { "DISCREPANCY" }
        );
    }
    s
}

pub fn render_polarization_checks(checks: &[PolarizationCheck]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "## Contrast amplitude vs nuclear polarization\n");
    let _ = writeln!(s, "| omega | amplitude p = 0 | amplitude p = 1 | ratio |");
    let _ = writeln!(s, "|---|---|---|---|");
    for c in checks {
        let _ = writeln!(
            s,
            "| {} | {:.10} | {:.10} | {:.6} |",
            c.omega,
            c.thermal_amplitude,
            c.polarized_amplitude,
            c.ratio()
        );
    }
    s
}
