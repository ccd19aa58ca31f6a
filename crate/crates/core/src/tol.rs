//! Numerical tolerances used across the crate.
//!
//! Every threshold that decides a discrete outcome (isometry type, point
//! coincidence, screening) lives here so that callers can override them in
//! one place.

use serde::{Deserialize, Serialize};

use crate::Error;

/// Relative rounding allowance per unit of Frobenius norm when deciding
/// whether a trace sits on the parabolic boundary.
pub const ROUNDING_BAND: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed drift of `ad - bc` from 1.
    pub det: f64,
    /// Half-width of the band `||tr| - 2| <= class` classified as parabolic.
    pub class: f64,
    /// Two points closer than this are treated as equal.
    pub pt: f64,
    /// Slack on the Jørgensen screen.
    pub jorg: f64,
    /// Smallest `|log cross-ratio|` accepted as a denominator.
    pub cr: f64,
    /// Translation vectors with `||omega| - 1| <= omega_band` carry no
    /// information about an exponent and are skipped.
    pub omega_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            det: 1e-12,
            class: 1e-9,
            pt: 1e-9,
            jorg: 1e-9,
            cr: 1e-6,
            omega_band: 1e-9,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 6] = ["det", "class", "pt", "jorg", "cr", "omega_band"];

    /// Sets a tolerance by name. Unknown keys and negative or non-finite
    /// values are rejected.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), Error> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tolerance {key} must be a finite non-negative number, got {value}"
            )));
        }
        let slot = match key {
            "det" => &mut self.det,
            "class" => &mut self.class,
            "pt" => &mut self.pt,
            "jorg" => &mut self.jorg,
            "cr" => &mut self.cr,
            "omega_band" => &mut self.omega_band,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown tolerance key `{key}` (expected one of {})",
                    Self::KEYS.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }

    /// Parses a `KEY=VAL` override.
    pub fn apply_override(&mut self, spec: &str) -> Result<(), Error> {
        let (key, value) = spec.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("tolerance override `{spec}` is not KEY=VAL"))
        })?;
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::InvalidParameter(format!(
                "tolerance override `{spec}` has a non-numeric value"
            ))
        })?;
        self.set(key.trim(), value)
    }
}
