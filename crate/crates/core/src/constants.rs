//! Physical constants of a run.

use crate::error::{Error, Result};

/// Reduced Planck constant and particle mass. All formulas in the crate are
/// written for general `hbar` and `m`; the conventional working units set
/// `hbar = 1` and `m = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0) || !(mass > 0.0) || !hbar.is_finite() || !mass.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "constants must be finite and positive (hbar = {hbar}, mass = {mass})"
            )));
        }
        Ok(Self { hbar, mass })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 0.5,
        }
    }
}
