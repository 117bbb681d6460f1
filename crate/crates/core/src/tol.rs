use crate::error::{Error, Result};

/// Numerical tolerances used by every predicate in the crate.
///
/// All equality and ordering tests are tolerance-scaled by dimension and, where
/// it matters, by operator norm, so pass/fail thresholds reproduce across
/// platforms. `tau_strict` must stay strictly above `tau_psd`: strictness is an
/// open condition and needs a wider margin than cone membership.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Admissible Hermitian asymmetry of raw input, `max |e_ij - conj(e_ji)|`.
    pub tau_herm: f64,
    /// Eigensolver residual scale (reconstruction and unitarity).
    pub tau_eig: f64,
    /// Positive-semidefinite cone membership margin.
    pub tau_psd: f64,
    /// Operator equality margin.
    pub tau_eq: f64,
    /// Margin for open conditions (strictness, `‖x₀‖ < 1`).
    pub tau_strict: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            tau_herm: 1e-10,
            tau_eig: 1e-10,
            tau_psd: 1e-8,
            tau_eq: 1e-8,
            tau_strict: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("tau_herm", self.tau_herm),
            ("tau_eig", self.tau_eig),
            ("tau_psd", self.tau_psd),
            ("tau_eq", self.tau_eq),
            ("tau_strict", self.tau_strict),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if self.tau_strict <= self.tau_psd {
            return Err(Error::invalid(format!(
                "tau_strict ({}) must exceed tau_psd ({})",
                self.tau_strict, self.tau_psd
            )));
        }
        Ok(())
    }

    /// Equality threshold for `n`-dimensional operators of the given norm scale.
    pub fn eq_scaled(&self, n: usize, scale: f64) -> f64 {
        self.tau_eq * n as f64 * scale.max(1.0)
    }

    /// PSD membership threshold for `n`-dimensional operators.
    pub fn psd_scaled(&self, n: usize, scale: f64) -> f64 {
        self.tau_psd * n as f64 * scale.max(1.0)
    }
}
