//! Tolerances threaded through every decider.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerances. All must lie in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ToleranceConfig {
    /// Relative comparisons and inequality slack.
    pub rel_tol: f64,
    /// Relative threshold for grouping singular values into the top cluster.
    pub cluster_tol: f64,
    /// Acceptance threshold for witness certificates.
    pub witness_tol: f64,
    /// Optimizer convergence.
    pub opt_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            cluster_tol: 1e-8,
            witness_tol: 1e-7,
            opt_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("relTol", self.rel_tol),
            ("clusterTol", self.cluster_tol),
            ("witnessTol", self.witness_tol),
            ("optTol", self.opt_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Tolerances plus the seed used by randomized restarts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Config {
    #[serde(flatten)]
    pub tol: ToleranceConfig,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol: ToleranceConfig::default(),
            seed: 0x5eed,
        }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        let mut t = ToleranceConfig {
            opt_tol: 0.0,
            ..Default::default()
        };
        assert!(t.validate().is_err());
        t.opt_tol = 1.0;
        assert!(t.validate().is_err());
    }
}
