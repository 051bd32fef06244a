//! Numerical tolerance ladder shared by every module.
//!
//! Validity checks use [`VALIDITY`], hard zero cutoffs (e.g. dropping
//! eigenvalues from entropy sums) use [`ZERO_CUTOFF`], and rank decisions use
//! [`RANK`].

use serde::{Deserialize, Serialize};

/// Normalization, hermiticity, positivity and trace checks.
pub const VALIDITY: f64 = 1e-9;

/// Eigenvalues or singular values below this are exact zeros.
pub const ZERO_CUTOFF: f64 = 1e-12;

/// Threshold on reduced-state eigenvalues / squared Schmidt coefficients for rank counts.
pub const RANK: f64 = 1e-9;

/// Threshold on |Det| separating the GHZ and W classes.
pub const HYPERDET: f64 = 1e-9;

/// A witness expectation below `-WITNESS` counts as a detection.
pub const WITNESS: f64 = 1e-9;

/// Slack allowed in entropy inequalities.
pub const ENTROPY_SLACK: f64 = 1e-7;

/// Residual below which a product-term fit counts as exact.
pub const FIT_RESIDUAL: f64 = 1e-7;

/// Symplectic eigenvalues within this of 1 count as pure.
pub const PURITY: f64 = 1e-7;

/// Pairing tolerance for the ±D eigenvalues of iσγ.
pub const SYMPLECTIC_PAIRING: f64 = 1e-8;

/// Largest total Hilbert-space dimension handled densely.
pub const MAX_DENSE_DIM: usize = 4096;

/// Thresholds used by classification and detection, overridable from the CLI config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub validity: f64,
    pub zero_cutoff: f64,
    pub rank: f64,
    pub hyperdet: f64,
    pub witness: f64,
    pub entropy_slack: f64,
    pub fit_residual: f64,
    pub purity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            validity: VALIDITY,
            zero_cutoff: ZERO_CUTOFF,
            rank: RANK,
            hyperdet: HYPERDET,
            witness: WITNESS,
            entropy_slack: ENTROPY_SLACK,
            fit_residual: FIT_RESIDUAL,
            purity: PURITY,
        }
    }
}
