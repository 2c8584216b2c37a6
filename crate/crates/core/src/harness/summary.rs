use serde::{Deserialize, Serialize};

use super::campaign::CampaignOutcome;
use crate::report::{hex, NamedValue};
use crate::VerificationReport;

/// A failed or errored draw, with what is needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draw: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Vec<NamedValue>,
    #[serde(with = "hex::real")]
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Residual statistics of a set of reports.
///
/// `max_residual` and `median_residual` are taken over reports without an
/// error; `pass_rate` is `passed / reports` and absent for empty input.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub reports: usize,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
    pub non_converged: usize,
    pub rejected_draws: usize,
    pub validation_failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "hex::opt_real")]
    pub pass_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "hex::opt_real")]
    pub max_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "hex::opt_real")]
    pub median_residual: Option<f64>,
    pub failures: Vec<FailureEntry>,
}

impl Summary {
    /// True when every draw ran and passed.
    pub fn all_passed(&self) -> bool {
        self.passed == self.reports && self.validation_failures == 0
    }
}

/// Statistics over `reports`.
///
/// ```
/// use elliptic_bailey::harness::summarize;
///
/// let summary = summarize(&[]);
/// assert_eq!(summary.reports, 0);
/// assert_eq!(summary.pass_rate, None);
/// ```
pub fn summarize(reports: &[VerificationReport]) -> Summary {
    let mut summary = Summary {
        reports: reports.len(),
        ..Default::default()
    };
    let mut residuals = Vec::new();
    for r in reports {
        if r.pass {
            summary.passed += 1;
        } else if r.error.is_some() {
            summary.errored += 1;
            if r.error_kind == Some(crate::report::ErrorKind::NonConvergence) {
                summary.non_converged += 1;
            }
        } else {
            summary.failed += 1;
        }
        if r.error.is_none() {
            residuals.push(r.residual);
        }
        if !r.pass {
            summary.failures.push(FailureEntry {
                draw: r.draw,
                seed: r.seed,
                inputs: r.inputs.clone(),
                residual: r.residual,
                error: r.error.clone(),
            });
        }
    }
    if !reports.is_empty() {
        summary.pass_rate = Some(summary.passed as f64 / reports.len() as f64);
    }
    residuals.sort_by(f64::total_cmp);
    summary.max_residual = residuals.last().copied();
    summary.median_residual = match residuals.len() {
        0 => None,
        n if n % 2 == 1 => Some(residuals[n / 2]),
        n => Some(0.5 * (residuals[n / 2 - 1] + residuals[n / 2])),
    };
    summary
}

/// [`summarize`] plus the campaign's rejection bookkeeping.
pub fn summarize_outcome(outcome: &CampaignOutcome) -> Summary {
    let mut summary = summarize(&outcome.reports);
    summary.rejected_draws = outcome.rejected_draws;
    summary.validation_failures = outcome.validation_failures.len();
    summary
}
