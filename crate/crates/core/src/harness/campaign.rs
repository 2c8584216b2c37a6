use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{CampaignConfig, Identity};
use super::sample::{attempt, validate_fixed};
use crate::{Result, VerificationReport};

/// Redraws allowed per draw before it is recorded as a validation failure.
pub const MAX_RETRIES: usize = 100;

/// A draw (or, with `draw = None`, the whole campaign) that never produced
/// admissible parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationFailure {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draw: Option<usize>,
    pub message: String,
}

/// Reports in draw order, plus the bookkeeping of rejected draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignOutcome {
    pub identity: Identity,
    pub seed: u64,
    pub reports: Vec<VerificationReport>,
    /// Total number of parameter draws discarded as inadmissible.
    pub rejected_draws: usize,
    pub validation_failures: Vec<ValidationFailure>,
}

enum DrawResult {
    Report(VerificationReport, usize),
    Exhausted(ValidationFailure, usize),
}

/// The random stream of draw `index`: the campaign seed selects the key and
/// the draw index the stream, so draws are independent of each other and of
/// the order in which they run.
pub fn draw_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_draw(config: &CampaignConfig, index: usize) -> DrawResult {
    let mut rng = draw_rng(config.seed, index);
    let mut rejected = 0;
    let mut last_reason = String::new();
    while rejected < MAX_RETRIES {
        let start = Instant::now();
        let outcome = attempt(config, &mut rng);
        let elapsed = start.elapsed().as_secs_f64();
        let mut report = match outcome {
            Ok(report) => report,
            Err(e) if e.is_inadmissible() => {
                rejected += 1;
                last_reason = e.to_string();
                continue;
            }
            Err(e) => VerificationReport::errored(config.identity.name(), &e, f64::NAN),
        };
        if let Some(tol) = config.tolerance {
            report.set_tolerance(tol);
        }
        report.draw = Some(index);
        report.seed = Some(config.seed);
        if config.timing {
            report.wall_time = Some(elapsed);
        }
        return DrawResult::Report(report, rejected);
    }
    DrawResult::Exhausted(
        ValidationFailure {
            draw: Some(index),
            message: format!("no admissible parameters in {MAX_RETRIES} attempts (last: {last_reason})"),
        },
        rejected,
    )
}

/// Runs `config.draws` seeded draws in parallel and returns the reports in
/// draw order.
///
/// Inadmissible draws (parameters too close to a pole, constraint
/// violations) are redrawn from the same stream up to [`MAX_RETRIES`] times.
/// Other errors are recorded in the draw's report. Fixed parameters that can
/// never be admissible produce a single validation failure and no reports.
///
/// ```
/// use elliptic_bailey::harness::{run_campaign, CampaignConfig, Identity};
///
/// let config = CampaignConfig::new(Identity::MatrixBailey).draws(3).seed(1).n(2);
/// let outcome = run_campaign(&config)?;
/// assert_eq!(outcome.reports.len(), 3);
/// assert!(outcome.reports.iter().all(|r| r.pass));
/// # Ok::<(), elliptic_bailey::Error>(())
/// ```
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignOutcome> {
    config.validate()?;
    let mut outcome = CampaignOutcome {
        identity: config.identity,
        seed: config.seed,
        reports: Vec::new(),
        rejected_draws: 0,
        validation_failures: Vec::new(),
    };
    if let Err(message) = validate_fixed(config) {
        outcome.validation_failures.push(ValidationFailure { draw: None, message });
        return Ok(outcome);
    }
    let results: Vec<DrawResult> = (0..config.draws)
        .into_par_iter()
        .map(|i| run_draw(config, i))
        .collect();
    for result in results {
        match result {
            DrawResult::Report(report, rejected) => {
                outcome.rejected_draws += rejected;
                outcome.reports.push(report);
            }
            DrawResult::Exhausted(failure, rejected) => {
                outcome.rejected_draws += rejected;
                outcome.validation_failures.push(failure);
            }
        }
    }
    Ok(outcome)
}
