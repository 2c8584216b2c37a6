//! Seeded verification campaigns.
//!
//! A [`CampaignConfig`] names an identity, a number of draws and a seed.
//! [`run_campaign`] samples admissible parameters for every draw from its
//! own random stream, runs the check and returns the reports in draw order,
//! so a campaign rerun with the same config produces the same reports
//! whatever the thread count. [`summarize`] condenses reports into residual
//! statistics and a list of failures with the draw indices that reproduce
//! them.
//!
//! ```
//! use elliptic_bailey::harness::{run_campaign, summarize_outcome, CampaignConfig, Identity};
//!
//! let config = CampaignConfig::new(Identity::ResidueReduction).draws(4).seed(3);
//! let summary = summarize_outcome(&run_campaign(&config)?);
//! assert_eq!(summary.pass_rate, Some(1.0));
//! # Ok::<(), elliptic_bailey::Error>(())
//! ```

mod campaign;
mod config;
mod sample;
mod summary;

pub use campaign::{draw_rng, run_campaign, CampaignOutcome, ValidationFailure, MAX_RETRIES};
pub use config::{
    BcMode, CampaignConfig, ComplexArg, Domain, DomainOverrides, FixedParams, Identity,
    TestFunctionChoice,
};
pub use sample::{CONTOUR_MARGIN, LATTICE_MARGIN};
pub use summary::{summarize, summarize_outcome, FailureEntry, Summary};
