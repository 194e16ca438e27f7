//! Reproduction harness for the periodic Fornberg-Whitham experiments.
//!
//! Four runs share one [`ExperimentConfig`]:
//!
//! * [`nonuniform`]: two solution branches whose initial data converge but
//!   whose solutions stay `|sin t|` apart;
//! * [`error_decay`]: solver solutions against the approximate solutions,
//!   with log-log slope fits in `n`;
//! * [`appendix`]: two-sided Besov brackets for `sin nx` and `cos nx`;
//! * [`properties`]: invariants of the norm engine, multipliers and solvers.
//!
//! Each run produces rows for a CSV file and a [`Report`] with fits and
//! checks. The solver runs behind the first two are shared through
//! [`Sweep`].

pub mod appendix;
pub mod config;
pub mod error;
pub mod error_decay;
pub mod fit;
pub mod nonuniform;
pub mod output;
pub mod properties;
pub mod report;
pub mod sweep;
pub mod transport;

pub use config::ExperimentConfig;
pub use error::{ExperimentError, Result};
pub use fit::RateFit;
pub use report::{Check, Report};
pub use sweep::Sweep;
