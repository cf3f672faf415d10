//! Charge-driven pre-trial risk assessment with a booking-versus-conviction
//! counterfactual audit.
//!
//! The pipeline runs in five stages:
//!
//! - [`charge`] parses statute strings and answers violent / exclusion /
//!   bump-up list membership.
//! - [`engine`] computes sub-scores and the four-step recommendation.
//! - [`linkage`] removes incomplete and duplicate assessment records and links
//!   each one to its court case.
//! - [`counterfactual`] derives conviction charges from dispositions and
//!   re-scores each record on them.
//! - [`stats`] builds rate tables and runs the hypothesis tests.
//!
//! [`synth`] generates seeded datasets with planted ground truth and carries
//! an independent re-implementation of the engine used as a test oracle.

#![forbid(unsafe_code)]

pub mod charge;
pub mod counterfactual;
pub mod engine;
pub mod error;
pub mod linkage;
pub mod stats;
pub mod synth;

pub use charge::{ChargeCatalog, ChargeCode};
pub use engine::{assess, EngineConfig, PsaResult, SubScores, SupervisionLevel};
pub use error::{ConfigError, Error, ParseError, Result};
