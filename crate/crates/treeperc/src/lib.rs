//! Reproducible Monte Carlo percolation experiments on random trees.
//!
//! This crate wraps [`treeperc_core`] with experiment orchestration: a
//! validated [`config::ExperimentConfig`] maps each statement under test to
//! a named experiment, trials run embarrassingly parallel on per-trial RNG
//! streams, and reports serialize to CSV or JSON with enough context to
//! re-run any row. For a fixed master seed the report bytes do not depend
//! on the number of worker threads.

pub mod config;
pub mod experiment;
pub mod report;
pub mod rng;

pub use config::{ConfigError, Experiment, ExperimentConfig, OutFormat};
pub use experiment::{run_experiment, Report, TrialRow};
pub use rng::{derive_trial_rng, TrialRng};
