//! Automatic coding of physician–patient transcript lines with
//! prognosis-communication codes.
//!
//! The crate is organized as a pipeline:
//!
//! - [`corpus`] — transcript/annotation ingestion, deduplication, majority
//!   filtering, and context attachment.
//! - [`synth`] — a seeded synthetic corpus generator so the full pipeline is
//!   runnable without clinical data.
//! - [`preprocess`] — tokenization, coarse POS tagging, Porter stemming, and
//!   stopword removal.
//! - [`features`] — vocabulary construction, chi-square feature selection,
//!   and tf-idf vectorization with length normalization.
//! - [`classifiers`] — multinomial Naive Bayes, Random Forest, and a linear
//!   SVM behind a single train/predict contract.
//! - [`evaluation`] — balanced sampling, stratified cross-validation, and
//!   metric computation.
//! - [`experiments`] — drivers for the three comparison experiments.
//!
//! The `progcode` binary ties these together behind subcommands; see the
//! repository README for usage.

pub mod classifiers;
pub mod config;
pub mod corpus;
pub mod evaluation;
pub mod experiments;
pub mod features;
pub mod preprocess;
pub mod seed;
pub mod synth;
