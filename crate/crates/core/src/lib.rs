//! Corpus analytics for field-level interdisciplinarity of research papers
//! and grants.
//!
//! The crate covers the full pipeline:
//!
//! * [`corpus`] — ingest and validate papers, grants, grant-paper links and
//!   the field taxonomy from flat files; slice sub-corpora.
//! * [`text`] / [`lda`] — tokenize abstracts and train a label-constrained
//!   topic model (one latent topic per field) by collapsed Gibbs sampling;
//!   infer field posteriors for unlabeled grant abstracts.
//! * [`fieldspace`] / [`space`] — reference/citation field vectors for
//!   papers, cumulative per-field knowledge vectors and the cosine
//!   field-distance matrix.
//! * [`interdisc`] — Rao-Stirling diversity scores and quantile binning.
//! * [`impact`] — 10-year citation counts, field-year normalization, top-5%
//!   hit flags and the in-field/out-field citation decomposition.
//! * [`analysis`] — binned curves, quintile heatmaps, grant-combination
//!   comparisons, yearly trends and the OLS regression suite.
//! * [`synth`] — synthetic corpora with planted ground truth for
//!   oracle-based testing.

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod fieldspace;
pub mod impact;
pub mod interdisc;
pub mod lda;
pub mod rng;
pub mod space;
pub mod stats;
pub mod synth;
pub mod text;

pub use error::{Error, Result};
pub use space::{DistanceMatrix, FieldDistribution};
