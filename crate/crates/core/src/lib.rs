//! Text-based deception detection.
//!
//! The crate is organised as a pipeline:
//!
//! - [`corpus`] loads labelled JSONL corpora described by dataset manifests,
//!   merges and splits them.
//! - [`textproc`] tokenizes text, reads CoNLL-U annotations, stems words and
//!   converts words to phoneme sequences.
//! - [`cues`] computes the linguistic-cue vector of a document.
//! - [`ngrams`] extracts phoneme, character, word, POS and syntactic n-grams
//!   and builds frequency-capped vocabularies.
//! - [`stats`] holds the Mann-Whitney U screen, correlation filtering and
//!   multiple logistic regression with Wald statistics.
//! - [`model`] trains, applies and persists logistic-regression classifiers.
//! - [`eval`] computes metrics and runs the within-dataset and
//!   leave-one-dataset-out protocols.
//!
//! [`config`] and [`setup`] describe runs; [`features`] ties cue and n-gram
//! extraction into one design matrix.

pub mod config;
pub mod corpus;
pub mod cues;
pub mod eval;
pub mod features;
pub mod hashing;
pub mod model;
pub mod ngrams;
pub mod setup;
pub mod stats;
pub mod textproc;

pub use corpus::{Corpus, DatasetManifest, Document, Label};
pub use textproc::{AnnotatedDocument, Token};
