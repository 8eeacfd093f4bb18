//! Term weighting for binary text classification.
//!
//! This crate turns labeled text corpora into weighted sparse vectors under
//! ten term-weighting schemes, two unsupervised (`tf`, `tf-idf`) and eight
//! supervised (`dtf-idf`, `tf-idf-icf`, `tf-rf`, the four-member IGM family
//! and `tf-idfc-rf`), selects features by chi-square score, classifies with
//! multinomial naive Bayes or a linear SVM, and scores everything with
//! class-weighted precision/recall/F1 under stratified k-fold
//! cross-validation.
//!
//! The pieces compose in pipeline order:
//!
//! ```
//! use termweight::corpus::{Document, LabeledCorpus};
//! use termweight::eval::{run_experiment, Classifier, ExperimentConfig};
//! use termweight::weighting::{SchemeKind, SchemeSpec};
//!
//! let docs: Vec<Document> = (0..20)
//!     .map(|i| {
//!         let (label, text) = if i % 2 == 0 {
//!             ("pos", "witty and warm")
//!         } else {
//!             ("neg", "dull and grim")
//!         };
//!         Document::new(format!("d{i}"), text, label)
//!     })
//!     .collect();
//! let corpus = LabeledCorpus::new(docs, vec!["pos".into(), "neg".into()], "pos")?;
//!
//! let config = ExperimentConfig {
//!     schemes: vec![SchemeSpec::new(SchemeKind::TfIdfcRf)],
//!     feature_sizes: vec![100],
//!     classifiers: vec![Classifier::NaiveBayes],
//!     folds: 5,
//!     ..ExperimentConfig::default()
//! };
//! let report = run_experiment(&corpus, &config)?;
//! assert_eq!(report.rows().len(), 1);
//! # Ok::<(), termweight::Error>(())
//! ```
//!
//! Determinism is a design requirement: loaders order documents
//! lexicographically, vocabularies sort terms, fold shuffling and SVM
//! training use the pinned generator in [`rng`], and report assembly is
//! fixed-order, so a `(corpus, configuration, seed)` triple reproduces a
//! report byte for byte.

pub mod classify;
pub mod corpus;
mod error;
pub mod eval;
pub mod rng;
pub mod selection;
pub mod stats;
pub mod weighting;

pub use error::{Error, Result};
