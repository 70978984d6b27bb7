//! Linguistic deception cues for review texts.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`] loads labelled reviews from the canonical CSV format.
//! * [`lingpipe`] tokenizes, segments and tags review text with a lexicon-based tagger.
//! * [`features`] turns an analyzed document into the fifteen cue values.
//! * [`stats`] holds the density, overlap and rank-test primitives.
//! * [`learners`] implements the classifiers used for ranking and evaluation.
//! * [`selection`] runs RFE, Boruta and random-forest ranking over a feature matrix.
//! * [`evaluation`] provides metrics, stratified cross-validation and the experiment grid.

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod learners;
pub mod lingpipe;
pub mod rng;
pub mod selection;
pub mod stats;

pub use corpus::{Corpus, Label, Review, Sentiment};
pub use error::{Error, Result};
pub use features::{FeatureMatrix, FeatureVector, FEATURE_NAMES};
pub use learners::Dataset;
