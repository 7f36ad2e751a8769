//! Ad-hoc retrieval experiment toolkit.
//!
//! Pipeline: [`corpus`] parses TREC-style documents, topics and qrels;
//! [`analysis`] turns text into terms (Turkish case folding, affix or
//! dictionary stemming); [`index`] builds and persists an inverted index;
//! [`ranking`] scores documents with TF-IDF, Okapi BM25 or KL-divergence
//! language models; [`eval`] computes bpref; [`experiment`] drives batches
//! and parameter sweeps.

pub mod analysis;
pub mod corpus;
pub mod eval;
pub mod exec;
pub mod experiment;
pub mod index;
pub mod ranking;

pub use exec::ExecMode;
