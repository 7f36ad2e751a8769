//! Batch and sweep harness: index corpora, run topic batches into TREC run
//! files, and grid-search model parameters by mean bpref.

mod batch;
mod settings;
mod sweep;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::{AnalysisError, Analyzer, Fingerprint};
use crate::corpus::{open_trec_docs, CorpusError, Encoding};
use crate::eval::EvalError;
use crate::exec::ExecMode;
use crate::index::{read_index, IndexError, InvertedIndex};
use crate::ranking::RankingError;

pub use batch::{run_batch, BatchOutput, DEFAULT_K};
pub use settings::{apply_param, model_family, resolve_analyzer, resolve_model, smoothing_from_name, Settings};
pub use sweep::{reported, sweep, Axis, GridPoint, SweepCondition, SweepResult, SweepRow, SweepSpec};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("parameter file line {line}: {msg}")]
    ParamFile { line: usize, msg: String },
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Corpus { path: PathBuf, source: CorpusError },
    #[error("{}: {source}", path.display())]
    IndexFile { path: PathBuf, source: IndexError },
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Ranking(#[from] RankingError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("analyzer fingerprint {analyzer} does not match the index ({index}); re-index with these analyzer options or drop them to use the index's own")]
    FingerprintMismatch { analyzer: Fingerprint, index: Fingerprint },
    #[error("grid point [{point}]: {source}")]
    GridPoint { point: String, source: Box<ExperimentError> },
}

/// Stream and index TREC document files in order. The first malformed
/// document aborts the build, reported with its file and byte offset.
pub fn index_files(
    paths: &[PathBuf],
    encoding: Encoding,
    analyzer: &Analyzer,
    mode: ExecMode,
) -> Result<InvertedIndex, ExperimentError> {
    let mut failure: Option<ExperimentError> = None;
    let mut readers = Vec::with_capacity(paths.len());
    for p in paths {
        let r = open_trec_docs(p, encoding).map_err(|source| ExperimentError::Corpus { path: p.clone(), source })?;
        readers.push((p.clone(), r));
    }
    let docs =
        readers.into_iter().flat_map(|(path, r)| r.map(move |d| (path.clone(), d))).map_while(|(path, d)| match d {
            Ok(doc) => Some(doc),
            Err(source) => {
                failure = Some(ExperimentError::Corpus { path, source });
                None
            }
        });
    let index = InvertedIndex::build(docs, analyzer, mode);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(index?)
}

pub fn load_index(path: &Path) -> Result<InvertedIndex, ExperimentError> {
    read_index(path).map_err(|source| ExperimentError::IndexFile { path: path.to_path_buf(), source })
}

/// The analyzer to query `index` with: rebuilt from the index's stored
/// configuration, or built from explicit settings and checked against the
/// index fingerprint.
pub fn query_analyzer(index: &InvertedIndex, settings: &Settings) -> Result<Analyzer, ExperimentError> {
    match resolve_analyzer(settings)? {
        None => Ok(index.analyzer()?),
        Some(config) => {
            let a = Analyzer::new(config)?;
            if a.fingerprint() != index.fingerprint() {
                return Err(ExperimentError::FingerprintMismatch {
                    analyzer: a.fingerprint(),
                    index: index.fingerprint(),
                });
            }
            Ok(a)
        }
    }
}
