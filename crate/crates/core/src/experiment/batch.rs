use super::ExperimentError;
use crate::analysis::Analyzer;
use crate::corpus::Topic;
use crate::eval::{Run, RunEntry};
use crate::exec::{self, ExecMode};
use crate::index::InvertedIndex;
use crate::ranking::{rank, Model, QueryVector, RankingError};

pub const DEFAULT_K: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutput {
    pub run: Run,
    /// Topics whose analyzed query had no term occurring in the collection.
    pub empty_topics: Vec<String>,
}

/// Rank every topic against `index` and collect the results as a run.
/// Topics are independent and may be evaluated in parallel; the run is
/// ordered by qid regardless.
pub fn run_batch(
    index: &InvertedIndex,
    analyzer: &Analyzer,
    topics: &[Topic],
    model: &Model,
    k: usize,
    tag: &str,
    mode: ExecMode,
) -> Result<BatchOutput, ExperimentError> {
    if analyzer.fingerprint() != index.fingerprint() {
        return Err(ExperimentError::FingerprintMismatch {
            analyzer: analyzer.fingerprint(),
            index: index.fingerprint(),
        });
    }
    model.validate()?;
    if k == 0 {
        return Err(RankingError::ZeroK.into());
    }

    let results = exec::try_map(mode, topics, |topic| -> Result<Option<Vec<RunEntry>>, ExperimentError> {
        let query = QueryVector::analyze(&topic.text, analyzer);
        let ranked = match rank(&query, index, model, k) {
            Ok(r) => r,
            Err(RankingError::EmptyEffectiveQuery) => {
                log::warn!("topic {}: no query term occurs in the collection; no results", topic.qid);
                return Ok(None);
            }
            Err(e) => return Err(e.into()),
        };
        if !ranked.skipped_terms.is_empty() {
            log::info!(
                "topic {}: dropped terms absent from the collection: {}",
                topic.qid,
                ranked.skipped_terms.join(" ")
            );
        }
        if ranked.is_empty() {
            log::warn!("topic {}: no query term occurs in the collection; no results", topic.qid);
            return Ok(None);
        }
        Ok(Some(
            ranked
                .docs
                .into_iter()
                .enumerate()
                .map(|(i, d)| RunEntry {
                    qid: topic.qid.clone(),
                    docno: d.docno,
                    rank: i as u32 + 1,
                    score: d.score,
                    tag: tag.to_string(),
                })
                .collect(),
        ))
    })?;

    let mut empty_topics = Vec::new();
    let mut entries = Vec::new();
    for (topic, r) in topics.iter().zip(results) {
        match r {
            Some(list) => entries.extend(list),
            None => empty_topics.push(topic.qid.clone()),
        }
    }
    Ok(BatchOutput { run: Run::from_entries(entries)?, empty_topics })
}
