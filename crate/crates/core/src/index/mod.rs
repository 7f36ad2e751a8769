//! In-memory inverted index with the collection statistics the ranking
//! models need, plus a pinned binary file format.

mod persist;

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;

use thiserror::Error;

use crate::analysis::{AnalysisError, Analyzer, AnalyzerConfig, Fingerprint};
use crate::corpus::Document;
use crate::exec::{self, ExecMode};

pub use persist::{read_index, write_index, FORMAT_VERSION, MAGIC};

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("duplicate docno `{0}`")]
    DuplicateDocno(String),
    #[error("empty collection (no indexed terms)")]
    EmptyCollection,
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("not an index file: {0}")]
    Format(String),
    #[error("index format version {found} is not supported (expected {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("index checksum mismatch (file is corrupt)")]
    Checksum,
    #[error("index file is truncated")]
    Truncated,
    #[error("stored analyzer configuration cannot be rebuilt: {0}")]
    Analyzer(#[from] AnalysisError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub docid: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionaryEntry {
    pub term: String,
    pub df: u32,
    pub cf: u64,
    /// Sorted by docid, strictly ascending.
    pub postings: Vec<Posting>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocEntry {
    pub docid: u32,
    pub docno: String,
    /// Length in analyzed terms.
    pub dl: u32,
    /// Distinct analyzed terms.
    pub uniq: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexStats {
    pub num_docs: u64,
    pub total_terms: u64,
    pub avdl: f64,
    pub vocab_size: u64,
}

impl IndexStats {
    fn compute(num_docs: u64, total_terms: u64, vocab_size: u64) -> Self {
        let avdl = if num_docs == 0 { 0.0 } else { total_terms as f64 / num_docs as f64 };
        IndexStats { num_docs, total_terms, avdl, vocab_size }
    }
}

/// Immutable inverted index. Safe to share between reader threads.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex {
    analyzer: AnalyzerConfig,
    fingerprint: Fingerprint,
    docs: Vec<DocEntry>,
    /// Sorted by term (byte order).
    terms: Vec<DictionaryEntry>,
    stats: IndexStats,
}

const BUILD_CHUNK: usize = 2048;

impl InvertedIndex {
    /// Index `docs` with `analyzer`. Docids follow ingestion order; analysis
    /// of each chunk of documents may run in parallel, the merge is serial.
    pub fn build<I>(docs: I, analyzer: &Analyzer, mode: ExecMode) -> Result<Self, IndexError>
    where
        I: IntoIterator<Item = Document>,
    {
        let mut seen: HashSet<String> = HashSet::new();
        let mut table: Vec<DocEntry> = Vec::new();
        let mut postings: HashMap<String, Vec<Posting>> = HashMap::new();
        let mut total_terms = 0u64;

        let mut iter = docs.into_iter();
        loop {
            let chunk: Vec<Document> = iter.by_ref().take(BUILD_CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            let counted = exec::map(mode, &chunk, |d| count_terms(analyzer.analyze(&d.text)));
            for (doc, counts) in chunk.into_iter().zip(counted) {
                if !seen.insert(doc.docno.clone()) {
                    return Err(IndexError::DuplicateDocno(doc.docno));
                }
                let docid = table.len() as u32;
                let dl: u32 = counts.iter().map(|(_, tf)| tf).sum();
                table.push(DocEntry { docid, docno: doc.docno, dl, uniq: counts.len() as u32 });
                total_terms += dl as u64;
                for (term, tf) in counts {
                    postings.entry(term).or_default().push(Posting { docid, tf });
                }
            }
        }

        let mut terms: Vec<DictionaryEntry> = postings
            .into_iter()
            .map(|(term, postings)| DictionaryEntry {
                df: postings.len() as u32,
                cf: postings.iter().map(|p| p.tf as u64).sum(),
                term,
                postings,
            })
            .collect();
        terms.sort_unstable_by(|a, b| a.term.cmp(&b.term));
        let stats = IndexStats::compute(table.len() as u64, total_terms, terms.len() as u64);
        Ok(InvertedIndex {
            analyzer: analyzer.config().clone(),
            fingerprint: analyzer.fingerprint(),
            docs: table,
            terms,
            stats,
        })
    }

    pub(crate) fn from_parts(
        analyzer: AnalyzerConfig,
        fingerprint: Fingerprint,
        docs: Vec<DocEntry>,
        terms: Vec<DictionaryEntry>,
        total_terms: u64,
    ) -> Self {
        let stats = IndexStats::compute(docs.len() as u64, total_terms, terms.len() as u64);
        InvertedIndex { analyzer, fingerprint, docs, terms, stats }
    }

    pub fn lookup(&self, term: &str) -> Option<&DictionaryEntry> {
        self.terms.binary_search_by(|e| e.term.as_str().cmp(term)).ok().map(|i| &self.terms[i])
    }

    /// p(t|C) = cf(t) / total_terms; 0 for unseen terms.
    pub fn collection_prob(&self, term: &str) -> Result<f64, IndexError> {
        if self.stats.total_terms == 0 {
            return Err(IndexError::EmptyCollection);
        }
        Ok(self.lookup(term).map_or(0.0, |e| e.cf as f64 / self.stats.total_terms as f64))
    }

    pub fn stats(&self) -> &IndexStats {
        &self.stats
    }

    pub fn doc(&self, docid: u32) -> &DocEntry {
        &self.docs[docid as usize]
    }

    pub fn docs(&self) -> &[DocEntry] {
        &self.docs
    }

    pub fn terms(&self) -> &[DictionaryEntry] {
        &self.terms
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }

    pub fn analyzer_config(&self) -> &AnalyzerConfig {
        &self.analyzer
    }

    /// Rebuild the analyzer the index was built with and check that it still
    /// produces the stored fingerprint (a lemma dictionary may have changed
    /// on disk since indexing).
    pub fn analyzer(&self) -> Result<Analyzer, IndexError> {
        let analyzer = Analyzer::new(self.analyzer.clone())?;
        if analyzer.fingerprint() != self.fingerprint {
            return Err(IndexError::Format(format!(
                "analyzer rebuilt from the stored configuration has fingerprint {}, index was built with {}",
                analyzer.fingerprint(),
                self.fingerprint
            )));
        }
        Ok(analyzer)
    }
}

fn count_terms(terms: Vec<String>) -> Vec<(String, u32)> {
    let mut counts: HashMap<String, u32> = HashMap::with_capacity(terms.len());
    for t in terms {
        *counts.entry(t).or_insert(0) += 1;
    }
    let mut v: Vec<_> = counts.into_iter().collect();
    v.sort_unstable();
    v
}
