//! TF-IDF, Okapi BM25 and KL-divergence language-model ranking.
//!
//! Candidates are the union of the query terms' postings for every model.
//! Ties are broken by ascending docno. Natural logarithms throughout.

mod formulas;
mod presets;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{Analyzer, Fingerprint};
use crate::index::InvertedIndex;

pub use formulas::{
    bm25_doc_term, bm25_query_term, lm_alpha, lm_smoothed_prob, rsj_idf, tfidf_idf, tfidf_query_weight,
    tfidf_term_weight,
};
pub use presets::{preset, preset_names, PRESETS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankingError {
    #[error("precondition violated: {0}")]
    Contract(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("unknown preset `{name}` (available: {available})")]
    UnknownPreset { name: String, available: String },
    #[error("query analyzed with fingerprint {query} but index was built with {index}; re-analyze with the index's configuration")]
    FingerprintMismatch { query: Fingerprint, index: Fingerprint },
    #[error("query has no terms occurring in the collection")]
    EmptyEffectiveQuery,
    #[error("k must be >= 1")]
    ZeroK,
}

fn param(ok: bool, msg: impl Into<String>) -> Result<(), RankingError> {
    if ok {
        Ok(())
    } else {
        Err(RankingError::InvalidParam(msg.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub k3: f64,
    pub b: f64,
    pub clamp_negative_idf: bool,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.2, k3: 1000.0, b: 0.75, clamp_negative_idf: true }
    }
}

impl Bm25Params {
    pub fn validate(&self) -> Result<(), RankingError> {
        param(self.k1 >= 0.0 && self.k1.is_finite(), format!("k1={} must be >= 0", self.k1))?;
        param(self.k3 >= 0.0 && self.k3.is_finite(), format!("k3={} must be >= 0", self.k3))?;
        param((0.0..=1.0).contains(&self.b), format!("b={} must be in [0,1]", self.b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TfIdfParams {
    pub k1: f64,
    pub k3: f64,
    pub b: f64,
}

impl Default for TfIdfParams {
    fn default() -> Self {
        TfIdfParams { k1: 1.0, k3: 1000.0, b: 0.5 }
    }
}

impl TfIdfParams {
    pub fn validate(&self) -> Result<(), RankingError> {
        param(self.k1 >= 0.0 && self.k1.is_finite(), format!("k1={} must be >= 0", self.k1))?;
        param(self.k3 >= 0.0 && self.k3.is_finite(), format!("k3={} must be >= 0", self.k3))?;
        param((0.0..=1.0).contains(&self.b), format!("b={} must be in [0,1]", self.b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum Smoothing {
    JelinekMercer { lambda: f64 },
    Dirichlet { mu: f64 },
    AbsoluteDiscount { delta: f64 },
}

impl Smoothing {
    pub fn name(&self) -> &'static str {
        match self {
            Smoothing::JelinekMercer { .. } => "jelinek-mercer",
            Smoothing::Dirichlet { .. } => "dirichlet",
            Smoothing::AbsoluteDiscount { .. } => "absolute-discount",
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Smoothing::JelinekMercer { lambda } => lambda,
            Smoothing::Dirichlet { mu } => mu,
            Smoothing::AbsoluteDiscount { delta } => delta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmParams {
    pub smoothing: Smoothing,
}

impl LmParams {
    pub const fn jelinek_mercer(lambda: f64) -> Self {
        LmParams { smoothing: Smoothing::JelinekMercer { lambda } }
    }

    pub const fn dirichlet(mu: f64) -> Self {
        LmParams { smoothing: Smoothing::Dirichlet { mu } }
    }

    pub const fn absolute_discount(delta: f64) -> Self {
        LmParams { smoothing: Smoothing::AbsoluteDiscount { delta } }
    }

    /// λ ∈ (0,1], μ > 0, δ ∈ (0,1). The zero endpoints are excluded because
    /// they make α_D = 0 and the KL score undefined.
    pub fn validate(&self) -> Result<(), RankingError> {
        match self.smoothing {
            Smoothing::JelinekMercer { lambda } => {
                param(lambda > 0.0 && lambda <= 1.0, format!("lambda={lambda} must be in (0,1]"))
            }
            Smoothing::Dirichlet { mu } => param(mu > 0.0 && mu.is_finite(), format!("mu={mu} must be > 0")),
            Smoothing::AbsoluteDiscount { delta } => {
                param(delta > 0.0 && delta < 1.0, format!("delta={delta} must be in (0,1)"))
            }
        }
    }
}

impl Default for LmParams {
    fn default() -> Self {
        LmParams::dirichlet(2000.0)
    }
}

/// A retrieval model together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "model")]
pub enum Model {
    TfIdf(TfIdfParams),
    Bm25(Bm25Params),
    Lm(LmParams),
}

impl Model {
    /// CLI name of the model family: `tfidf`, `okapi` or `lm`.
    pub fn family(&self) -> &'static str {
        match self {
            Model::TfIdf(_) => "tfidf",
            Model::Bm25(_) => "okapi",
            Model::Lm(_) => "lm",
        }
    }

    pub fn validate(&self) -> Result<(), RankingError> {
        match self {
            Model::TfIdf(p) => p.validate(),
            Model::Bm25(p) => p.validate(),
            Model::Lm(p) => p.validate(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::TfIdf(p) => write!(f, "tfidf(k1={}, k3={}, b={})", p.k1, p.k3, p.b),
            Model::Bm25(p) => write!(
                f,
                "okapi(k1={}, k3={}, b={}{})",
                p.k1,
                p.k3,
                p.b,
                if p.clamp_negative_idf { "" } else { ", unclamped" }
            ),
            Model::Lm(p) => write!(f, "lm({}={})", p.smoothing.name(), p.smoothing.value()),
        }
    }
}

/// Analyzed query: distinct terms (sorted) with their in-query counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryVector {
    terms: Vec<(String, u32)>,
    fingerprint: Fingerprint,
}

impl QueryVector {
    pub fn from_terms<I, S>(terms: I, fingerprint: Fingerprint) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut counts: BTreeMap<String, u32> = BTreeMap::new();
        for t in terms {
            *counts.entry(t.into()).or_insert(0) += 1;
        }
        QueryVector { terms: counts.into_iter().collect(), fingerprint }
    }

    pub fn analyze(text: &str, analyzer: &Analyzer) -> Self {
        Self::from_terms(analyzer.analyze(text), analyzer.fingerprint())
    }

    pub fn terms(&self) -> &[(String, u32)] {
        &self.terms
    }

    pub fn qlen(&self) -> u64 {
        self.terms.iter().map(|(_, q)| *q as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDoc {
    pub docid: u32,
    pub docno: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankedList {
    /// Sorted by (score desc, docno asc).
    pub docs: Vec<ScoredDoc>,
    /// Query terms ignored because they never occur in the collection.
    pub skipped_terms: Vec<String>,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }
}

/// KL-divergence score of one document in rank-equivalent form:
/// Σ_{t∈Q, tf>0} qtf·ln(p_s(t|D) / (α_D·p(t|C))) + |Q|·ln α_D, where terms
/// with cf = 0 are dropped from Q.
pub fn lm_score(
    query: &QueryVector,
    docid: u32,
    index: &InvertedIndex,
    params: &LmParams,
) -> Result<f64, RankingError> {
    params.validate()?;
    if docid as usize >= index.num_docs() {
        return Err(RankingError::Contract(format!("docid {docid} out of range")));
    }
    let doc = index.doc(docid);
    if doc.dl == 0 {
        return Err(RankingError::Contract("document is empty".into()));
    }
    let total = index.stats().total_terms as f64;
    let (dl, uniq) = (doc.dl as u64, doc.uniq as u64);
    let alpha = formulas::lm_alpha_unchecked(dl, uniq, params);
    let mut qlen = 0u64;
    let mut score = 0.0;
    for (term, qtf) in query.terms() {
        let Some(entry) = index.lookup(term) else { continue };
        qlen += *qtf as u64;
        if let Ok(i) = entry.postings.binary_search_by_key(&docid, |p| p.docid) {
            let p_c = entry.cf as f64 / total;
            let ps = formulas::lm_smoothed_prob_unchecked(entry.postings[i].tf as u64, dl, uniq, p_c, params);
            score += *qtf as f64 * (ps / (alpha * p_c)).ln();
        }
    }
    if qlen == 0 {
        return Err(RankingError::EmptyEffectiveQuery);
    }
    Ok(score + qlen as f64 * alpha.ln())
}

/// Top-`k` documents for `query` under `model`.
///
/// Only documents containing at least one query term are scored. For the
/// language model an empty effective query is an error; for TF-IDF and BM25
/// it simply yields an empty list.
pub fn rank(query: &QueryVector, index: &InvertedIndex, model: &Model, k: usize) -> Result<RankedList, RankingError> {
    if k == 0 {
        return Err(RankingError::ZeroK);
    }
    if query.fingerprint() != index.fingerprint() {
        return Err(RankingError::FingerprintMismatch { query: query.fingerprint(), index: index.fingerprint() });
    }
    model.validate()?;

    let mut matched = Vec::new();
    let mut skipped_terms = Vec::new();
    for (term, qtf) in query.terms() {
        match index.lookup(term) {
            Some(e) => matched.push((e, *qtf as u64)),
            None => skipped_terms.push(term.clone()),
        }
    }
    if matched.is_empty() {
        return match model {
            Model::Lm(_) => Err(RankingError::EmptyEffectiveQuery),
            _ => Ok(RankedList { docs: Vec::new(), skipped_terms }),
        };
    }

    let stats = index.stats();
    let (n, avdl) = (stats.num_docs, stats.avdl);
    // Term-at-a-time accumulation into a dense array; `touched` records the
    // candidate set in first-seen order.
    let mut acc = vec![0.0f64; index.num_docs()];
    let mut seen = vec![false; index.num_docs()];
    let mut touched: Vec<u32> = Vec::new();
    for (entry, qtf) in &matched {
        let df = entry.df as u64;
        let query_factor = match model {
            Model::TfIdf(p) => formulas::tfidf_query_weight_unchecked(*qtf, df, n, p),
            Model::Bm25(p) => bm25_query_term(*qtf, p.k3),
            Model::Lm(_) => *qtf as f64,
        };
        let p_c = entry.cf as f64 / stats.total_terms as f64;
        for posting in &entry.postings {
            let d = index.doc(posting.docid);
            let (tf, dl) = (posting.tf as u64, d.dl as u64);
            let w = match model {
                Model::TfIdf(p) => formulas::tfidf_term_weight_unchecked(tf, dl, avdl, df, n, p),
                Model::Bm25(p) => formulas::bm25_doc_term_unchecked(tf, dl, avdl, df, n, p),
                Model::Lm(p) => {
                    let uniq = d.uniq as u64;
                    let ps = formulas::lm_smoothed_prob_unchecked(tf, dl, uniq, p_c, p);
                    (ps / (formulas::lm_alpha_unchecked(dl, uniq, p) * p_c)).ln()
                }
            };
            let slot = posting.docid as usize;
            if !seen[slot] {
                seen[slot] = true;
                touched.push(posting.docid);
            }
            acc[slot] += query_factor * w;
        }
    }

    if let Model::Lm(p) = model {
        let qlen: u64 = matched.iter().map(|(_, q)| q).sum();
        for &docid in &touched {
            let d = index.doc(docid);
            acc[docid as usize] += qlen as f64 * formulas::lm_alpha_unchecked(d.dl as u64, d.uniq as u64, p).ln();
        }
    }

    let mut docs: Vec<ScoredDoc> = touched
        .into_iter()
        .map(|docid| ScoredDoc { docid, docno: index.doc(docid).docno.clone(), score: acc[docid as usize] })
        .collect();
    let order = |a: &ScoredDoc, b: &ScoredDoc| b.score.total_cmp(&a.score).then_with(|| a.docno.cmp(&b.docno));
    if docs.len() > k {
        docs.select_nth_unstable_by(k - 1, order);
        docs.truncate(k);
    }
    docs.sort_unstable_by(order);
    Ok(RankedList { docs, skipped_terms })
}
