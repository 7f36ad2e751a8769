//! Shared by the acceptance suite, integration tests and benches: seeded
//! synthetic corpora and an exhaustive scoring oracle written directly from
//! the model formulas, independent of the library's ranking code.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use tirkit::corpus::Document;

/// Lowercase ASCII word for vocabulary slot `i` (`qa`, `qb`, …).
pub fn word(mut i: usize) -> String {
    let mut s = String::from("q");
    loop {
        s.push((b'a' + (i % 26) as u8) as char);
        i /= 26;
        if i == 0 {
            break;
        }
    }
    s
}

pub struct SynthCorpus {
    pub docs: Vec<Document>,
    pub vocab: Vec<String>,
}

/// `n_docs` documents over `vocab_size` words with a skewed term
/// distribution; about 5% of documents are empty.
pub fn corpus_with<R: Rng>(rng: &mut R, n_docs: usize, vocab_size: usize, max_len: usize) -> SynthCorpus {
    let vocab: Vec<String> = (0..vocab_size).map(word).collect();
    let docs = (0..n_docs)
        .map(|i| {
            let len = if rng.gen_bool(0.05) { 0 } else { rng.gen_range(1..=max_len) };
            let words: Vec<&str> = (0..len)
                .map(|_| {
                    let u: f64 = rng.gen();
                    vocab[((u * u) * vocab_size as f64) as usize].as_str()
                })
                .collect();
            Document { docno: format!("D{:05}", i), text: words.join(" ") }
        })
        .collect();
    SynthCorpus { docs, vocab }
}

/// At most 200 documents over at most 500 words.
pub fn random_corpus<R: Rng>(rng: &mut R) -> SynthCorpus {
    let n = rng.gen_range(1..=200);
    let v = rng.gen_range(5..=500);
    corpus_with(rng, n, v, 60)
}

/// 1–4 query words, occasionally repeated or absent from the vocabulary.
pub fn random_query<R: Rng>(rng: &mut R, vocab: &[String]) -> String {
    let n = rng.gen_range(1..=4);
    let mut q: Vec<String> = (0..n).map(|_| vocab[rng.gen_range(0..vocab.len())].clone()).collect();
    if rng.gen_bool(0.2) {
        q.push(q[0].clone());
    }
    if rng.gen_bool(0.1) {
        q.push("zzunseen".into());
    }
    q.join(" ")
}

#[derive(Debug, Clone, Copy)]
pub enum OracleModel {
    TfIdf { k1: f64, k3: f64, b: f64 },
    Bm25 { k1: f64, k3: f64, b: f64, clamp: bool },
    Jm { lambda: f64 },
    Dirichlet { mu: f64 },
    AbsDiscount { delta: f64 },
}

struct ODoc {
    docno: String,
    tf: HashMap<String, f64>,
    dl: f64,
    uniq: f64,
}

/// Statistics counted straight from whitespace-separated document text.
pub struct Oracle {
    docs: Vec<ODoc>,
    df: HashMap<String, f64>,
    cf: HashMap<String, f64>,
    n: f64,
    total: f64,
}

impl Oracle {
    pub fn new(docs: &[Document]) -> Self {
        let mut df = HashMap::new();
        let mut cf = HashMap::new();
        let mut out = Vec::new();
        let mut total = 0.0;
        for d in docs {
            let mut tf: HashMap<String, f64> = HashMap::new();
            for w in d.text.split_whitespace() {
                *tf.entry(w.to_string()).or_default() += 1.0;
            }
            for (w, c) in &tf {
                *df.entry(w.clone()).or_insert(0.0) += 1.0;
                *cf.entry(w.clone()).or_insert(0.0) += c;
            }
            let dl: f64 = tf.values().sum();
            total += dl;
            out.push(ODoc { docno: d.docno.clone(), uniq: tf.len() as f64, tf, dl });
        }
        Oracle { n: out.len() as f64, docs: out, df, cf, total }
    }

    pub fn vocabulary(&self) -> Vec<String> {
        let mut v: Vec<String> = self.cf.keys().cloned().collect();
        v.sort();
        v
    }

    fn avdl(&self) -> f64 {
        self.total / self.n
    }

    fn query_counts(query: &str) -> BTreeMap<String, f64> {
        let mut q = BTreeMap::new();
        for w in query.split_whitespace() {
            *q.entry(w.to_string()).or_insert(0.0) += 1.0;
        }
        q
    }

    /// p_s(t|D) for every document and smoothing model; unseen terms get
    /// α_D·p(t|C).
    pub fn smoothed(&self, doc: usize, term: &str, m: OracleModel) -> f64 {
        let d = &self.docs[doc];
        let tf = d.tf.get(term).copied().unwrap_or(0.0);
        let pc = self.cf.get(term).copied().unwrap_or(0.0) / self.total;
        match m {
            OracleModel::Jm { lambda } => (1.0 - lambda) * tf / d.dl + lambda * pc,
            OracleModel::Dirichlet { mu } => (tf + mu * pc) / (d.dl + mu),
            OracleModel::AbsDiscount { delta } => (tf - delta).max(0.0) / d.dl + delta * d.uniq / d.dl * pc,
            _ => panic!("not a language model"),
        }
    }

    fn alpha(&self, doc: usize, m: OracleModel) -> f64 {
        let d = &self.docs[doc];
        match m {
            OracleModel::Jm { lambda } => lambda,
            OracleModel::Dirichlet { mu } => mu / (d.dl + mu),
            OracleModel::AbsDiscount { delta } => delta * d.uniq / d.dl,
            _ => panic!("not a language model"),
        }
    }

    /// Score of one document, or `None` if it contains no query term.
    pub fn score(&self, doc: usize, query: &str, m: OracleModel) -> Option<f64> {
        let d = &self.docs[doc];
        let q = Self::query_counts(query);
        if !q.keys().any(|t| d.tf.contains_key(t)) {
            return None;
        }
        let avdl = self.avdl();
        let mut s = 0.0;
        match m {
            OracleModel::TfIdf { k1, k3, b } => {
                for (t, &qtf) in &q {
                    let (Some(&tf), Some(&df)) = (d.tf.get(t), self.df.get(t)) else { continue };
                    let idf = (self.n / df).ln();
                    let dw = idf * (k1 * tf) / (tf + k1 * ((1.0 - b) + b * d.dl / avdl));
                    let qw = idf * (k3 * qtf) / (qtf + k3);
                    s += qw * dw;
                }
            }
            OracleModel::Bm25 { k1, k3, b, clamp } => {
                for (t, &qtf) in &q {
                    let (Some(&tf), Some(&df)) = (d.tf.get(t), self.df.get(t)) else { continue };
                    let mut idf = ((self.n - df + 0.5) / (df + 0.5)).ln();
                    if clamp && idf < 0.0 {
                        idf = 0.0;
                    }
                    let big_k = k1 * ((1.0 - b) + b * d.dl / avdl);
                    let dw = idf * ((k1 + 1.0) * tf) / (big_k + tf);
                    s += ((k3 + 1.0) * qtf) / (k3 + qtf) * dw;
                }
            }
            lm => {
                let alpha = self.alpha(doc, lm);
                let mut qlen = 0.0;
                for (t, &qtf) in &q {
                    let Some(&cf) = self.cf.get(t) else { continue };
                    qlen += qtf;
                    if d.tf.contains_key(t) {
                        let pc = cf / self.total;
                        s += qtf * (self.smoothed(doc, t, lm) / (alpha * pc)).ln();
                    }
                }
                s += qlen * alpha.ln();
            }
        }
        Some(s)
    }

    /// Σ_{t∈Q, cf>0} qtf·ln p_s(t|D), evaluated over every query term.
    pub fn direct_lm(&self, doc: usize, query: &str, m: OracleModel) -> f64 {
        Self::query_counts(query)
            .iter()
            .filter(|(t, _)| self.cf.contains_key(*t))
            .map(|(t, qtf)| qtf * self.smoothed(doc, t, m).ln())
            .sum()
    }

    /// Exhaustive ranking: score every document, sort by (score desc,
    /// docno asc), keep `k`.
    pub fn rank(&self, query: &str, m: OracleModel, k: usize) -> Vec<(String, f64)> {
        let mut all: Vec<(String, f64)> = (0..self.docs.len())
            .filter_map(|i| self.score(i, query, m).map(|s| (self.docs[i].docno.clone(), s)))
            .collect();
        all.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        all.truncate(k);
        all
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn dl(&self, doc: usize) -> f64 {
        self.docs[doc].dl
    }
}
