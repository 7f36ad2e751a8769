//! Per-term weighting functions. The public functions check their
//! preconditions; the `*_unchecked` twins are used in the scoring loops where
//! the index already guarantees them.

use super::{Bm25Params, LmParams, RankingError, Smoothing, TfIdfParams};

fn require(cond: bool, msg: &str) -> Result<(), RankingError> {
    if cond {
        Ok(())
    } else {
        Err(RankingError::Contract(msg.to_string()))
    }
}

fn check_doc_stats(tf: u64, dl: u64, avdl: f64, df: u64, n: u64) -> Result<(), RankingError> {
    require(tf >= 1, "tf must be >= 1")?;
    require(df >= 1, "df must be >= 1")?;
    require(n >= df, "N must be >= df")?;
    require(dl >= 1, "dl must be >= 1")?;
    require(avdl > 0.0 && avdl.is_finite(), "avdl must be positive")
}

/// Robertson–Spärck Jones idf: ln((N − df + 0.5) / (df + 0.5)).
pub fn rsj_idf(df: u64, n: u64) -> f64 {
    ((n as f64 - df as f64 + 0.5) / (df as f64 + 0.5)).ln()
}

/// ln(N / df).
pub fn tfidf_idf(df: u64, n: u64) -> f64 {
    (n as f64 / df as f64).ln()
}

pub(crate) fn bm25_doc_term_unchecked(tf: u64, dl: u64, avdl: f64, df: u64, n: u64, p: &Bm25Params) -> f64 {
    let mut idf = rsj_idf(df, n);
    if p.clamp_negative_idf && idf < 0.0 {
        idf = 0.0;
    }
    let tf = tf as f64;
    let k = p.k1 * ((1.0 - p.b) + p.b * dl as f64 / avdl);
    idf * ((p.k1 + 1.0) * tf) / (k + tf)
}

/// Okapi BM25 document-side term weight.
pub fn bm25_doc_term(tf: u64, dl: u64, avdl: f64, df: u64, n: u64, params: &Bm25Params) -> Result<f64, RankingError> {
    params.validate()?;
    check_doc_stats(tf, dl, avdl, df, n)?;
    Ok(bm25_doc_term_unchecked(tf, dl, avdl, df, n, params))
}

/// Okapi query-side factor ((k3+1)·qtf)/(k3+qtf).
pub fn bm25_query_term(qtf: u64, k3: f64) -> f64 {
    let qtf = qtf as f64;
    ((k3 + 1.0) * qtf) / (k3 + qtf)
}

pub(crate) fn tfidf_term_weight_unchecked(tf: u64, dl: u64, avdl: f64, df: u64, n: u64, p: &TfIdfParams) -> f64 {
    let tf = tf as f64;
    let norm = p.k1 * ((1.0 - p.b) + p.b * dl as f64 / avdl);
    tfidf_idf(df, n) * (p.k1 * tf) / (tf + norm)
}

/// TF-IDF document weight: idf · (k1·tf)/(tf + k1·((1−b) + b·dl/avdl)).
pub fn tfidf_term_weight(
    tf: u64,
    dl: u64,
    avdl: f64,
    df: u64,
    n: u64,
    params: &TfIdfParams,
) -> Result<f64, RankingError> {
    params.validate()?;
    check_doc_stats(tf, dl, avdl, df, n)?;
    Ok(tfidf_term_weight_unchecked(tf, dl, avdl, df, n, params))
}

pub(crate) fn tfidf_query_weight_unchecked(qtf: u64, df: u64, n: u64, p: &TfIdfParams) -> f64 {
    let qtf = qtf as f64;
    tfidf_idf(df, n) * (p.k3 * qtf) / (qtf + p.k3)
}

/// TF-IDF query weight: idf · (k3·qtf)/(qtf + k3).
pub fn tfidf_query_weight(qtf: u64, df: u64, n: u64, params: &TfIdfParams) -> Result<f64, RankingError> {
    params.validate()?;
    require(qtf >= 1, "qtf must be >= 1")?;
    require(df >= 1 && n >= df, "need 1 <= df <= N")?;
    Ok(tfidf_query_weight_unchecked(qtf, df, n, params))
}

pub(crate) fn lm_smoothed_prob_unchecked(tf: u64, dl: u64, uniq: u64, p_c: f64, p: &LmParams) -> f64 {
    let (tf, dl) = (tf as f64, dl as f64);
    match p.smoothing {
        Smoothing::JelinekMercer { lambda } => (1.0 - lambda) * (tf / dl) + lambda * p_c,
        Smoothing::Dirichlet { mu } => (tf + mu * p_c) / (dl + mu),
        Smoothing::AbsoluteDiscount { delta } => (tf - delta).max(0.0) / dl + (delta * uniq as f64 / dl) * p_c,
    }
}

/// Smoothed document language model p_s(t|D).
pub fn lm_smoothed_prob(tf: u64, dl: u64, uniq: u64, p_c: f64, params: &LmParams) -> Result<f64, RankingError> {
    params.validate()?;
    require(dl >= 1, "dl must be >= 1")?;
    require(tf <= dl, "tf must be <= dl")?;
    require(uniq >= 1 && uniq <= dl, "need 1 <= uniq <= dl")?;
    require(p_c > 0.0 && p_c <= 1.0, "p_c must be in (0,1]")?;
    Ok(lm_smoothed_prob_unchecked(tf, dl, uniq, p_c, params))
}

pub(crate) fn lm_alpha_unchecked(dl: u64, uniq: u64, p: &LmParams) -> f64 {
    match p.smoothing {
        Smoothing::JelinekMercer { lambda } => lambda,
        Smoothing::Dirichlet { mu } => mu / (dl as f64 + mu),
        Smoothing::AbsoluteDiscount { delta } => delta * uniq as f64 / dl as f64,
    }
}

/// Mass α_D the smoothed model gives to unseen terms (p_s = α_D·p(t|C)).
pub fn lm_alpha(dl: u64, uniq: u64, params: &LmParams) -> Result<f64, RankingError> {
    params.validate()?;
    require(dl >= 1, "dl must be >= 1")?;
    require(uniq >= 1 && uniq <= dl, "need 1 <= uniq <= dl")?;
    Ok(lm_alpha_unchecked(dl, uniq, params))
}
