//! `key = value` parameter files and the resolution of settings into a
//! retrieval model and analyzer configuration.

use std::path::{Path, PathBuf};

use super::ExperimentError;
use crate::analysis::{load_stopwords, AnalyzerConfig, ApostrophePolicy, CaseFold, StemmerKind};
use crate::ranking::{self, Bm25Params, LmParams, Model, Smoothing, TfIdfParams};

const KEYS: &[&str] = &[
    "model",
    "preset",
    "k1",
    "k3",
    "b",
    "clamp-negative-idf",
    "smoothing",
    "lambda",
    "mu",
    "delta",
    "k",
    "tag",
    "stemmer",
    "lemma-dict",
    "stopwords",
    "casefold",
    "apostrophe",
    "encoding",
    "bpref-variant",
    "docs",
    "topics",
    "qrels",
    "index",
    "out",
    "csv",
];

/// Ordered key/value settings; later entries override earlier ones, so a
/// parameter file can be layered under command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    entries: Vec<(String, String)>,
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

fn known_key(key: &str) -> bool {
    KEYS.contains(&key) || key.strip_prefix("grid.").is_some_and(|p| !p.is_empty())
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse a parameter file: `key = value` per line, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut s = Settings::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ExperimentError::ParamFile { line: i + 1, msg };
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let key = normalize_key(k);
            if !known_key(&key) {
                return Err(err(format!("unknown key `{}`", k.trim())));
            }
            s.entries.push((key, v.trim().to_string()));
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| match e {
            ExperimentError::ParamFile { line, msg } => {
                ExperimentError::Config(format!("{}:{line}: {msg}", path.display()))
            }
            other => other,
        })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((normalize_key(key), value.into()));
    }

    /// Layer `other` on top of `self`.
    pub fn extend(&mut self, other: &Settings) {
        self.entries.extend(other.entries.iter().cloned());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_all(&self, key: &str) -> Vec<&str> {
        self.entries.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str()).collect()
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ExperimentError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| ExperimentError::Config(format!("{key} = {v}: {e}"))))
            .transpose()
    }

    pub fn get_path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }

    /// `grid.<param>` entries in declaration order (last one wins per param).
    pub fn grid(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        for (k, v) in &self.entries {
            if let Some(p) = k.strip_prefix("grid.") {
                match out.iter_mut().find(|(q, _)| q == p) {
                    Some(slot) => slot.1 = v.clone(),
                    None => out.push((p.to_string(), v.clone())),
                }
            }
        }
        out
    }
}

/// Canonical family name for `tfidf|tf-idf`, `okapi|bm25` and `lm|kl`.
pub fn model_family(name: &str) -> Result<&'static str, ExperimentError> {
    match name.to_ascii_lowercase().as_str() {
        "tfidf" | "tf-idf" => Ok("tfidf"),
        "okapi" | "bm25" => Ok("okapi"),
        "lm" | "kl" => Ok("lm"),
        other => Err(ExperimentError::Config(format!("unknown model `{other}` (expected tfidf|okapi|lm)"))),
    }
}

/// Default parameter for each smoothing method: λ=0.5, μ=2000, δ=0.7.
pub fn smoothing_from_name(name: &str) -> Result<Smoothing, ExperimentError> {
    match name.to_ascii_lowercase().as_str() {
        "jelinek-mercer" | "jm" => Ok(Smoothing::JelinekMercer { lambda: 0.5 }),
        "dirichlet" => Ok(Smoothing::Dirichlet { mu: 2000.0 }),
        "absolute-discount" | "absolute-discounting" | "ad" => Ok(Smoothing::AbsoluteDiscount { delta: 0.7 }),
        other => Err(ExperimentError::Config(format!(
            "unknown smoothing `{other}` (expected jelinek-mercer|dirichlet|absolute-discount)"
        ))),
    }
}

fn default_model(family: &str) -> Model {
    match family {
        "tfidf" => Model::TfIdf(TfIdfParams::default()),
        "okapi" => Model::Bm25(Bm25Params::default()),
        _ => Model::Lm(LmParams::default()),
    }
}

/// Set one named parameter (`k1`, `k3`, `b`, `lambda`, `mu`, `delta`) on
/// `model`. A smoothing parameter must belong to the model's method.
pub fn apply_param(model: &mut Model, key: &str, value: f64) -> Result<(), ExperimentError> {
    let described = model.to_string();
    match (model, key) {
        (Model::TfIdf(p), "k1") => p.k1 = value,
        (Model::TfIdf(p), "k3") => p.k3 = value,
        (Model::TfIdf(p), "b") => p.b = value,
        (Model::Bm25(p), "k1") => p.k1 = value,
        (Model::Bm25(p), "k3") => p.k3 = value,
        (Model::Bm25(p), "b") => p.b = value,
        (Model::Lm(LmParams { smoothing: Smoothing::JelinekMercer { lambda } }), "lambda") => *lambda = value,
        (Model::Lm(LmParams { smoothing: Smoothing::Dirichlet { mu } }), "mu") => *mu = value,
        (Model::Lm(LmParams { smoothing: Smoothing::AbsoluteDiscount { delta } }), "delta") => *delta = value,
        _ => return Err(ExperimentError::Config(format!("parameter `{key}` does not apply to {described}"))),
    }
    Ok(())
}

const SMOOTHING_KEYS: [(&str, &str); 3] =
    [("lambda", "jelinek-mercer"), ("mu", "dirichlet"), ("delta", "absolute-discount")];

/// Resolve `preset` / `model` / `smoothing` and individual parameters into a
/// validated model. Individual parameters override the preset's values.
pub fn resolve_model(settings: &Settings) -> Result<Model, ExperimentError> {
    let family = settings.get("model").map(model_family).transpose()?;
    let mut model = match (settings.get("preset"), family) {
        (Some(name), fam) => {
            let m = ranking::preset(name)?;
            if let Some(f) = fam {
                if f != m.family() {
                    return Err(ExperimentError::Config(format!(
                        "preset `{name}` is a {} preset but model `{f}` was requested",
                        m.family()
                    )));
                }
            }
            m
        }
        (None, Some(f)) => default_model(f),
        (None, None) => {
            return Err(ExperimentError::Config("no retrieval model selected (set `model` or `preset`)".into()))
        }
    };

    if let Model::Lm(p) = &mut model {
        let given: Vec<&str> =
            SMOOTHING_KEYS.iter().filter(|(k, _)| settings.get(k).is_some()).map(|(_, m)| *m).collect();
        let method = match (settings.get("smoothing"), given.as_slice()) {
            (Some(s), _) => Some(smoothing_from_name(s)?),
            (None, [only]) => Some(smoothing_from_name(only)?),
            (None, []) => None,
            (None, _) => {
                return Err(ExperimentError::Config("more than one of lambda, mu, delta given".into()));
            }
        };
        if let Some(m) = method {
            if m.name() != p.smoothing.name() {
                p.smoothing = m;
            }
        }
    } else if settings.get("smoothing").is_some() {
        return Err(ExperimentError::Config(format!(
            "`smoothing` only applies to the lm model, not {}",
            model.family()
        )));
    }

    for key in ["k1", "k3", "b", "lambda", "mu", "delta"] {
        if let Some(v) = settings.get_parsed::<f64>(key)? {
            apply_param(&mut model, key, v)?;
        }
    }
    if let Some(clamp) = settings.get_parsed::<bool>("clamp-negative-idf")? {
        match &mut model {
            Model::Bm25(p) => p.clamp_negative_idf = clamp,
            _ => return Err(ExperimentError::Config("`clamp-negative-idf` only applies to okapi".into())),
        }
    }
    model.validate()?;
    Ok(model)
}

/// Analyzer configuration from `stemmer`, `lemma-dict`, `stopwords`,
/// `casefold` and `apostrophe`; `None` if none of them is set.
pub fn resolve_analyzer(settings: &Settings) -> Result<Option<AnalyzerConfig>, ExperimentError> {
    if ["stemmer", "lemma-dict", "stopwords", "casefold", "apostrophe"].iter().all(|k| settings.get(k).is_none()) {
        return Ok(None);
    }
    let casefold: CaseFold = settings.get_parsed("casefold")?.unwrap_or_default();
    let apostrophe: ApostrophePolicy = settings.get_parsed("apostrophe")?.unwrap_or_default();
    let stemmer = match settings.get("stemmer").unwrap_or("none") {
        "none" => StemmerKind::None,
        "affix" | "snowball" => StemmerKind::Affix,
        "lemma" => {
            let dictionary = settings
                .get_path("lemma-dict")
                .ok_or_else(|| ExperimentError::Config("stemmer `lemma` needs `lemma-dict`".into()))?;
            StemmerKind::Lemma { dictionary }
        }
        other => return Err(ExperimentError::Config(format!("unknown stemmer `{other}` (expected none|affix|lemma)"))),
    };
    if settings.get("lemma-dict").is_some() && !matches!(stemmer, StemmerKind::Lemma { .. }) {
        return Err(ExperimentError::Config("`lemma-dict` given but stemmer is not `lemma`".into()));
    }
    let stopwords = settings.get_path("stopwords").map(|p| load_stopwords(&p, casefold)).transpose()?;
    Ok(Some(AnalyzerConfig { casefold, apostrophe, stopwords, stemmer }))
}
