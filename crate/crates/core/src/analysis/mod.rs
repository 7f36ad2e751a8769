//! Text analysis: tokenization, case folding, stopword removal, stemming.
//!
//! Documents and queries of one experiment must go through the same
//! [`Analyzer`]; its [`Fingerprint`] is stored in the index so the search
//! side can refuse queries analyzed differently.

mod affix;
mod fold;
mod lemma;

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use affix::{stem_affix, AffixRules, AffixStemmer, RulesError, SUPPORTED_RULES_VERSION};
pub use fold::{turkish_fold, CaseFold};
pub use lemma::{stem_lemma, LemmaTable};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("cannot read {}: {source}", path.display())]
    Resource { path: PathBuf, source: std::io::Error },
    #[error("lemma dictionary line {line}: {msg}")]
    LemmaSyntax { line: usize, msg: String },
    #[error(transparent)]
    Rules(#[from] RulesError),
}

/// What to do with an apostrophe inside a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApostrophePolicy {
    /// Drop the apostrophe and everything after it: `türkiye'nin` → `türkiye`.
    #[default]
    TruncateAfter,
    /// Keep the token whole (leading/trailing apostrophes are still trimmed).
    KeepWhole,
}

impl ApostrophePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            ApostrophePolicy::TruncateAfter => "truncate-after",
            ApostrophePolicy::KeepWhole => "keep-whole",
        }
    }
}

impl std::str::FromStr for ApostrophePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "truncate-after" => Ok(ApostrophePolicy::TruncateAfter),
            "keep-whole" => Ok(ApostrophePolicy::KeepWhole),
            other => Err(format!("unknown apostrophe policy `{other}` (expected truncate-after|keep-whole)")),
        }
    }
}

/// Stemming strategy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StemmerKind {
    #[default]
    None,
    Affix,
    Lemma {
        dictionary: PathBuf,
    },
}

impl StemmerKind {
    /// Short label used in run tags and sweep tables.
    pub fn label(&self) -> &'static str {
        match self {
            StemmerKind::None => "none",
            StemmerKind::Affix => "affix",
            StemmerKind::Lemma { .. } => "lemma",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AnalyzerConfig {
    pub casefold: CaseFold,
    pub apostrophe: ApostrophePolicy,
    /// Folded stopwords; `None` means no filtering.
    pub stopwords: Option<BTreeSet<String>>,
    pub stemmer: StemmerKind,
}

impl AnalyzerConfig {
    pub fn with_stemmer(stemmer: StemmerKind) -> Self {
        AnalyzerConfig { stemmer, ..Default::default() }
    }
}

/// Read a stopword file (UTF-8, one word per line), folding each entry.
pub fn load_stopwords(path: &Path, fold: CaseFold) -> Result<BTreeSet<String>, AnalysisError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| AnalysisError::Resource { path: path.to_path_buf(), source })?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(|l| fold.fold(l)).collect())
}

/// SHA-256 of an analyzer's canonical description.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub [u8; 32]);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0[..8] {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fingerprint({self})")
    }
}

/// A case-folded token; never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone)]
enum Stemmer {
    Identity,
    Affix(Arc<AffixStemmer>),
    Lemma(Arc<LemmaTable>),
}

/// A configured, immutable analysis pipeline. Cheap to clone and safe to
/// share between threads.
#[derive(Debug, Clone)]
pub struct Analyzer {
    config: AnalyzerConfig,
    stemmer: Stemmer,
    fingerprint: Fingerprint,
}

#[inline]
fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

#[inline]
fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_apostrophe(c)
}

impl Analyzer {
    /// Build the pipeline, loading the lemma dictionary if one is configured.
    pub fn new(config: AnalyzerConfig) -> Result<Self, AnalysisError> {
        let stemmer = match &config.stemmer {
            StemmerKind::None => Stemmer::Identity,
            StemmerKind::Affix => Stemmer::Affix(Arc::new(AffixStemmer::default())),
            StemmerKind::Lemma { dictionary } => {
                Stemmer::Lemma(Arc::new(LemmaTable::load(dictionary, config.casefold)?))
            }
        };
        Ok(Self::assemble(config, stemmer))
    }

    /// Lemma pipeline over an already loaded table.
    pub fn with_lemma_table(mut config: AnalyzerConfig, table: LemmaTable) -> Self {
        if !matches!(config.stemmer, StemmerKind::Lemma { .. }) {
            config.stemmer = StemmerKind::Lemma { dictionary: PathBuf::new() };
        }
        Self::assemble(config, Stemmer::Lemma(Arc::new(table)))
    }

    /// Affix pipeline over a custom rule table.
    pub fn with_affix_rules(mut config: AnalyzerConfig, rules: AffixRules) -> Self {
        config.stemmer = StemmerKind::Affix;
        Self::assemble(config, Stemmer::Affix(Arc::new(AffixStemmer::new(rules))))
    }

    fn assemble(config: AnalyzerConfig, stemmer: Stemmer) -> Self {
        let canonical = canonical_description(&config, &stemmer);
        let fingerprint = Fingerprint(Sha256::digest(canonical.as_bytes()).into());
        Analyzer { config, stemmer, fingerprint }
    }

    pub fn config(&self) -> &AnalyzerConfig {
        &self.config
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }

    /// Canonical text the fingerprint is computed from.
    pub fn canonical_description(&self) -> String {
        canonical_description(&self.config, &self.stemmer)
    }

    /// Split on anything that is not a letter, digit or apostrophe, fold,
    /// then apply the apostrophe policy. Empty tokens are dropped.
    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        tokenize(text, &self.config)
    }

    /// Stem a single folded term according to the configured strategy.
    /// Terms containing digits are never stemmed, and a stem that would be
    /// empty falls back to the term itself.
    pub fn stem(&self, term: &str) -> String {
        if term.chars().any(char::is_numeric) {
            return term.to_string();
        }
        let stem = match &self.stemmer {
            Stemmer::Identity => return term.to_string(),
            Stemmer::Affix(s) => s.stem(term),
            Stemmer::Lemma(t) => stem_lemma(term, t),
        };
        if stem.is_empty() {
            term.to_string()
        } else {
            stem
        }
    }

    /// tokenize → stopword filter → stem.
    pub fn analyze(&self, text: &str) -> Vec<String> {
        let stop = self.config.stopwords.as_ref();
        self.tokenize(text)
            .into_iter()
            .filter(|t| stop.is_none_or(|s| !s.contains(t.as_str())))
            .map(|t| match self.stemmer {
                Stemmer::Identity => t.into_string(),
                _ => self.stem(t.as_str()),
            })
            .collect()
    }
}

fn canonical_description(config: &AnalyzerConfig, stemmer: &Stemmer) -> String {
    let stopwords = match &config.stopwords {
        None => "none".to_string(),
        Some(set) => set.iter().cloned().collect::<Vec<_>>().join(","),
    };
    let stemmer = match stemmer {
        Stemmer::Identity => "none".to_string(),
        Stemmer::Affix(s) => format!("affix:v{}", s.rules().version()),
        Stemmer::Lemma(t) => {
            let hex: String = t.digest().iter().map(|b| format!("{b:02x}")).collect();
            format!("lemma:{hex}")
        }
    };
    format!(
        "tirkit-analyzer/1\ncasefold={}\napostrophe={}\nstopwords={}\nstemmer={}\n",
        config.casefold.as_str(),
        config.apostrophe.as_str(),
        stopwords,
        stemmer
    )
}

/// Tokenize `text` under `config` (stemming and stopwords are not applied).
pub fn tokenize(text: &str, config: &AnalyzerConfig) -> Vec<Token> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        if current.is_empty() {
            return;
        }
        let token = match config.apostrophe {
            ApostrophePolicy::TruncateAfter => match current.find(is_apostrophe) {
                Some(i) => &current[..i],
                None => current.as_str(),
            },
            ApostrophePolicy::KeepWhole => current.trim_matches(is_apostrophe),
        };
        if !token.is_empty() {
            out.push(Token(token.to_string()));
        }
        current.clear();
    };
    for c in text.chars() {
        if is_word_char(c) {
            config.casefold.fold_into(c, &mut current);
        } else {
            flush(&mut current);
        }
    }
    flush(&mut current);
    out
}

/// Run the full pipeline once with a freshly built analyzer.
pub fn analyze(text: &str, config: &AnalyzerConfig) -> Result<Vec<String>, AnalysisError> {
    Ok(Analyzer::new(config.clone())?.analyze(text))
}
