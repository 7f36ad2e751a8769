use std::collections::HashMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::fold::CaseFold;
use super::AnalysisError;

/// Dictionary lemmatizer: exact lookup of a folded surface form.
///
/// File format: UTF-8, one `surface<TAB>lemma` pair per line, blank lines
/// ignored. Both columns are folded on load. When a surface form appears
/// more than once the last line wins.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaTable {
    map: HashMap<String, String>,
}

impl LemmaTable {
    pub fn from_pairs<I, S, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        LemmaTable { map: pairs.into_iter().map(|(s, l)| (s.into(), l.into())).collect() }
    }

    pub fn parse(text: &str, fold: CaseFold) -> Result<Self, AnalysisError> {
        let mut map = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let (surface, lemma) = line.split_once('\t').ok_or_else(|| AnalysisError::LemmaSyntax {
                line: i + 1,
                msg: "expected `surface<TAB>lemma`".into(),
            })?;
            let (surface, lemma) = (surface.trim(), lemma.trim());
            if surface.is_empty() || lemma.is_empty() {
                return Err(AnalysisError::LemmaSyntax { line: i + 1, msg: "empty column".into() });
            }
            map.insert(fold.fold(surface), fold.fold(lemma));
        }
        Ok(LemmaTable { map })
    }

    pub fn load(path: &Path, fold: CaseFold) -> Result<Self, AnalysisError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| AnalysisError::Resource { path: path.to_path_buf(), source })?;
        Self::parse(&text, fold)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, surface: &str) -> Option<&str> {
        self.map.get(surface).map(String::as_str)
    }

    /// Content digest over the sorted entries; feeds the analyzer fingerprint.
    pub fn digest(&self) -> [u8; 32] {
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort();
        let mut h = Sha256::new();
        for (s, l) in entries {
            h.update(s.as_bytes());
            h.update(b"\t");
            h.update(l.as_bytes());
            h.update(b"\n");
        }
        h.finalize().into()
    }
}

/// Table hit → lemma; miss → the word itself.
pub fn stem_lemma(word: &str, table: &LemmaTable) -> String {
    table.get(word).unwrap_or(word).to_string()
}
