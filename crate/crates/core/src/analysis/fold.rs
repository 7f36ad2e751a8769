use serde::{Deserialize, Serialize};

/// Case-folding rule set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseFold {
    /// Unicode lowercasing with the Turkish dotted/dotless i rules.
    #[default]
    Turkish,
    /// Only `A`-`Z` are lowercased; everything else is left alone.
    AsciiOnly,
}

impl CaseFold {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseFold::Turkish => "turkish",
            CaseFold::AsciiOnly => "ascii-only",
        }
    }

    pub fn fold(self, text: &str) -> String {
        match self {
            CaseFold::Turkish => turkish_fold(text),
            CaseFold::AsciiOnly => text.to_ascii_lowercase(),
        }
    }

    pub(crate) fn fold_into(self, c: char, out: &mut String) {
        match self {
            CaseFold::Turkish => push_turkish_lower(c, out),
            CaseFold::AsciiOnly => out.push(c.to_ascii_lowercase()),
        }
    }
}

impl std::str::FromStr for CaseFold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "turkish" => Ok(CaseFold::Turkish),
            "ascii-only" | "ascii" => Ok(CaseFold::AsciiOnly),
            other => Err(format!("unknown case-fold mode `{other}` (expected turkish|ascii-only)")),
        }
    }
}

#[inline]
fn push_turkish_lower(c: char, out: &mut String) {
    match c {
        'I' => out.push('ı'),
        'İ' => out.push('i'),
        c if c.is_ascii() => out.push(c.to_ascii_lowercase()),
        c => out.extend(c.to_lowercase()),
    }
}

/// Lowercase `text` using Turkish rules: `I` → `ı`, `İ` → `i`, every other
/// character through the standard Unicode lowercase mapping.
///
/// Idempotent: folding an already folded string returns it unchanged.
pub fn turkish_fold(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        push_turkish_lower(c, &mut out);
    }
    out
}
