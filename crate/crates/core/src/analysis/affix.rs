//! Rule-based Turkish affix stripper.
//!
//! The suffix inventory (forms, vowel-harmony flag and buffer letter per
//! suffix class) is read from a versioned CSV rule file; the default table
//! ships in `data/turkish_affix_rules.v1.csv` and is compiled in. The
//! stripping order is fixed in code: nominal-verb (predicate) suffixes
//! first, then noun suffixes, then final-consonant restoration.
//!
//! Words are processed right to left over a `char` buffer. All saved
//! positions are offsets from the end of the buffer, so a deletion to the
//! left of a saved point keeps it valid.

use std::collections::HashMap;

use thiserror::Error;

const DEFAULT_RULES: &str = include_str!("../../data/turkish_affix_rules.v1.csv");

/// Rule-table format versions this build understands.
pub const SUPPORTED_RULES_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RulesError {
    #[error("rule file line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("rule file version {found} is not supported (expected {SUPPORTED_RULES_VERSION})")]
    Version { found: u32 },
    #[error("rule file has no version record")]
    MissingVersion,
    #[error("rule file does not define suffix class `{0}`")]
    MissingSuffix(&'static str),
    #[error("rule file: {0}")]
    Csv(#[from] csv::Error),
}

const VOWELS: &[char] = &['a', 'e', 'ı', 'i', 'o', 'ö', 'u', 'ü'];
const HIGH_VOWELS: &[char] = &['ı', 'i', 'u', 'ü'];

type CharPair = fn(char, char) -> bool;
type CharTest = fn(char) -> bool;

#[inline]
fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

/// Vowels allowed to precede a suffix whose last vowel is `v`.
fn harmony_class(v: char) -> &'static [char] {
    match v {
        'a' => &['a', 'o', 'u', 'ı'],
        'e' => &['e', 'i', 'ö', 'ü'],
        'ı' => &['a', 'ı'],
        'i' => &['e', 'i'],
        'o' | 'u' => &['o', 'u'],
        'ö' | 'ü' => &['ö', 'ü'],
        _ => &[],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Buffer {
    /// `n`, `s` or `y` between a vowel-final stem and the suffix.
    Consonant(char),
    /// An optional high vowel after a consonant-final stem.
    Vowel,
}

#[derive(Debug, Clone)]
struct SuffixClass {
    harmony: bool,
    buffer: Option<Buffer>,
    forms: Vec<Vec<char>>,
}

// Order matches `SUFFIX_NAMES`.
// Suffix classes keep the Snowball names.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy)]
enum Sfx {
    Possessive,
    SU,
    LArI,
    YU,
    NU,
    NUn,
    YA,
    NA,
    DA,
    NdA,
    DAn,
    NdAn,
    YlA,
    Ki,
    NcA,
    YUm,
    SUn,
    YUz,
    SUnUz,
    LAr,
    NUz,
    DUr,
    CAsInA,
    YDU,
    YsA,
    YmUs,
    Yken,
}

const SUFFIX_NAMES: [&str; 27] = [
    "possessive",
    "sU",
    "lArI",
    "yU",
    "nU",
    "nUn",
    "yA",
    "nA",
    "DA",
    "ndA",
    "DAn",
    "ndAn",
    "ylA",
    "ki",
    "ncA",
    "yUm",
    "sUn",
    "yUz",
    "sUnUz",
    "lAr",
    "nUz",
    "DUr",
    "cAsInA",
    "yDU",
    "ysA",
    "ymUs",
    "yken",
];

/// Parsed affix rule table.
#[derive(Debug, Clone)]
pub struct AffixRules {
    version: u32,
    classes: Vec<SuffixClass>,
    finals: Vec<(char, char)>,
    reserved: Vec<Vec<char>>,
}

impl AffixRules {
    /// Parse a rule file (see the header of the bundled table for the schema).
    pub fn parse(text: &str) -> Result<Self, RulesError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());

        let mut version = None;
        let mut by_name: HashMap<String, SuffixClass> = HashMap::new();
        let mut finals = Vec::new();
        let mut reserved = Vec::new();

        for record in reader.records() {
            let record = record?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            let syntax = |msg: &str| RulesError::Syntax { line, msg: msg.to_string() };
            let fields: Vec<&str> = record.iter().collect();
            match fields.first().copied() {
                Some("version") => {
                    let v = fields
                        .get(1)
                        .and_then(|v| v.parse::<u32>().ok())
                        .ok_or_else(|| syntax("version record needs an integer"))?;
                    if v != SUPPORTED_RULES_VERSION {
                        return Err(RulesError::Version { found: v });
                    }
                    version = Some(v);
                }
                Some("suffix") => {
                    if fields.len() != 5 {
                        return Err(syntax("suffix record needs 5 fields"));
                    }
                    let harmony = match fields[2] {
                        "check" => true,
                        "none" => false,
                        _ => return Err(syntax("harmony must be `check` or `none`")),
                    };
                    let buffer = match fields[3] {
                        "-" => None,
                        "U" => Some(Buffer::Vowel),
                        b @ ("n" | "s" | "y") => Some(Buffer::Consonant(b.chars().next().unwrap())),
                        _ => return Err(syntax("buffer must be one of - n s y U")),
                    };
                    let forms: Vec<Vec<char>> = fields[4].split('|').map(|f| f.chars().collect::<Vec<_>>()).collect();
                    if forms.iter().any(Vec::is_empty) {
                        return Err(syntax("empty suffix form"));
                    }
                    by_name.insert(fields[1].to_string(), SuffixClass { harmony, buffer, forms });
                }
                Some("final") => {
                    let one = |i: usize| {
                        let mut cs = fields.get(i).map(|f| f.chars()).into_iter().flatten();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) => Ok(c),
                            _ => Err(syntax("final record needs two single letters")),
                        }
                    };
                    finals.push((one(1)?, one(2)?));
                }
                Some("reserved") => {
                    let w = fields.get(1).ok_or_else(|| syntax("reserved record needs a word"))?;
                    reserved.push(w.chars().collect());
                }
                Some("") | None => {}
                Some(other) => return Err(RulesError::Syntax { line, msg: format!("unknown record kind `{other}`") }),
            }
        }

        let version = version.ok_or(RulesError::MissingVersion)?;
        let mut classes = Vec::with_capacity(SUFFIX_NAMES.len());
        for name in SUFFIX_NAMES {
            classes.push(by_name.remove(name).ok_or(RulesError::MissingSuffix(name))?);
        }
        Ok(AffixRules { version, classes, finals, reserved })
    }

    pub fn version(&self) -> u32 {
        self.version
    }
}

impl Default for AffixRules {
    fn default() -> Self {
        AffixRules::parse(DEFAULT_RULES).expect("bundled affix rules are valid")
    }
}

/// Turkish affix stemmer.
#[derive(Debug, Clone, Default)]
pub struct AffixStemmer {
    rules: AffixRules,
}

impl AffixStemmer {
    pub fn new(rules: AffixRules) -> Self {
        AffixStemmer { rules }
    }

    pub fn rules(&self) -> &AffixRules {
        &self.rules
    }

    /// Stem one folded word.
    ///
    /// Words with fewer than two vowels are returned unchanged. A stem ending
    /// in `d` or `g` gets a harmonising vowel appended, so the output can be
    /// one character longer than the input; heavily suffixed pseudo-words may
    /// be stripped to the empty string.
    pub fn stem(&self, word: &str) -> String {
        let mut m = Machine::new(&self.rules, word);
        m.run();
        m.buf.into_iter().collect()
    }
}

/// Stem a folded word with the bundled rule table.
pub fn stem_affix(word: &str) -> String {
    thread_local! {
        static DEFAULT: AffixStemmer = AffixStemmer::default();
    }
    DEFAULT.with(|s| s.stem(word))
}

struct Machine<'r> {
    rules: &'r AffixRules,
    buf: Vec<char>,
    cursor: usize,
    limit: usize,
    limit_backward: usize,
    bra: usize,
    ket: usize,
    continue_noun: bool,
}

impl<'r> Machine<'r> {
    fn new(rules: &'r AffixRules, word: &str) -> Self {
        let buf: Vec<char> = word.chars().collect();
        let limit = buf.len();
        Machine { rules, buf, cursor: 0, limit, limit_backward: 0, bra: 0, ket: limit, continue_noun: false }
    }

    #[inline]
    fn save(&self) -> usize {
        self.limit - self.cursor
    }

    #[inline]
    fn restore(&mut self, v: usize) {
        self.cursor = self.limit - v;
    }

    #[inline]
    fn prev(&self, back: usize) -> Option<char> {
        if self.cursor >= self.limit_backward + back {
            Some(self.buf[self.cursor - back])
        } else {
            None
        }
    }

    fn eq_b(&mut self, s: &[char]) -> bool {
        if self.cursor - self.limit_backward < s.len() {
            return false;
        }
        if &self.buf[self.cursor - s.len()..self.cursor] != s {
            return false;
        }
        self.cursor -= s.len();
        true
    }

    /// Remove `buf[bra..ket]`.
    fn del(&mut self) {
        let (bra, ket) = (self.bra, self.ket);
        if bra > ket || ket > self.limit {
            return;
        }
        self.replace(bra, ket, &[]);
    }

    fn replace(&mut self, bra: usize, ket: usize, with: &[char]) -> isize {
        let adjustment = with.len() as isize - (ket - bra) as isize;
        self.buf.splice(bra..ket, with.iter().copied());
        self.limit = (self.limit as isize + adjustment) as usize;
        if self.cursor >= ket {
            self.cursor = (self.cursor as isize + adjustment) as usize;
        } else if self.cursor > bra {
            self.cursor = bra;
        }
        adjustment
    }

    fn check_vowel_harmony(&self) -> bool {
        let lb = self.limit_backward;
        let mut c = self.cursor;
        while c > lb && !is_vowel(self.buf[c - 1]) {
            c -= 1;
        }
        if c == lb {
            return false;
        }
        let class = harmony_class(self.buf[c - 1]);
        c -= 1;
        while c > lb {
            if class.contains(&self.buf[c - 1]) {
                return true;
            }
            c -= 1;
        }
        false
    }

    /// Buffer test after a suffix form has been consumed. Either the buffer
    /// letter is present (and consumed) or absent; in both cases the letter
    /// two places back must be a vowel for consonant buffers and a non-vowel
    /// for the vowel buffer.
    fn optional_buffer(&mut self, buffer: Buffer) -> bool {
        let (is_buffer, before_ok): (CharPair, CharTest) = match buffer {
            Buffer::Consonant(_) => (|c, b| c == b, is_vowel),
            Buffer::Vowel => (|c, _| HIGH_VOWELS.contains(&c), |c| !is_vowel(c)),
        };
        let letter = match buffer {
            Buffer::Consonant(b) => b,
            Buffer::Vowel => '\0',
        };
        let last = match self.prev(1) {
            Some(c) => c,
            None => return false,
        };
        if is_buffer(last, letter) {
            return match self.prev(2) {
                Some(c) if before_ok(c) => {
                    self.cursor -= 1;
                    true
                }
                _ => false,
            };
        }
        matches!(self.prev(2), Some(c) if before_ok(c))
    }

    /// Try to consume one suffix of class `s`; the cursor is unchanged on
    /// failure.
    fn m(&mut self, s: Sfx) -> bool {
        let rules = self.rules;
        let class = &rules.classes[s as usize];
        let v = self.save();
        if class.harmony && !self.check_vowel_harmony() {
            return false;
        }
        // Forms within a class never end one another, so at most one matches.
        if !class.forms.iter().any(|f| self.eq_b(f)) {
            self.restore(v);
            return false;
        }
        if let Some(b) = class.buffer {
            if !self.optional_buffer(b) {
                self.restore(v);
                return false;
            }
        }
        true
    }

    fn slice_here(&mut self) {
        self.bra = self.cursor;
        self.del();
    }

    fn run(&mut self) {
        if self.buf.iter().filter(|&&c| is_vowel(c)).count() < 2 {
            return;
        }
        self.limit_backward = 0;
        self.cursor = self.limit;

        let v = self.save();
        self.nominal_verb_suffixes();
        self.restore(v);
        if !self.continue_noun {
            return;
        }
        let v = self.save();
        self.noun_suffixes();
        self.restore(v);
        self.cursor = self.limit_backward;
        self.postlude();
    }

    // try([lAr] delete chain_before_ki)
    fn opt_lar_chain(&mut self) {
        let v = self.save();
        self.ket = self.cursor;
        if !self.m(Sfx::LAr) {
            self.restore(v);
            return;
        }
        self.slice_here();
        if !self.chain_before_ki() {
            self.restore(v);
        }
    }

    fn poss_or_su(&mut self) -> bool {
        self.m(Sfx::Possessive) || self.m(Sfx::SU)
    }

    fn nominal_verb_suffixes(&mut self) -> bool {
        use Sfx::*;
        self.ket = self.cursor;
        self.continue_noun = true;
        let v1 = self.save();
        let matched = 'alts: {
            if self.m(YmUs) || self.m(YDU) || self.m(YsA) || self.m(Yken) {
                break 'alts true;
            }
            self.restore(v1);
            if self.m(CAsInA) {
                let _ = self.m(SUnUz) || self.m(LAr) || self.m(YUm) || self.m(SUn) || self.m(YUz);
                if self.m(YmUs) {
                    break 'alts true;
                }
            }
            self.restore(v1);
            if self.m(LAr) {
                self.slice_here();
                let v = self.save();
                self.ket = self.cursor;
                if !(self.m(DUr) || self.m(YDU) || self.m(YsA) || self.m(YmUs)) {
                    self.restore(v);
                }
                self.continue_noun = false;
                break 'alts true;
            }
            self.restore(v1);
            if self.m(NUz) && (self.m(YDU) || self.m(YsA)) {
                break 'alts true;
            }
            self.restore(v1);
            if self.m(SUnUz) || self.m(YUz) || self.m(SUn) || self.m(YUm) {
                self.slice_here();
                let v = self.save();
                self.ket = self.cursor;
                if !self.m(YmUs) {
                    self.restore(v);
                }
                break 'alts true;
            }
            self.restore(v1);
            if !self.m(DUr) {
                break 'alts false;
            }
            self.slice_here();
            let v = self.save();
            self.ket = self.cursor;
            let _ = self.m(SUnUz) || self.m(LAr) || self.m(YUm) || self.m(SUn) || self.m(YUz);
            if !self.m(YmUs) {
                self.restore(v);
            }
            true
        };
        if !matched {
            return false;
        }
        self.slice_here();
        true
    }

    fn chain_before_ki(&mut self) -> bool {
        use Sfx::*;
        self.ket = self.cursor;
        if !self.m(Ki) {
            return false;
        }
        let v1 = self.save();

        if self.m(DA) {
            self.slice_here();
            let v2 = self.save();
            self.ket = self.cursor;
            if self.m(LAr) {
                self.slice_here();
                let v = self.save();
                if !self.chain_before_ki() {
                    self.restore(v);
                }
            } else if self.m(Possessive) {
                self.slice_here();
                self.opt_lar_chain();
            } else {
                self.restore(v2);
            }
            return true;
        }
        self.restore(v1);

        if self.m(NUn) {
            self.slice_here();
            let v6 = self.save();
            self.ket = self.cursor;
            let v7 = self.save();
            if self.m(LArI) {
                self.slice_here();
                return true;
            }
            self.restore(v7);
            self.ket = self.cursor;
            if self.poss_or_su() {
                self.slice_here();
                self.opt_lar_chain();
                return true;
            }
            self.restore(v7);
            if !self.chain_before_ki() {
                self.restore(v6);
            }
            return true;
        }
        self.restore(v1);

        // ndA: deletions here reach back to the `ki` boundary.
        if !self.m(NdA) {
            return false;
        }
        let v = self.save();
        if self.m(LArI) {
            self.slice_here();
            return true;
        }
        self.restore(v);
        if self.m(SU) {
            self.slice_here();
            self.opt_lar_chain();
            return true;
        }
        self.restore(v);
        self.chain_before_ki()
    }

    fn noun_suffixes(&mut self) -> bool {
        use Sfx::*;
        let v1 = self.save();

        self.ket = self.cursor;
        if self.m(LAr) {
            self.slice_here();
            let v = self.save();
            if !self.chain_before_ki() {
                self.restore(v);
            }
            return true;
        }
        self.restore(v1);

        self.ket = self.cursor;
        if self.m(NcA) {
            self.slice_here();
            let v3 = self.save();
            self.ket = self.cursor;
            if self.m(LArI) {
                self.slice_here();
                return true;
            }
            self.restore(v3);
            self.ket = self.cursor;
            if self.poss_or_su() {
                self.slice_here();
                self.opt_lar_chain();
                return true;
            }
            self.restore(v3);
            self.ket = self.cursor;
            if !self.m(LAr) {
                self.restore(v3);
                return true;
            }
            self.slice_here();
            if !self.chain_before_ki() {
                self.restore(v3);
            }
            return true;
        }
        self.restore(v1);

        self.ket = self.cursor;
        if self.m(NdA) || self.m(NA) {
            let v = self.save();
            if self.m(LArI) {
                self.slice_here();
                return true;
            }
            self.restore(v);
            if self.m(SU) {
                self.slice_here();
                self.opt_lar_chain();
                return true;
            }
            self.restore(v);
            if self.chain_before_ki() {
                return true;
            }
        }
        self.restore(v1);

        self.ket = self.cursor;
        if self.m(NdAn) || self.m(NU) {
            let v = self.save();
            if self.m(SU) {
                self.slice_here();
                self.opt_lar_chain();
                return true;
            }
            self.restore(v);
            // Matched but deliberately not deleted.
            if self.m(LArI) {
                return true;
            }
        }
        self.restore(v1);

        self.ket = self.cursor;
        if self.m(DAn) {
            self.slice_here();
            let v13 = self.save();
            self.ket = self.cursor;
            let v14 = self.save();
            if self.m(Possessive) {
                self.slice_here();
                self.opt_lar_chain();
                return true;
            }
            self.restore(v14);
            if self.m(LAr) {
                self.slice_here();
                let v = self.save();
                if !self.chain_before_ki() {
                    self.restore(v);
                }
                return true;
            }
            self.restore(v14);
            if !self.chain_before_ki() {
                self.restore(v13);
            }
            return true;
        }
        self.restore(v1);

        self.ket = self.cursor;
        if self.m(NUn) || self.m(YlA) {
            self.slice_here();
            let v18 = self.save();
            let v19 = self.save();
            self.ket = self.cursor;
            if self.m(LAr) {
                self.slice_here();
                if self.chain_before_ki() {
                    return true;
                }
            }
            // The lAr deletion above (if any) is kept.
            self.restore(v19);
            self.ket = self.cursor;
            if self.poss_or_su() {
                self.slice_here();
                self.opt_lar_chain();
                return true;
            }
            self.restore(v19);
            if !self.chain_before_ki() {
                self.restore(v18);
            }
            return true;
        }
        self.restore(v1);

        self.ket = self.cursor;
        if self.m(LArI) {
            self.slice_here();
            return true;
        }
        self.restore(v1);

        if self.chain_before_ki() {
            return true;
        }
        self.restore(v1);

        self.ket = self.cursor;
        if self.m(DA) || self.m(YU) || self.m(YA) {
            self.slice_here();
            let v23 = self.save();
            self.ket = self.cursor;
            let v24 = self.save();
            let ok = if self.m(Possessive) {
                self.slice_here();
                let v = self.save();
                self.ket = self.cursor;
                if !self.m(LAr) {
                    self.restore(v);
                }
                true
            } else {
                self.restore(v24);
                self.m(LAr)
            };
            if !ok {
                self.restore(v23);
                return true;
            }
            self.slice_here();
            self.ket = self.cursor;
            if !self.chain_before_ki() {
                self.restore(v23);
            }
            return true;
        }
        self.restore(v1);

        self.ket = self.cursor;
        if !self.poss_or_su() {
            return false;
        }
        self.slice_here();
        self.opt_lar_chain();
        true
    }

    fn postlude(&mut self) {
        self.limit_backward = self.cursor;
        self.cursor = self.limit;
        let rules = self.rules;
        let word = &self.buf[self.limit_backward..self.limit];
        if rules.reserved.iter().any(|r| r.as_slice() == word) {
            return;
        }
        self.append_vowel_after_d_or_g();
        self.cursor = self.limit;
        self.restore_final_consonant();
    }

    fn append_vowel_after_d_or_g(&mut self) {
        if !matches!(self.prev(1), Some('d' | 'g')) {
            return;
        }
        let last_vowel = self.buf[self.limit_backward..self.cursor].iter().rev().copied().find(|&c| is_vowel(c));
        let add = match last_vowel {
            Some('a' | 'ı') => 'ı',
            Some('e' | 'i') => 'i',
            Some('o' | 'u') => 'u',
            Some('ö' | 'ü') => 'ü',
            _ => return,
        };
        let at = self.cursor;
        let adjustment = self.replace(at, at, &[add]);
        if at <= self.bra {
            self.bra = (self.bra as isize + adjustment) as usize;
        }
        if at <= self.ket {
            self.ket = (self.ket as isize + adjustment) as usize;
        }
        self.cursor = at;
    }

    fn restore_final_consonant(&mut self) {
        let Some(last) = self.prev(1) else { return };
        let rules = self.rules;
        if let Some(&(_, to)) = rules.finals.iter().find(|(from, _)| *from == last) {
            let at = self.cursor;
            self.ket = at;
            self.bra = at - 1;
            self.replace(at - 1, at, &[to]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(stem_affix("ev"), "ev");
        assert_eq!(stem_affix("kapılar"), "kapı");
        assert_eq!(stem_affix("evde"), "ev");
    }

    #[test]
    fn consonant_restoration_and_reserved_words() {
        assert_eq!(stem_affix("kitabı"), "kitap");
        assert_eq!(stem_affix("ağaçlar"), "ağaç");
        assert_eq!(stem_affix("soyadı"), "soyad");
        assert_eq!(stem_affix("adı"), "ad");
    }

    #[test]
    fn d_or_g_final_stems_gain_a_vowel() {
        assert_eq!(stem_affix("ahmed"), "ahmedi");
        assert_eq!(stem_affix("umud"), "umudu");
    }

    #[test]
    fn single_syllable_untouched() {
        for w in ["ev", "at", "kar", "a", "süt"] {
            assert_eq!(stem_affix(w), w);
        }
    }

    #[test]
    fn bundled_rules_parse() {
        let r = AffixRules::default();
        assert_eq!(r.version(), 1);
        assert_eq!(r.classes.len(), SUFFIX_NAMES.len());
        assert_eq!(r.finals.len(), 4);
    }

    #[test]
    fn rejects_unknown_version() {
        let text = DEFAULT_RULES.replace("version,1", "version,2");
        assert!(matches!(AffixRules::parse(&text), Err(RulesError::Version { found: 2 })));
    }

    #[test]
    fn rejects_missing_class() {
        let text: String =
            DEFAULT_RULES.lines().filter(|l| !l.starts_with("suffix,yken")).map(|l| format!("{l}\n")).collect();
        assert!(matches!(AffixRules::parse(&text), Err(RulesError::MissingSuffix("yken"))));
    }

    #[test]
    fn rejects_bad_buffer() {
        let text = DEFAULT_RULES.replace("suffix,yken,none,y,ken", "suffix,yken,none,q,ken");
        assert!(matches!(AffixRules::parse(&text), Err(RulesError::Syntax { .. })));
    }
}
