//! `TIR1` index file format.
//!
//! ```text
//! magic      "TIR1"
//! version    u32
//! header     u64 len | fingerprint[32] | u32 len, analyzer config (JSON)
//!                      | u64 num_docs | u64 total_terms | u64 vocab_size
//! doc table  u64 len | per doc:  u32 dl | u32 uniq | u32 len, docno
//! dictionary u64 len | per term: u32 len, term | u32 df | u64 cf | u64 first posting
//! postings   u64 len | per posting: u32 docid | u32 tf
//! trailer    u32 CRC-32 of every preceding byte
//! ```
//!
//! All integers little-endian. Dictionary entries are in term byte order,
//! and each term's postings are contiguous, so the file is a deterministic
//! function of the index.

use std::fs;
use std::path::Path;

use super::{DictionaryEntry, DocEntry, IndexError, InvertedIndex, Posting};
use crate::analysis::{AnalyzerConfig, Fingerprint};

pub const MAGIC: &[u8; 4] = b"TIR1";
pub const FORMAT_VERSION: u32 = 1;
const SECTIONS: usize = 4;

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

fn section(out: &mut Vec<u8>, body: Vec<u8>) {
    put_u64(out, body.len() as u64);
    out.extend_from_slice(&body);
}

impl InvertedIndex {
    /// Serialize to the `TIR1` byte layout.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        put_u32(&mut out, FORMAT_VERSION);

        let mut header = Vec::new();
        header.extend_from_slice(&self.fingerprint.0);
        let config = serde_json::to_string(&self.analyzer).expect("analyzer config serializes");
        put_str(&mut header, &config);
        put_u64(&mut header, self.stats.num_docs);
        put_u64(&mut header, self.stats.total_terms);
        put_u64(&mut header, self.stats.vocab_size);
        section(&mut out, header);

        let mut docs = Vec::new();
        for d in &self.docs {
            put_u32(&mut docs, d.dl);
            put_u32(&mut docs, d.uniq);
            put_str(&mut docs, &d.docno);
        }
        section(&mut out, docs);

        let mut dict = Vec::new();
        let mut postings = Vec::new();
        let mut next = 0u64;
        for e in &self.terms {
            put_str(&mut dict, &e.term);
            put_u32(&mut dict, e.df);
            put_u64(&mut dict, e.cf);
            put_u64(&mut dict, next);
            next += e.postings.len() as u64;
            for p in &e.postings {
                put_u32(&mut postings, p.docid);
                put_u32(&mut postings, p.tf);
            }
        }
        section(&mut out, dict);
        section(&mut out, postings);

        let crc = crc32fast::hash(&out);
        put_u32(&mut out, crc);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, IndexError> {
        if bytes.len() < 8 {
            return if MAGIC.starts_with(&bytes[..bytes.len().min(4)]) {
                Err(IndexError::Truncated)
            } else {
                Err(IndexError::Format("bad magic bytes".into()))
            };
        }
        if &bytes[..4] != MAGIC {
            return Err(IndexError::Format("bad magic bytes".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(IndexError::Version { found: version });
        }

        // Walk the section lengths first so truncation is told apart from
        // corruption.
        let mut pos = 8usize;
        let mut bodies = Vec::with_capacity(SECTIONS);
        for _ in 0..SECTIONS {
            let len_end = pos.checked_add(8).ok_or(IndexError::Truncated)?;
            if len_end > bytes.len() {
                return Err(IndexError::Truncated);
            }
            let len = u64::from_le_bytes(bytes[pos..len_end].try_into().unwrap());
            let end = usize::try_from(len).ok().and_then(|l| len_end.checked_add(l)).ok_or(IndexError::Truncated)?;
            if end > bytes.len() {
                return Err(IndexError::Truncated);
            }
            bodies.push(&bytes[len_end..end]);
            pos = end;
        }
        match bytes.len() - pos {
            0..=3 => return Err(IndexError::Truncated),
            4 => {}
            _ => return Err(IndexError::Format("trailing bytes after checksum".into())),
        }
        let stored = u32::from_le_bytes(bytes[pos..].try_into().unwrap());
        if crc32fast::hash(&bytes[..pos]) != stored {
            return Err(IndexError::Checksum);
        }
        decode(bodies[0], bodies[1], bodies[2], bodies[3])
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> Cursor<'a> {
    fn new(buf: &'a [u8], what: &'static str) -> Self {
        Cursor { buf, pos: 0, what }
    }

    fn bad(&self, msg: &str) -> IndexError {
        IndexError::Format(format!("{} section: {msg}", self.what))
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], IndexError> {
        if self.buf.len() - self.pos < n {
            return Err(self.bad("record overruns section"));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, IndexError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, IndexError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String, IndexError> {
        let n = self.u32()? as usize;
        let raw = self.take(n)?;
        String::from_utf8(raw.to_vec()).map_err(|_| self.bad("invalid UTF-8 string"))
    }

    fn done(&self) -> bool {
        self.pos == self.buf.len()
    }
}

fn decode(header: &[u8], docs: &[u8], dict: &[u8], postings: &[u8]) -> Result<InvertedIndex, IndexError> {
    let mut h = Cursor::new(header, "header");
    let fingerprint = Fingerprint(h.take(32)?.try_into().unwrap());
    let config_json = h.string()?;
    let analyzer: AnalyzerConfig =
        serde_json::from_str(&config_json).map_err(|e| h.bad(&format!("analyzer config: {e}")))?;
    let num_docs = h.u64()?;
    let total_terms = h.u64()?;
    let vocab_size = h.u64()?;
    if !h.done() {
        return Err(h.bad("unexpected trailing data"));
    }

    let mut d = Cursor::new(docs, "doc table");
    let mut table = Vec::with_capacity(num_docs.min(1 << 24) as usize);
    while !d.done() {
        let dl = d.u32()?;
        let uniq = d.u32()?;
        let docno = d.string()?;
        if uniq > dl {
            return Err(d.bad("uniq exceeds dl"));
        }
        table.push(DocEntry { docid: table.len() as u32, docno, dl, uniq });
    }
    if table.len() as u64 != num_docs {
        return Err(d.bad("document count does not match header"));
    }
    if table.iter().map(|e| e.dl as u64).sum::<u64>() != total_terms {
        return Err(d.bad("document lengths do not sum to total_terms"));
    }

    if !postings.len().is_multiple_of(8) {
        return Err(IndexError::Format("postings section length is not a multiple of 8".into()));
    }
    let all: Vec<Posting> = postings
        .chunks_exact(8)
        .map(|c| Posting {
            docid: u32::from_le_bytes(c[..4].try_into().unwrap()),
            tf: u32::from_le_bytes(c[4..].try_into().unwrap()),
        })
        .collect();

    let mut t = Cursor::new(dict, "dictionary");
    let mut terms: Vec<DictionaryEntry> = Vec::with_capacity(vocab_size.min(1 << 24) as usize);
    let mut expected_first = 0u64;
    while !t.done() {
        let term = t.string()?;
        let df = t.u32()?;
        let cf = t.u64()?;
        let first = t.u64()?;
        if first != expected_first {
            return Err(t.bad("postings are not contiguous"));
        }
        let end = first + df as u64;
        if df == 0 || end > all.len() as u64 {
            return Err(t.bad("posting range out of bounds"));
        }
        let list = all[first as usize..end as usize].to_vec();
        let ascending = list.windows(2).all(|w| w[0].docid < w[1].docid);
        if !ascending || list.last().is_some_and(|p| p.docid as u64 >= num_docs) {
            return Err(t.bad("posting docids out of order or range"));
        }
        if list.iter().map(|p| p.tf as u64).sum::<u64>() != cf || list.iter().any(|p| p.tf == 0) {
            return Err(t.bad("cf does not match postings"));
        }
        if terms.last().is_some_and(|prev| prev.term >= term) {
            return Err(t.bad("terms not in sorted order"));
        }
        terms.push(DictionaryEntry { term, df, cf, postings: list });
        expected_first = end;
    }
    if expected_first != all.len() as u64 || terms.len() as u64 != vocab_size {
        return Err(IndexError::Format("dictionary does not cover postings".into()));
    }

    Ok(InvertedIndex::from_parts(analyzer, fingerprint, table, terms, total_terms))
}

pub fn write_index(index: &InvertedIndex, path: &Path) -> Result<(), IndexError> {
    fs::write(path, index.to_bytes()).map_err(|source| IndexError::Io { path: path.to_path_buf(), source })
}

pub fn read_index(path: &Path) -> Result<InvertedIndex, IndexError> {
    let bytes = fs::read(path).map_err(|source| IndexError::Io { path: path.to_path_buf(), source })?;
    InvertedIndex::from_bytes(&bytes)
}
