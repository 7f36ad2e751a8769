//! TREC collection parsers: documents, topics and relevance judgments.

mod docs;
mod qrels;
mod topics;

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use flate2::read::MultiGzDecoder;
use thiserror::Error;

pub use docs::{parse_trec_docs, TrecDocReader};
pub use qrels::{parse_qrels, Qrels};
pub use topics::parse_topics;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub docno: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topic {
    pub qid: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgment {
    pub qid: String,
    pub docno: String,
    /// 0 = judged nonrelevant, >= 1 = relevant.
    pub relevance: u32,
}

impl Judgment {
    pub fn is_relevant(&self) -> bool {
        self.relevance >= 1
    }
}

/// Character encoding of input files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    #[default]
    Utf8,
    /// ISO-8859-9 (Latin-5), common in older Turkish archives.
    Latin5,
}

impl Encoding {
    pub(crate) fn decode(self, bytes: &[u8]) -> Option<String> {
        match self {
            Encoding::Utf8 => std::str::from_utf8(bytes).ok().map(str::to_owned),
            Encoding::Latin5 => {
                let (text, _, _) = encoding_rs::WINDOWS_1254.decode(bytes);
                Some(text.into_owned())
            }
        }
    }
}

impl std::str::FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "utf-8" | "utf8" => Ok(Encoding::Utf8),
            "latin5" | "latin-5" | "iso-8859-9" => Ok(Encoding::Latin5),
            other => Err(format!("unknown encoding `{other}` (expected utf-8|latin5)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("read error: {0}")]
    Read(#[from] std::io::Error),
    #[error("malformed document at byte {offset}: {reason}")]
    MalformedDoc { offset: u64, reason: String },
    #[error("invalid UTF-8 in document at byte {offset}")]
    Encoding { offset: u64 },
    #[error("topics: {msg} (at {location})")]
    Topic { location: String, msg: String },
    #[error("duplicate topic id `{0}`")]
    DuplicateTopic(String),
    #[error("qrels line {line}: {msg}")]
    Qrels { line: usize, msg: String },
}

impl CorpusError {
    /// Byte offset of a per-document error, if any.
    pub fn offset(&self) -> Option<u64> {
        match self {
            CorpusError::MalformedDoc { offset, .. } | CorpusError::Encoding { offset } => Some(*offset),
            _ => None,
        }
    }
}

/// Open a file for reading, transparently decompressing gzip (detected by
/// the `1f 8b` magic bytes).
pub fn open_maybe_gzip(path: &Path) -> Result<Box<dyn BufRead + Send>, CorpusError> {
    let io_err = |source| CorpusError::Io { path: path.to_path_buf(), source };
    let file = File::open(path).map_err(io_err)?;
    let mut reader = BufReader::with_capacity(1 << 16, file);
    let is_gzip = reader.fill_buf().map_err(io_err)?.starts_with(&[0x1f, 0x8b]);
    if is_gzip {
        Ok(Box::new(BufReader::with_capacity(1 << 16, MultiGzDecoder::new(reader))))
    } else {
        Ok(Box::new(reader))
    }
}

/// Stream documents from a (possibly gzipped) TREC file.
pub fn open_trec_docs(path: &Path, encoding: Encoding) -> Result<TrecDocReader<Box<dyn BufRead + Send>>, CorpusError> {
    Ok(TrecDocReader::new(open_maybe_gzip(path)?, encoding))
}

fn read_text(path: &Path, encoding: Encoding) -> Result<String, CorpusError> {
    let mut bytes = Vec::new();
    open_maybe_gzip(path)?
        .read_to_end(&mut bytes)
        .map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    encoding.decode(&bytes).ok_or_else(|| CorpusError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, "invalid UTF-8"),
    })
}

pub fn read_topics(path: &Path, encoding: Encoding) -> Result<Vec<Topic>, CorpusError> {
    parse_topics(&read_text(path, encoding)?)
}

pub fn read_qrels(path: &Path) -> Result<Qrels, CorpusError> {
    parse_qrels(open_maybe_gzip(path)?)
}
