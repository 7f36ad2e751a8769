use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead, Write};

use super::EvalError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunEntry {
    pub qid: String,
    pub docno: String,
    pub rank: u32,
    pub score: f64,
    pub tag: String,
}

/// A TREC run grouped by topic; each topic's entries are in rank order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Run {
    by_topic: BTreeMap<String, Vec<RunEntry>>,
}

impl Run {
    /// Group entries by topic and validate them: ranks within a topic must be
    /// exactly 1..n and docnos distinct.
    pub fn from_entries<I: IntoIterator<Item = RunEntry>>(entries: I) -> Result<Self, EvalError> {
        let mut by_topic: BTreeMap<String, Vec<RunEntry>> = BTreeMap::new();
        for e in entries {
            by_topic.entry(e.qid.clone()).or_default().push(e);
        }
        for (qid, list) in by_topic.iter_mut() {
            list.sort_by_key(|e| e.rank);
            check_topic(qid, list, None)?;
        }
        Ok(Run { by_topic })
    }

    pub fn topic(&self, qid: &str) -> Option<&[RunEntry]> {
        self.by_topic.get(qid).map(Vec::as_slice)
    }

    pub fn qids(&self) -> impl Iterator<Item = &str> {
        self.by_topic.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &RunEntry> {
        self.by_topic.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_topic.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_topic.is_empty()
    }
}

fn check_topic(qid: &str, list: &[RunEntry], lines: Option<&HashMap<(String, u32), usize>>) -> Result<(), EvalError> {
    let line_of = |e: &RunEntry| lines.and_then(|m| m.get(&(e.qid.clone(), e.rank)).copied());
    let mut seen = HashMap::with_capacity(list.len());
    for (i, e) in list.iter().enumerate() {
        if e.rank as usize != i + 1 {
            return Err(EvalError::Run {
                line: line_of(e),
                msg: format!(
                    "topic {qid}: ranks must be 1..n without gaps or duplicates (found rank {} at position {})",
                    e.rank,
                    i + 1
                ),
            });
        }
        if seen.insert(e.docno.as_str(), e.rank).is_some() {
            return Err(EvalError::Run {
                line: line_of(e),
                msg: format!("topic {qid}: document {} retrieved twice", e.docno),
            });
        }
    }
    Ok(())
}

/// Parse `qid Q0 docno rank score tag` lines.
pub fn parse_run<R: BufRead>(reader: R) -> Result<Run, EvalError> {
    let mut by_topic: BTreeMap<String, Vec<RunEntry>> = BTreeMap::new();
    let mut lines: HashMap<(String, u32), usize> = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(EvalError::Io)?;
        let lineno = i + 1;
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        let err = |msg: String| EvalError::Run { line: Some(lineno), msg };
        if cols.len() != 6 {
            return Err(err(format!("expected 6 columns, found {}", cols.len())));
        }
        let rank: u32 = cols[3].parse().map_err(|_| err(format!("rank `{}` is not a positive integer", cols[3])))?;
        if rank == 0 {
            return Err(err("rank must be >= 1".into()));
        }
        let score: f64 = cols[4].parse().map_err(|_| err(format!("score `{}` is not a number", cols[4])))?;
        let entry =
            RunEntry { qid: cols[0].to_string(), docno: cols[2].to_string(), rank, score, tag: cols[5].to_string() };
        if lines.insert((entry.qid.clone(), rank), lineno).is_some() {
            return Err(err(format!("topic {}: rank {rank} appears twice", entry.qid)));
        }
        by_topic.entry(entry.qid.clone()).or_default().push(entry);
    }
    for (qid, list) in by_topic.iter_mut() {
        list.sort_by_key(|e| e.rank);
        check_topic(qid, list, Some(&lines))?;
    }
    Ok(Run { by_topic })
}

/// One run line; scores carry 9 decimals so files are byte-reproducible.
pub fn format_run_line(qid: &str, docno: &str, rank: u32, score: f64, tag: &str) -> String {
    format!("{qid} Q0 {docno} {rank} {score:.9} {tag}")
}

pub fn write_run<W: Write>(mut out: W, run: &Run) -> io::Result<()> {
    for e in run.entries() {
        writeln!(out, "{}", format_run_line(&e.qid, &e.docno, e.rank, e.score, &e.tag))?;
    }
    Ok(())
}
