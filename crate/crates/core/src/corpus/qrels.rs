use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;

use super::{CorpusError, Judgment};

/// Relevance judgments grouped by topic. Topics iterate in qid order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    by_topic: BTreeMap<String, HashMap<String, u32>>,
}

impl Qrels {
    pub fn from_judgments<I: IntoIterator<Item = Judgment>>(judgments: I) -> Self {
        let mut by_topic: BTreeMap<String, HashMap<String, u32>> = BTreeMap::new();
        for j in judgments {
            by_topic.entry(j.qid).or_default().insert(j.docno, j.relevance);
        }
        Qrels { by_topic }
    }

    /// Judgments for one topic (docno → relevance), if any.
    pub fn topic(&self, qid: &str) -> Option<&HashMap<String, u32>> {
        self.by_topic.get(qid)
    }

    pub fn qids(&self) -> impl Iterator<Item = &str> {
        self.by_topic.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.by_topic.values().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_topic.is_empty()
    }

    pub fn judgments(&self) -> impl Iterator<Item = Judgment> + '_ {
        self.by_topic
            .iter()
            .flat_map(|(q, m)| m.iter().map(move |(d, &r)| Judgment { qid: q.clone(), docno: d.clone(), relevance: r }))
    }
}

/// Parse a 4-column qrels stream (`qid iter docno rel`); the `iter` column
/// is ignored.
pub fn parse_qrels<R: BufRead>(reader: R) -> Result<Qrels, CorpusError> {
    let mut by_topic: BTreeMap<String, HashMap<String, u32>> = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        if cols.len() != 4 {
            return Err(CorpusError::Qrels { line: lineno, msg: format!("expected 4 columns, found {}", cols.len()) });
        }
        let relevance: u32 = cols[3].parse().map_err(|_| CorpusError::Qrels {
            line: lineno,
            msg: format!("relevance `{}` is not a non-negative integer", cols[3]),
        })?;
        let prev = by_topic.entry(cols[0].to_string()).or_default().insert(cols[2].to_string(), relevance);
        if prev.is_some() {
            return Err(CorpusError::Qrels {
                line: lineno,
                msg: format!("duplicate judgment for ({}, {})", cols[0], cols[2]),
            });
        }
    }
    Ok(Qrels { by_topic })
}
