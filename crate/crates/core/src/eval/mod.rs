//! bpref evaluation over TREC run files and qrels.

mod run;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::Qrels;
use crate::exec::{self, ExecMode};

pub use run::{format_run_line, parse_run, write_run, Run, RunEntry};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{}{msg}", line.map(|l| format!("run line {l}: ")).unwrap_or_default())]
    Run { line: Option<usize>, msg: String },
    #[error("topic {qid}: document {docno} appears twice in the ranking")]
    DuplicateDoc { qid: String, docno: String },
    #[error("no evaluable topics (every topic has zero judged-relevant documents)")]
    NoEvaluableTopics,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Denominator used for the nonrelevant-above penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BprefVariant {
    /// min(R, Nn), as computed by trec_eval.
    #[default]
    TrecEval,
    /// R.
    Original,
}

impl BprefVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            BprefVariant::TrecEval => "trec-eval",
            BprefVariant::Original => "original",
        }
    }
}

impl FromStr for BprefVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trec-eval" | "trec_eval" => Ok(BprefVariant::TrecEval),
            "original" => Ok(BprefVariant::Original),
            _ => Err(format!("unknown bpref variant `{s}` (expected trec-eval or original)")),
        }
    }
}

impl fmt::Display for BprefVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicEval {
    pub qid: String,
    /// `None` when the topic has no judged-relevant documents.
    pub bpref: Option<f64>,
    /// Judged relevant.
    pub r: usize,
    /// Judged nonrelevant.
    pub nn: usize,
}

/// bpref of one topic's ranking (docnos, best first) against its judgments.
/// Unjudged documents are skipped; relevant documents never retrieved
/// contribute 0.
pub fn bpref<S: AsRef<str>>(
    qid: &str,
    ranking: &[S],
    judgments: &HashMap<String, u32>,
    variant: BprefVariant,
) -> Result<TopicEval, EvalError> {
    let r = judgments.values().filter(|&&rel| rel >= 1).count();
    let nn = judgments.len() - r;
    let mut seen = HashSet::with_capacity(ranking.len());
    for d in ranking {
        if !seen.insert(d.as_ref()) {
            return Err(EvalError::DuplicateDoc { qid: qid.to_string(), docno: d.as_ref().to_string() });
        }
    }
    if r == 0 {
        return Ok(TopicEval { qid: qid.to_string(), bpref: None, r, nn });
    }
    let denom = match variant {
        BprefVariant::TrecEval => r.min(nn),
        BprefVariant::Original => r,
    } as f64;
    let mut nonrel_above = 0usize;
    let mut sum = 0.0;
    for d in ranking {
        match judgments.get(d.as_ref()) {
            None => {}
            Some(0) => nonrel_above += 1,
            Some(_) => {
                sum += if nn == 0 { 1.0 } else { 1.0 - nonrel_above.min(r) as f64 / denom };
            }
        }
    }
    Ok(TopicEval { qid: qid.to_string(), bpref: Some(sum / r as f64), r, nn })
}

/// Numeric qids compare numerically, anything else lexically.
pub fn qid_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Every topic seen in the run or the qrels, in qid order.
    pub topics: Vec<TopicEval>,
    /// Mean over evaluable topics.
    pub mean: f64,
    pub variant: BprefVariant,
}

impl EvalReport {
    pub fn evaluated(&self) -> impl Iterator<Item = &TopicEval> {
        self.topics.iter().filter(|t| t.bpref.is_some())
    }

    pub fn unevaluable(&self) -> impl Iterator<Item = &TopicEval> {
        self.topics.iter().filter(|t| t.bpref.is_none())
    }

    /// trec_eval-like text: one `bpref <qid> <value>` line per topic, then
    /// `bpref all <mean>`.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        for t in &self.topics {
            match t.bpref {
                Some(v) => writeln!(out, "bpref\t{}\t{v:.4}", t.qid)?,
                None => writeln!(out, "bpref\t{}\tunevaluable (no relevant judgments)", t.qid)?,
            }
        }
        writeln!(out, "bpref\tall\t{:.4}", self.mean)?;
        writeln!(out, "num_q\tall\t{}", self.evaluated().count())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["qid", "bpref", "R", "Nn"])?;
        for t in &self.topics {
            let b = t.bpref.map(|v| format!("{v:.4}")).unwrap_or_default();
            w.write_record([t.qid.as_str(), &b, &t.r.to_string(), &t.nn.to_string()])?;
        }
        w.write_record(["all", &format!("{:.4}", self.mean), "", ""])?;
        w.flush()
    }
}

/// Evaluate every topic of `run` and `qrels`. Judged topics absent from the
/// run score 0; topics without relevant judgments are unevaluable and left
/// out of the mean.
pub fn mean_bpref(run: &Run, qrels: &Qrels, variant: BprefVariant, mode: ExecMode) -> Result<EvalReport, EvalError> {
    let mut qids: Vec<&str> = run.qids().chain(qrels.qids()).collect::<BTreeSet<_>>().into_iter().collect();
    qids.sort_by(|a, b| qid_cmp(a, b));
    let empty = HashMap::new();
    let topics = exec::try_map(mode, &qids, |qid| {
        let ranking: Vec<&str> = run.topic(qid).unwrap_or(&[]).iter().map(|e| e.docno.as_str()).collect();
        bpref(qid, &ranking, qrels.topic(qid).unwrap_or(&empty), variant)
    })?;
    let values: Vec<f64> = topics.iter().filter_map(|t| t.bpref).collect();
    if values.is_empty() {
        return Err(EvalError::NoEvaluableTopics);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(EvalReport { topics, mean, variant })
}
