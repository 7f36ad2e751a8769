use std::fmt::Write as _;
use std::io::{self, Write};

use super::batch::run_batch;
use super::settings::apply_param;
use super::ExperimentError;
use crate::analysis::Analyzer;
use crate::corpus::{Qrels, Topic};
use crate::eval::{mean_bpref, BprefVariant};
use crate::exec::{self, ExecMode};
use crate::index::InvertedIndex;
use crate::ranking::Model;

/// One grid dimension: a parameter name and the values to try, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `v1,v2,...` or an inclusive range `start:end:step`.
    pub fn parse(param: &str, spec: &str) -> Result<Self, ExperimentError> {
        let bad = |msg: &str| ExperimentError::Config(format!("grid {param} = {spec}: {msg}"));
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{}` is not a number", s.trim())));
        let values = if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            let [start, end, step] = parts.as_slice() else { return Err(bad("range must be start:end:step")) };
            let (start, end, step) = (num(start)?, num(end)?, num(step)?);
            if step.is_nan() || step <= 0.0 || end < start {
                return Err(bad("range needs step > 0 and end >= start"));
            }
            let n = ((end - start) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10).collect()
        } else {
            spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err(bad("no values"));
        }
        Ok(Axis { param: param.to_string(), values })
    }

    /// `param=spec`.
    pub fn parse_assignment(s: &str) -> Result<Self, ExperimentError> {
        let (p, v) = s
            .split_once('=')
            .ok_or_else(|| ExperimentError::Config(format!("grid `{s}` must look like param=values")))?;
        Self::parse(p.trim(), v.trim())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Model,
    pub axes: Vec<Axis>,
}

pub type GridPoint = Vec<(String, f64)>;

impl SweepSpec {
    /// Cartesian product in declared order (last axis varies fastest).
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out: Vec<GridPoint> = vec![Vec::new()];
        for axis in &self.axes {
            out = out
                .into_iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push((axis.param.clone(), v));
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn model_at(&self, point: &GridPoint) -> Result<Model, ExperimentError> {
        let mut m = self.base;
        for (k, v) in point {
            apply_param(&mut m, k, *v)?;
        }
        m.validate()?;
        Ok(m)
    }

    /// Every axis non-empty and every point a valid model.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.axes.is_empty() {
            return Err(ExperimentError::Config("sweep needs at least one grid axis".into()));
        }
        if let Some(a) = self.axes.iter().find(|a| a.values.is_empty()) {
            return Err(ExperimentError::Config(format!("grid axis `{}` has no values", a.param)));
        }
        for p in self.points() {
            self.model_at(&p).map_err(|e| grid_error("", &p, e))?;
        }
        Ok(())
    }
}

/// A pre-built index for one stemming option.
#[derive(Clone, Copy)]
pub struct SweepCondition<'a> {
    pub label: &'a str,
    pub index: &'a InvertedIndex,
    pub analyzer: &'a Analyzer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub condition: String,
    pub model: Model,
    pub point: GridPoint,
    pub mean_bpref: f64,
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<String>,
    /// Condition order, then grid order.
    pub rows: Vec<SweepRow>,
}

fn describe(point: &GridPoint) -> String {
    point.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

fn grid_error(condition: &str, point: &GridPoint, e: ExperimentError) -> ExperimentError {
    let mut p = describe(point);
    if !condition.is_empty() {
        p = format!("{condition}: {p}");
    }
    ExperimentError::GridPoint { point: p, source: Box::new(e) }
}

/// bpref as reported (4 decimals); best-row selection uses this value so it
/// agrees with the emitted CSV.
pub fn reported(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}

/// Run every grid point against every condition. Points are independent and
/// run in parallel; rows come back in deterministic order and the best row
/// of each condition is flagged (ties go to the earlier point).
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    spec: &SweepSpec,
    conditions: &[SweepCondition<'_>],
    topics: &[Topic],
    qrels: &Qrels,
    k: usize,
    variant: BprefVariant,
    mode: ExecMode,
) -> Result<SweepResult, ExperimentError> {
    spec.validate()?;
    let points = spec.points();
    let tasks: Vec<(usize, usize)> =
        (0..conditions.len()).flat_map(|c| (0..points.len()).map(move |p| (c, p))).collect();
    let values = exec::try_map(mode, &tasks, |&(c, p)| {
        let cond = conditions[c];
        let point = &points[p];
        let run = || -> Result<(Model, f64), ExperimentError> {
            let model = spec.model_at(point)?;
            let out = run_batch(cond.index, cond.analyzer, topics, &model, k, "sweep", ExecMode::Sequential)?;
            let report = mean_bpref(&out.run, qrels, variant, ExecMode::Sequential)?;
            Ok((model, report.mean))
        };
        run().map_err(|e| grid_error(cond.label, point, e))
    })?;

    let mut rows: Vec<SweepRow> = tasks
        .iter()
        .zip(values)
        .map(|(&(c, p), (model, mean))| SweepRow {
            condition: conditions[c].label.to_string(),
            model,
            point: points[p].clone(),
            mean_bpref: mean,
            best: false,
        })
        .collect();
    for chunk in rows.chunks_mut(points.len().max(1)) {
        let mut best = 0;
        for (i, r) in chunk.iter().enumerate() {
            if reported(r.mean_bpref) > reported(chunk[best].mean_bpref) {
                best = i;
            }
        }
        if let Some(r) = chunk.get_mut(best) {
            r.best = true;
        }
    }
    Ok(SweepResult { axes: spec.axes.iter().map(|a| a.param.clone()).collect(), rows })
}

fn model_label(m: &Model) -> String {
    match m {
        Model::Lm(p) => format!("lm-{}", p.smoothing.name()),
        other => other.family().to_string(),
    }
}

impl SweepResult {
    /// `stemming,model,<axes…>,bpref,best` with bpref to 4 decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["stemming".to_string(), "model".to_string()];
        header.extend(self.axes.iter().cloned());
        header.extend(["bpref".to_string(), "best".to_string()]);
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.condition.clone(), model_label(&r.model)];
            rec.extend(r.point.iter().map(|(_, v)| v.to_string()));
            rec.push(format!("{:.4}", r.mean_bpref));
            rec.push(if r.best { "1".into() } else { "0".into() });
            w.write_record(&rec)?;
        }
        w.flush()
    }

    pub fn best_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.best)
    }

    /// Comparison table: one row per model, one column per stemming option,
    /// each cell `best bpref (= parameters)`.
    pub fn summary(&self) -> String {
        let best: Vec<&SweepRow> = self.best_rows().collect();
        let mut cols: Vec<&str> = Vec::new();
        for r in &best {
            if !cols.contains(&r.condition.as_str()) {
                cols.push(&r.condition);
            }
        }
        let cells: Vec<String> =
            best.iter().map(|r| format!("{:.4} (= {})", r.mean_bpref, describe(&r.point))).collect();
        let label = best.first().map(|r| model_label(&r.model)).unwrap_or_default();
        let width = cells.iter().map(String::len).chain(cols.iter().map(|c| c.len())).max().unwrap_or(0) + 2;
        let lw = label.len().max("model".len()) + 2;
        let mut s = String::new();
        let _ = write!(s, "{:<lw$}", "model");
        for c in &cols {
            let _ = write!(s, "{c:<width$}");
        }
        let _ = write!(s, "\n{label:<lw$}");
        for cell in &cells {
            let _ = write!(s, "{cell:<width$}");
        }
        s.push('\n');
        s.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::AnalyzerConfig;
    use crate::corpus::{Document, Judgment};
    use crate::ranking::LmParams;

    #[test]
    fn axis_parsing() {
        assert_eq!(Axis::parse("mu", "500,1000, 2000").unwrap().values, [500.0, 1000.0, 2000.0]);
        let b = Axis::parse("b", "0.1:1.0:0.1").unwrap().values;
        assert_eq!(b.len(), 10);
        assert_eq!(b[2], 0.3);
        assert_eq!(b[9], 1.0);
        assert!(Axis::parse("b", "").is_err());
        assert!(Axis::parse("b", "1:0:0.1").is_err());
        assert_eq!(Axis::parse_assignment("k1=1.2").unwrap(), Axis { param: "k1".into(), values: vec![1.2] });
    }

    #[test]
    fn grid_order_is_declared_order() {
        let spec = SweepSpec {
            base: Model::Bm25(Default::default()),
            axes: vec![
                Axis { param: "k1".into(), values: vec![1.0, 2.0] },
                Axis { param: "b".into(), values: vec![0.1, 0.2] },
            ],
        };
        let pts: Vec<String> = spec.points().iter().map(describe).collect();
        assert_eq!(pts, ["k1=1, b=0.1", "k1=1, b=0.2", "k1=2, b=0.1", "k1=2, b=0.2"]);
        let bad = SweepSpec {
            base: Model::Bm25(Default::default()),
            axes: vec![Axis { param: "mu".into(), values: vec![1.0] }],
        };
        assert!(matches!(bad.validate(), Err(ExperimentError::GridPoint { .. })));
    }

    fn small() -> (Analyzer, InvertedIndex, Vec<Topic>, Qrels) {
        let a = Analyzer::new(AnalyzerConfig::default()).unwrap();
        let docs = [("A", "kedi kedi"), ("B", "kedi köpek köpek köpek"), ("C", "köpek")]
            .map(|(n, t)| Document { docno: n.into(), text: t.into() });
        let idx = InvertedIndex::build(docs, &a, ExecMode::Sequential).unwrap();
        let topics = vec![Topic { qid: "1".into(), text: "kedi".into() }];
        let qrels = Qrels::from_judgments([("A", 1), ("B", 0)].map(|(d, r)| Judgment {
            qid: "1".into(),
            docno: d.into(),
            relevance: r,
        }));
        (a, idx, topics, qrels)
    }

    #[test]
    fn sweep_flags_earliest_best_and_is_self_consistent() {
        let (a, idx, topics, qrels) = small();
        let spec = SweepSpec {
            base: Model::Lm(LmParams::dirichlet(1.0)),
            axes: vec![Axis { param: "mu".into(), values: vec![500.0, 1000.0, 2000.0] }],
        };
        let conds = [SweepCondition { label: "none", index: &idx, analyzer: &a }];
        let res = sweep(&spec, &conds, &topics, &qrels, 10, BprefVariant::TrecEval, ExecMode::Parallel).unwrap();
        assert_eq!(res.rows.len(), 3);
        // every point ranks A above B → all tie at 1.0 → first is best
        assert!(res.rows.iter().all(|r| r.mean_bpref == 1.0));
        assert_eq!(res.best_rows().map(|r| r.point[0].1).collect::<Vec<_>>(), [500.0]);

        let mut csv = Vec::new();
        res.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert_eq!(csv.lines().next().unwrap(), "stemming,model,mu,bpref,best");
        assert_eq!(csv.lines().nth(1).unwrap(), "none,lm-dirichlet,500,1.0000,1");
        assert!(res.summary().contains("1.0000 (= mu=500)"));

        let single = SweepSpec { axes: vec![Axis { param: "mu".into(), values: vec![700.0] }], ..spec };
        let res = sweep(&single, &conds, &topics, &qrels, 10, BprefVariant::TrecEval, ExecMode::Sequential).unwrap();
        assert_eq!(res.rows.len(), 1);
        assert!(res.rows[0].best);
    }

    #[test]
    fn failing_point_is_identified() {
        let (a, idx, topics, qrels) = small();
        let spec = SweepSpec {
            base: Model::Lm(LmParams::dirichlet(1.0)),
            axes: vec![Axis { param: "mu".into(), values: vec![500.0, -1.0] }],
        };
        let conds = [SweepCondition { label: "none", index: &idx, analyzer: &a }];
        let err = sweep(&spec, &conds, &topics, &qrels, 10, BprefVariant::TrecEval, ExecMode::Sequential).unwrap_err();
        assert!(err.to_string().contains("mu=-1"), "{err}");
    }
}
