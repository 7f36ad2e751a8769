//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails.

mod common;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus_with, random_corpus, random_query, Oracle, OracleModel};
use tirkit::analysis::{stem_affix, Analyzer, AnalyzerConfig, StemmerKind};
use tirkit::corpus::{read_qrels, read_topics, Encoding};
use tirkit::eval::{bpref, mean_bpref, BprefVariant};
use tirkit::experiment::{index_files, run_batch};
use tirkit::index::InvertedIndex;
use tirkit::ranking::{
    lm_alpha, lm_score, lm_smoothed_prob, preset, rank, Bm25Params, LmParams, Model, QueryVector, Smoothing,
    TfIdfParams, PRESETS,
};
use tirkit::ExecMode;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn plain_analyzer() -> Analyzer {
    Analyzer::new(AnalyzerConfig::default()).unwrap()
}

fn build(docs: Vec<tirkit::corpus::Document>, a: &Analyzer) -> InvertedIndex {
    InvertedIndex::build(docs, a, ExecMode::default()).unwrap()
}

fn to_oracle(m: &Model) -> OracleModel {
    match *m {
        Model::TfIdf(p) => OracleModel::TfIdf { k1: p.k1, k3: p.k3, b: p.b },
        Model::Bm25(p) => OracleModel::Bm25 { k1: p.k1, k3: p.k3, b: p.b, clamp: p.clamp_negative_idf },
        Model::Lm(LmParams { smoothing }) => match smoothing {
            Smoothing::JelinekMercer { lambda } => OracleModel::Jm { lambda },
            Smoothing::Dirichlet { mu } => OracleModel::Dirichlet { mu },
            Smoothing::AbsoluteDiscount { delta } => OracleModel::AbsDiscount { delta },
        },
    }
}

fn model_grid() -> Vec<Model> {
    vec![
        Model::TfIdf(TfIdfParams { k1: 1.0, k3: 1000.0, b: 0.2 }),
        Model::TfIdf(TfIdfParams { k1: 1.0, k3: 1000.0, b: 0.4 }),
        Model::TfIdf(TfIdfParams { k1: 1.8, k3: 7.0, b: 1.0 }),
        Model::Bm25(Bm25Params { k1: 1.4, k3: 1000.0, b: 0.1, clamp_negative_idf: true }),
        Model::Bm25(Bm25Params { k1: 1.0, k3: 1000.0, b: 0.75, clamp_negative_idf: true }),
        Model::Bm25(Bm25Params { k1: 2.0, k3: 0.0, b: 1.0, clamp_negative_idf: false }),
        Model::Lm(LmParams::jelinek_mercer(0.3)),
        Model::Lm(LmParams::dirichlet(500.0)),
        Model::Lm(LmParams::absolute_discount(0.7)),
    ]
}

fn oracle_ranking_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = plain_analyzer();
    let models = model_grid();
    let mut comparisons = 0usize;
    for c in 0..50 {
        let corpus = random_corpus(&mut rng);
        let oracle = Oracle::new(&corpus.docs);
        let index = build(corpus.docs, &a);
        for _ in 0..10 {
            let text = random_query(&mut rng, &corpus.vocab);
            let k = if rng.gen_bool(0.5) { 10 } else { 1000 };
            let q = QueryVector::analyze(&text, &a);
            for m in &models {
                let expected = oracle.rank(&text, to_oracle(m), k);
                let got = match rank(&q, &index, m, k) {
                    Ok(r) => r.docs,
                    Err(tirkit::ranking::RankingError::EmptyEffectiveQuery) if expected.is_empty() => Vec::new(),
                    Err(e) => return Err(format!("corpus {c}, {m}, query `{text}`: {e}")),
                };
                ensure(got.len() == expected.len(), || {
                    format!("corpus {c}, {m}, query `{text}`: {} results, oracle {}", got.len(), expected.len())
                })?;
                // Exact ties between documents with different statistics can
                // round apart by an ulp in either implementation; a position is
                // right if its document's oracle score equals the oracle's
                // score there, and ties the library sees are broken by docno.
                let all: HashMap<String, f64> = oracle.rank(&text, to_oracle(m), usize::MAX).into_iter().collect();
                for (i, (g, (docno, s))) in got.iter().zip(&expected).enumerate() {
                    let truth = all.get(&g.docno).copied().unwrap_or(f64::NAN);
                    let tie_ok = i == 0 || got[i - 1].score != g.score || got[i - 1].docno < g.docno;
                    ensure(
                        tie_ok && (truth - s).abs() < 1e-12 * s.abs().max(1.0) && (g.score - s).abs() < 1e-9,
                        || {
                            format!(
                                "corpus {c}, {m}, query `{text}`, position {i}: got {} {:.12}, oracle {docno} {s:.12}",
                                g.docno, g.score
                            )
                        },
                    )?;
                }
                comparisons += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?} (limit 60 s)"))?;
    Ok(format!("50 corpora, {comparisons} ranked lists identical to exhaustive scoring in {elapsed:.2?}"))
}

fn smoothing_normalization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = plain_analyzer();
    let params = [LmParams::jelinek_mercer(0.4), LmParams::dirichlet(500.0), LmParams::absolute_discount(0.7)];
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    while checked < 100 {
        let vocab = rng.gen_range(20..=300);
        let corpus = corpus_with(&mut rng, 30, vocab, 80);
        let index = build(corpus.docs, &a);
        let total = index.stats().total_terms as f64;
        for doc in index.docs().iter().filter(|d| d.dl > 0).take(10) {
            if checked == 100 {
                break;
            }
            // tf of every vocabulary term in this document
            let mut tf: HashMap<&str, u64> = HashMap::new();
            for e in index.terms() {
                if let Ok(i) = e.postings.binary_search_by_key(&doc.docid, |p| p.docid) {
                    tf.insert(e.term.as_str(), e.postings[i].tf as u64);
                }
            }
            for p in &params {
                let alpha = lm_alpha(doc.dl as u64, doc.uniq as u64, p).unwrap();
                let sum: f64 = index
                    .terms()
                    .iter()
                    .map(|e| {
                        let pc = e.cf as f64 / total;
                        match tf.get(e.term.as_str()) {
                            Some(&t) => lm_smoothed_prob(t, doc.dl as u64, doc.uniq as u64, pc, p).unwrap(),
                            None => alpha * pc,
                        }
                    })
                    .sum();
                worst = worst.max((sum - 1.0).abs());
                ensure((sum - 1.0).abs() < 1e-9, || {
                    format!("doc {} under {:?}: Σ p_s = {sum:.15}", doc.docno, p.smoothing)
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("100 documents × 3 smoothing methods sum to 1 (max |Δ| = {worst:.1e})"))
}

fn lm_form_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = plain_analyzer();
    let params = [LmParams::jelinek_mercer(0.3), LmParams::dirichlet(500.0), LmParams::absolute_discount(0.7)];
    let mut worst: f64 = 0.0;
    for c in 0..20 {
        let corpus = random_corpus(&mut rng);
        let oracle = Oracle::new(&corpus.docs);
        let index = build(corpus.docs, &a);
        for _ in 0..5 {
            let text = random_query(&mut rng, &corpus.vocab);
            let q = QueryVector::analyze(&text, &a);
            if q.terms().iter().all(|(t, _)| index.lookup(t).is_none()) {
                // no query term occurs in the collection: both forms are undefined
                continue;
            }
            for p in &params {
                let om = to_oracle(&Model::Lm(*p));
                let diffs: Vec<f64> = (0..index.num_docs())
                    .filter(|&i| index.doc(i as u32).dl > 0)
                    .map(|i| lm_score(&q, i as u32, &index, p).unwrap() - oracle.direct_lm(i, &text, om))
                    .collect();
                let (lo, hi) = diffs.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &d| (lo.min(d), hi.max(d)));
                let spread = if diffs.is_empty() { 0.0 } else { hi - lo };
                worst = worst.max(spread);
                ensure(spread < 1e-9, || format!("corpus {c}, {:?}, query `{text}`: spread {spread:e}", p.smoothing))?;
            }
        }
    }
    Ok(format!("20 corpora: efficient − direct score constant per query (max spread {worst:.1e})"))
}

fn bpref_correctness() -> Check {
    // (ranking, judgments "docno:rel", trec_eval value, original value)
    #[allow(clippy::type_complexity)]
    let cases: &[(&[&str], &[(&str, u32)], f64, f64)] = &[
        // R=2, Nn=2: one nonrel above both relevant
        (&["N1", "R1", "R2"], &[("R1", 1), ("R2", 1), ("N1", 0), ("N2", 0)], 0.5, 0.5),
        // all relevant first
        (&["R1", "R2", "N1", "N2"], &[("R1", 1), ("R2", 1), ("N1", 0), ("N2", 0)], 1.0, 1.0),
        // R=2 > Nn=1, nonrel first: min(1,2)/min(2,1) = 1 → 0; original 1 − 1/2
        (&["N1", "R1", "R2"], &[("R1", 1), ("R2", 1), ("N1", 0)], 0.0, 0.5),
        // Nn=0: every retrieved relevant counts 1, unretrieved 0
        (&["R1", "U1", "R3"], &[("R1", 1), ("R2", 1), ("R3", 2)], 2.0 / 3.0, 2.0 / 3.0),
        // Nn > R: R=1, Nn=3, two nonrel above → min(2,1)/min(1,3) = 1 → 0
        (&["N1", "N2", "R1", "N3"], &[("R1", 1), ("N1", 0), ("N2", 0), ("N3", 0)], 0.0, 0.0),
        // Nn > R: R=2, Nn=4; R1 after 1 nonrel (1−1/2), R2 after 3 (1−2/2)
        (
            &["N1", "R1", "N2", "N3", "R2", "N4"],
            &[("R1", 1), ("R2", 1), ("N1", 0), ("N2", 0), ("N3", 0), ("N4", 0)],
            0.25,
            0.25,
        ),
        // unjudged interleaved everywhere
        (&["U1", "R1", "U2", "N1", "U3", "R2", "U4"], &[("R1", 1), ("R2", 1), ("N1", 0), ("N2", 0)], 0.75, 0.75),
        // relevant never retrieved
        (
            &["N1", "R1"],
            &[("R1", 1), ("R2", 1), ("R3", 1), ("N1", 0), ("N2", 0), ("N3", 0)],
            (1.0 - 1.0 / 3.0) / 3.0,
            (1.0 - 1.0 / 3.0) / 3.0,
        ),
        // empty ranking
        (&[], &[("R1", 1), ("N1", 0)], 0.0, 0.0),
        // only unjudged retrieved
        (&["U1", "U2"], &[("R1", 1)], 0.0, 0.0),
        // R=3 > Nn=2: R1 clean, R2 after 1 (1−1/2), R3 after 2 (1−2/2)
        (
            &["R1", "N1", "R2", "N2", "R3"],
            &[("R1", 1), ("R2", 1), ("R3", 1), ("N1", 0), ("N2", 0)],
            0.5,
            (1.0 + 2.0 / 3.0 + 1.0 / 3.0) / 3.0,
        ),
        // graded relevance counts as relevant
        (&["R1", "N1", "R2"], &[("R1", 3), ("R2", 1), ("N1", 0)], 0.5, 0.75),
    ];
    for (i, (ranking, judged, trec, orig)) in cases.iter().enumerate() {
        let j: HashMap<String, u32> = judged.iter().map(|(d, r)| (d.to_string(), *r)).collect();
        for (variant, want) in [(BprefVariant::TrecEval, trec), (BprefVariant::Original, orig)] {
            let got = bpref("q", ranking, &j, variant).map_err(|e| e.to_string())?.bpref.unwrap();
            ensure((got - want).abs() < 1e-15, || format!("case {i} ({variant}): got {got}, expected {want}"))?;
        }
    }
    // unjudged-insertion invariance
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..1000 {
        let n = rng.gen_range(1..40);
        let ranking: Vec<String> = (0..n).map(|i| format!("J{i}")).collect();
        let mut j: HashMap<String, u32> = ranking.iter().map(|d| (d.clone(), rng.gen_range(0..2))).collect();
        j.insert("Rmissing".into(), 1);
        let variant = if trial % 2 == 0 { BprefVariant::TrecEval } else { BprefVariant::Original };
        let base = bpref("q", &ranking, &j, variant).unwrap();
        let mut noisy = ranking.clone();
        for u in 0..rng.gen_range(1..30) {
            let at = rng.gen_range(0..=noisy.len());
            noisy.insert(at, format!("U{u}"));
        }
        let after = bpref("q", &noisy, &j, variant).unwrap();
        ensure(after == base, || format!("trial {trial}: {base:?} became {after:?} after unjudged insertions"))?;
    }
    Ok(format!("{} crafted cases × 2 variants exact; 1000 unjudged insertions invariant", cases.len()))
}

fn stemmer_conformance() -> Check {
    let golden = include_str!("../data/turkish_golden.tsv");
    let mut total = 0;
    let mut mismatches = Vec::new();
    for line in golden.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (word, stem) = line.split_once('\t').ok_or_else(|| format!("bad golden line `{line}`"))?;
        total += 1;
        let got = stem_affix(word);
        if got != stem {
            mismatches.push(format!("{word}: {got} != {stem}"));
        }
    }
    ensure(total >= 1000, || format!("golden vocabulary has only {total} words"))?;
    ensure(mismatches.is_empty(), || {
        format!("{} of {total} differ, e.g. {}", mismatches.len(), mismatches[..mismatches.len().min(5)].join("; "))
    })?;
    Ok(format!("{total}/{total} golden words agree"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/inflection").join(name)
}

fn directional_stemming_effect() -> Check {
    let topics = read_topics(&fixture("topics.txt"), Encoding::Utf8).map_err(|e| e.to_string())?;
    let qrels = read_qrels(&fixture("qrels.txt")).map_err(|e| e.to_string())?;
    let docs = [fixture("docs.trec")];
    let plain = plain_analyzer();
    let affix = Analyzer::new(AnalyzerConfig::with_stemmer(StemmerKind::Affix)).unwrap();
    let plain_index = index_files(&docs, Encoding::Utf8, &plain, ExecMode::default()).map_err(|e| e.to_string())?;
    let affix_index = index_files(&docs, Encoding::Utf8, &affix, ExecMode::default()).map_err(|e| e.to_string())?;

    let mut summary = Vec::new();
    for (nostem, stem) in
        [("tfidf-nostem", "tfidf-stem"), ("okapi-nostem", "okapi-stem"), ("lm-dirichlet-nostem", "lm-dirichlet-stem")]
    {
        let mean = |index: &InvertedIndex, a: &Analyzer, p: &str| -> Result<f64, String> {
            let model = preset(p).map_err(|e| e.to_string())?;
            let out = run_batch(index, a, &topics, &model, 1000, p, ExecMode::default()).map_err(|e| e.to_string())?;
            Ok(mean_bpref(&out.run, &qrels, BprefVariant::TrecEval, ExecMode::default())
                .map_err(|e| e.to_string())?
                .mean)
        };
        let without = mean(&plain_index, &plain, nostem)?;
        let with = mean(&affix_index, &affix, stem)?;
        ensure(with > without, || format!("{stem}: {with:.4} does not exceed {nostem}: {without:.4}"))?;
        summary.push(format!("{} {without:.4}→{with:.4}", nostem.trim_end_matches("-nostem")));
    }
    Ok(format!("affix stemming beats no stemming: {}", summary.join(", ")))
}

fn persistence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let corpus = corpus_with(&mut rng, 10_000, 20_000, 200);
    let a = plain_analyzer();
    let t0 = Instant::now();
    let index = InvertedIndex::build(corpus.docs.clone(), &a, ExecMode::default()).map_err(|e| e.to_string())?;
    let build_time = t0.elapsed();
    ensure(build_time < Duration::from_secs(30), || format!("indexing 10k docs took {build_time:?}"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("synthetic.tir");
    tirkit::index::write_index(&index, &path).map_err(|e| e.to_string())?;
    let bytes = std::fs::read(&path).map_err(|e| e.to_string())?;
    let back = tirkit::index::read_index(&path).map_err(|e| e.to_string())?;
    ensure(back == index, || "read(write(index)) differs from index".into())?;
    ensure(back.stats() == index.stats() && back.fingerprint() == index.fingerprint(), || "stats differ".into())?;
    ensure(back.to_bytes() == bytes, || "re-serialized bytes differ".into())?;
    let again = InvertedIndex::build(corpus.docs, &a, ExecMode::Sequential).map_err(|e| e.to_string())?;
    ensure(again.to_bytes() == bytes, || "rebuilding the same corpus gives different bytes".into())?;

    let q = QueryVector::analyze(&format!("{} {} {}", corpus.vocab[0], corpus.vocab[3], corpus.vocab[50]), &a);
    let mut slowest = Duration::ZERO;
    for m in model_grid() {
        let t = Instant::now();
        let r = rank(&q, &back, &m, 1000).map_err(|e| e.to_string())?;
        slowest = slowest.max(t.elapsed());
        ensure(!r.is_empty(), || format!("{m}: no results"))?;
    }
    ensure(slowest < Duration::from_millis(100), || format!("slowest query took {slowest:?}"))?;
    Ok(format!(
        "10k docs: build {build_time:.2?}, {} bytes roundtrip byte-stable, slowest query {slowest:.2?}",
        bytes.len()
    ))
}

fn presets_table() -> Check {
    let expected = [
        ("tfidf-nostem", Model::TfIdf(TfIdfParams { k1: 1.0, k3: 1000.0, b: 0.2 })),
        ("tfidf-stem", Model::TfIdf(TfIdfParams { k1: 1.0, k3: 1000.0, b: 0.4 })),
        ("okapi-nostem", Model::Bm25(Bm25Params { k1: 1.4, k3: 1000.0, b: 0.1, clamp_negative_idf: true })),
        ("okapi-stem", Model::Bm25(Bm25Params { k1: 1.0, k3: 1000.0, b: 0.75, clamp_negative_idf: true })),
        ("lm-dirichlet-nostem", Model::Lm(LmParams { smoothing: Smoothing::Dirichlet { mu: 2000.0 } })),
        ("lm-dirichlet-stem", Model::Lm(LmParams { smoothing: Smoothing::Dirichlet { mu: 500.0 } })),
    ];
    ensure(PRESETS.len() == expected.len(), || {
        format!("{} presets defined, expected {}", PRESETS.len(), expected.len())
    })?;
    for (name, model) in &expected {
        let got = preset(name).map_err(|e| e.to_string())?;
        ensure(&got == model, || format!("{name}: {got} != {model}"))?;
    }
    ensure(preset("okapi").is_err(), || "unknown preset accepted".into())?;
    Ok(format!("{} presets resolve to their published values", expected.len()))
}

type CheckFn = fn() -> Check;

fn main() {
    let checks: [(&str, CheckFn); 8] = [
        ("oracle ranking equivalence", oracle_ranking_equivalence),
        ("smoothing normalization", smoothing_normalization),
        ("LM form equivalence", lm_form_equivalence),
        ("bpref correctness", bpref_correctness),
        ("stemmer conformance", stemmer_conformance),
        ("directional stemming effect", directional_stemming_effect),
        ("persistence", persistence),
        ("presets", presets_table),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
