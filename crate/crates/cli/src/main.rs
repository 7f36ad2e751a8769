use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tirkit::analysis::{Analyzer, AnalyzerConfig};
use tirkit::corpus::{read_qrels, read_topics, Encoding};
use tirkit::eval::{mean_bpref, parse_run, write_run, BprefVariant};
use tirkit::experiment::{
    index_files, load_index, query_analyzer, resolve_analyzer, resolve_model, run_batch, sweep, Axis, Settings,
    SweepCondition, SweepSpec, DEFAULT_K,
};
use tirkit::index::write_index;
use tirkit::ranking::{rank, QueryVector};
use tirkit::ExecMode;

/// Turkish ad-hoc retrieval experiments: index, search, batch, eval, sweep.
#[derive(Parser)]
#[command(name = "tirkit", version)]
struct Cli {
    /// Parameter file (`key = value` lines); command-line flags override it.
    #[arg(long, global = true, env = "TIRKIT_CONFIG")]
    config: Option<PathBuf>,
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from TREC document files.
    Index {
        /// TREC document file (gzip allowed); repeatable.
        #[arg(long = "docs")]
        docs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        encoding: Option<String>,
        #[command(flatten)]
        analyzer: AnalyzerArgs,
    },
    /// Run one query and print the top-k documents.
    Search {
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        analyzer: AnalyzerArgs,
    },
    /// Rank every topic and write a TREC run file.
    Batch {
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long)]
        topics: Option<PathBuf>,
        /// Run file to write (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        tag: Option<String>,
        #[arg(long)]
        encoding: Option<String>,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        analyzer: AnalyzerArgs,
    },
    /// Compute per-topic and mean bpref of a run.
    Eval {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        qrels: Option<PathBuf>,
        /// `trec-eval` (min(R, Nn) denominator) or `original` (R).
        #[arg(long)]
        bpref_variant: Option<String>,
        /// Also write the per-topic table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Grid-search model parameters over one or more pre-built indexes.
    Sweep {
        /// Index file, one per stemming option; repeatable.
        #[arg(long = "index")]
        indexes: Vec<PathBuf>,
        #[arg(long)]
        topics: Option<PathBuf>,
        #[arg(long)]
        qrels: Option<PathBuf>,
        /// `param=v1,v2,…` or `param=start:end:step`; repeatable, enumerated
        /// in the order given.
        #[arg(long = "grid")]
        grid: Vec<String>,
        /// CSV file for the grid rows (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        bpref_variant: Option<String>,
        #[arg(long)]
        encoding: Option<String>,
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Args, Default)]
struct ModelArgs {
    /// tfidf, okapi or lm.
    #[arg(long)]
    model: Option<String>,
    /// Named parameter preset, e.g. okapi-nostem.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k3: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    clamp_negative_idf: Option<bool>,
    /// jelinek-mercer, dirichlet or absolute-discount.
    #[arg(long)]
    smoothing: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args, Default)]
struct AnalyzerArgs {
    /// none, affix or lemma.
    #[arg(long)]
    stemmer: Option<String>,
    /// Lemma dictionary (`surface<TAB>lemma` lines) for `--stemmer lemma`.
    #[arg(long)]
    lemma_dict: Option<PathBuf>,
    /// Stopword list, one word per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// turkish or ascii-only.
    #[arg(long)]
    casefold: Option<String>,
    /// truncate-after or keep-whole.
    #[arg(long)]
    apostrophe: Option<String>,
}

fn set<T: ToString>(s: &mut Settings, key: &str, v: &Option<T>) {
    if let Some(v) = v {
        s.set(key, v.to_string());
    }
}

fn set_path(s: &mut Settings, key: &str, v: &Option<PathBuf>) {
    if let Some(p) = v {
        s.set(key, p.to_string_lossy());
    }
}

impl ModelArgs {
    fn apply(&self, s: &mut Settings) {
        set(s, "model", &self.model);
        set(s, "preset", &self.preset);
        set(s, "k1", &self.k1);
        set(s, "k3", &self.k3);
        set(s, "b", &self.b);
        set(s, "clamp-negative-idf", &self.clamp_negative_idf);
        set(s, "smoothing", &self.smoothing);
        set(s, "lambda", &self.lambda);
        set(s, "mu", &self.mu);
        set(s, "delta", &self.delta);
    }
}

impl AnalyzerArgs {
    fn apply(&self, s: &mut Settings) {
        set(s, "stemmer", &self.stemmer);
        set_path(s, "lemma-dict", &self.lemma_dict);
        set_path(s, "stopwords", &self.stopwords);
        set(s, "casefold", &self.casefold);
        set(s, "apostrophe", &self.apostrophe);
    }
}

fn required_path(s: &Settings, key: &str) -> Result<PathBuf> {
    s.get_path(key).ok_or_else(|| anyhow!("missing --{key} (or `{key}` in the parameter file)"))
}

fn encoding(s: &Settings) -> Result<Encoding> {
    Ok(s.get_parsed::<Encoding>("encoding")?.unwrap_or_default())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut settings = match &cli.config {
        Some(p) => Settings::load(p)?,
        None => Settings::new(),
    };
    let mode = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };

    match cli.command {
        Command::Index { docs, out, encoding: enc, analyzer } => {
            set_path(&mut settings, "out", &out);
            set(&mut settings, "encoding", &enc);
            analyzer.apply(&mut settings);
            let docs: Vec<PathBuf> =
                if docs.is_empty() { settings.get_all("docs").into_iter().map(PathBuf::from).collect() } else { docs };
            if docs.is_empty() {
                bail!("missing --docs (or `docs` in the parameter file)");
            }
            let out = required_path(&settings, "out")?;
            // Resolve the analyzer (and load any lemma dictionary) before
            // touching the corpus.
            let config = resolve_analyzer(&settings)?.unwrap_or_default();
            let analyzer = Analyzer::new(config)?;
            for d in &docs {
                if !d.is_file() {
                    bail!("{}: no such file", d.display());
                }
            }
            let index = index_files(&docs, encoding(&settings)?, &analyzer, mode)?;
            write_index(&index, &out).with_context(|| format!("cannot write {}", out.display()))?;
            let st = index.stats();
            println!(
                "indexed {} documents into {}: N={} vocab_size={} total_terms={} avdl={:.4} analyzer={}",
                st.num_docs,
                out.display(),
                st.num_docs,
                st.vocab_size,
                st.total_terms,
                st.avdl,
                index.fingerprint()
            );
        }

        Command::Search { index, query, k, model, analyzer } => {
            set_path(&mut settings, "index", &index);
            model.apply(&mut settings);
            analyzer.apply(&mut settings);
            let index = load_index(&required_path(&settings, "index")?)?;
            let analyzer = query_analyzer(&index, &settings)?;
            let model = resolve_model(&settings)?;
            let q = QueryVector::analyze(&query, &analyzer);
            let ranked = rank(&q, &index, &model, k)?;
            if !ranked.skipped_terms.is_empty() {
                log::info!("dropped terms absent from the collection: {}", ranked.skipped_terms.join(" "));
            }
            let mut out = io::stdout().lock();
            for (i, d) in ranked.docs.iter().enumerate() {
                writeln!(out, "{}\t{}\t{:.6}", i + 1, d.docno, d.score)?;
            }
        }

        Command::Batch { index, topics, out, k, tag, encoding: enc, model, analyzer } => {
            set_path(&mut settings, "index", &index);
            set_path(&mut settings, "topics", &topics);
            set_path(&mut settings, "out", &out);
            set(&mut settings, "k", &k);
            set(&mut settings, "tag", &tag);
            set(&mut settings, "encoding", &enc);
            model.apply(&mut settings);
            analyzer.apply(&mut settings);

            let model = resolve_model(&settings)?;
            let index_path = required_path(&settings, "index")?;
            let topics_path = required_path(&settings, "topics")?;
            let index = load_index(&index_path)?;
            let analyzer = query_analyzer(&index, &settings)?;
            let topics = read_topics(&topics_path, encoding(&settings)?)
                .with_context(|| format!("{}", topics_path.display()))?;
            let k = settings.get_parsed::<usize>("k")?.unwrap_or(DEFAULT_K);
            let tag = settings
                .get("tag")
                .map(str::to_string)
                .unwrap_or_else(|| format!("{}-{}", model.family(), analyzer.config().stemmer.label()));
            log::info!("model {model}, k={k}, {} topics", topics.len());
            let result = run_batch(&index, &analyzer, &topics, &model, k, &tag, mode)?;
            let mut w = output(settings.get_path("out").as_deref())?;
            write_run(&mut w, &result.run)?;
            w.flush()?;
            if !result.empty_topics.is_empty() {
                log::warn!(
                    "{} topic(s) produced no results: {}",
                    result.empty_topics.len(),
                    result.empty_topics.join(" ")
                );
            }
        }

        Command::Eval { run, qrels, bpref_variant, csv } => {
            set_path(&mut settings, "qrels", &qrels);
            set(&mut settings, "bpref-variant", &bpref_variant);
            set_path(&mut settings, "csv", &csv);
            let qrels_path = required_path(&settings, "qrels")?;
            let variant: BprefVariant = settings.get_parsed("bpref-variant")?.unwrap_or_default();
            let file = File::open(&run).with_context(|| format!("cannot open {}", run.display()))?;
            let parsed = parse_run(BufReader::new(file)).with_context(|| format!("{}", run.display()))?;
            let qrels = read_qrels(&qrels_path).with_context(|| format!("{}", qrels_path.display()))?;
            let report = mean_bpref(&parsed, &qrels, variant, mode)?;
            report.write_text(io::stdout().lock())?;
            if let Some(p) = settings.get_path("csv") {
                let mut w = create(&p)?;
                report.write_csv(&mut w)?;
                w.flush()?;
            }
        }

        Command::Sweep { indexes, topics, qrels, grid, out, k, bpref_variant, encoding: enc, model } => {
            set_path(&mut settings, "topics", &topics);
            set_path(&mut settings, "qrels", &qrels);
            set_path(&mut settings, "out", &out);
            set(&mut settings, "k", &k);
            set(&mut settings, "bpref-variant", &bpref_variant);
            set(&mut settings, "encoding", &enc);
            model.apply(&mut settings);

            let base = resolve_model(&settings)?;
            let axes = if grid.is_empty() {
                settings.grid().iter().map(|(p, v)| Axis::parse(p, v)).collect::<Result<Vec<_>, _>>()?
            } else {
                grid.iter().map(|g| Axis::parse_assignment(g)).collect::<Result<Vec<_>, _>>()?
            };
            let spec = SweepSpec { base, axes };
            spec.validate()?;

            let paths: Vec<PathBuf> = if indexes.is_empty() {
                settings.get_all("index").into_iter().map(PathBuf::from).collect()
            } else {
                indexes
            };
            if paths.is_empty() {
                bail!("missing --index (or `index` in the parameter file)");
            }
            let loaded = paths.iter().map(|p| load_index(p)).collect::<Result<Vec<_>, _>>()?;
            let analyzers = loaded.iter().map(|i| i.analyzer()).collect::<Result<Vec<_>, _>>()?;
            let labels = condition_labels(&paths, analyzers.iter().map(Analyzer::config));
            let conditions: Vec<SweepCondition<'_>> = labels
                .iter()
                .zip(&loaded)
                .zip(&analyzers)
                .map(|((label, index), analyzer)| SweepCondition { label, index, analyzer })
                .collect();

            let topics_path = required_path(&settings, "topics")?;
            let qrels_path = required_path(&settings, "qrels")?;
            let topics = read_topics(&topics_path, encoding(&settings)?)
                .with_context(|| format!("{}", topics_path.display()))?;
            let qrels = read_qrels(&qrels_path).with_context(|| format!("{}", qrels_path.display()))?;
            let k = settings.get_parsed::<usize>("k")?.unwrap_or(DEFAULT_K);
            let variant: BprefVariant = settings.get_parsed("bpref-variant")?.unwrap_or_default();

            let result = sweep(&spec, &conditions, &topics, &qrels, k, variant, mode)?;
            let csv_path = settings.get_path("out");
            let mut w = output(csv_path.as_deref())?;
            result.write_csv(&mut w)?;
            w.flush()?;
            drop(w);
            if csv_path.is_some() {
                print!("{}", result.summary());
            } else {
                eprint!("{}", result.summary());
            }
        }
    }
    Ok(())
}

/// Stemmer labels, disambiguated by file stem when two indexes share one.
fn condition_labels<'a>(paths: &[PathBuf], configs: impl Iterator<Item = &'a AnalyzerConfig>) -> Vec<String> {
    let base: Vec<&str> = configs.map(|c| c.stemmer.label()).collect();
    base.iter()
        .zip(paths)
        .map(|(label, path)| {
            if base.iter().filter(|l| *l == label).count() > 1 {
                format!("{label}:{}", path.file_stem().unwrap_or_default().to_string_lossy())
            } else {
                label.to_string()
            }
        })
        .collect()
}
