//! Command-line front end.
//!
//! Exit status: 0 success, 1 configuration or input error, 2 backend failure
//! (a checkpoint is left for `code --resume`), 3 finished but some documents
//! failed.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::{info, warn};

use evcoder::classify::{calibrate, score_labels, select_uncertain, CalibrationParams, ScorerSet};
use evcoder::eval::{evaluate, EvalTask};
use evcoder::kb::{EntityIndex, Gazetteer};
use evcoder::model::{Namespace, ScoredLabel};
use evcoder::pipeline::{read_documents, run_pipeline, sort_records, Checkpoint, RunError, RunOptions};
use evcoder::preprocess::prepare_text;
use evcoder::{Document, Engine, EventRecord, PipelineConfig};

#[derive(Parser)]
#[command(name = "evcoder", version, about = "Dictionary-free political event coding")]
struct Cli {
    /// Pipeline configuration (TOML). Bundled defaults when omitted.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the entity index from encyclopedia JSON lines.
    BuildIndex {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Build the gazetteer index from a Geonames dump.
    IngestGazetteer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Per-label score cutoffs from the positive scores of a document sample,
    /// or from a `label<TAB>score` file.
    Calibrate {
        #[arg(long, conflicts_with = "scores", required_unless_present = "scores")]
        input: Option<PathBuf>,
        #[arg(long)]
        scores: Option<PathBuf>,
        #[arg(long, default_value_t = 90.0)]
        percentile: f64,
        #[arg(long, default_value_t = 20)]
        min_sample: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Run the pipeline over a document stream.
    Code {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        batch_size: Option<usize>,
        /// Continue from `<output>.ckpt.json`.
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        sort_by_doc_id: bool,
        /// Write the run report here instead of `<output>.report.json`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Precision, recall and F1 of predicted records against gold records.
    Evaluate {
        #[arg(long)]
        predicted: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, value_enum, default_value_t = Task::Category)]
        task: Task,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Documents whose score for one label lies closest to its cutoff.
    SelectAnnotationBatch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long, short, default_value_t = 50)]
        n: usize,
        /// Defaults to the calibrated cutoff, else 0.5.
        #[arg(long)]
        cutoff: Option<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    Category,
    Mode,
    Context,
    GeolocationAdmin1,
}

impl From<Task> for EvalTask {
    fn from(t: Task) -> Self {
        match t {
            Task::Category => EvalTask::Category,
            Task::Mode => EvalTask::Mode,
            Task::Context => EvalTask::Context,
            Task::GeolocationAdmin1 => EvalTask::GeolocationAdmin1,
        }
    }
}

/// Failure classes that map to distinct exit codes.
#[derive(Debug)]
enum Failure {
    Config(anyhow::Error),
    Backend(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Backend(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(PipelineConfig::default()),
    }
}

fn load_engine(c: &PipelineConfig) -> Result<Engine> {
    Engine::from_config(c).context("building the pipeline")
}

fn read_docs(path: &Path) -> Result<Vec<Document>> {
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_documents(&src).with_context(|| format!("parsing {}", path.display()))
}

fn read_records(path: &Path) -> Result<Vec<EventRecord>> {
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}: line {}", path.display(), i + 1)))
        .collect()
}

fn write_out(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let config = cli.config.as_deref();
    match cli.command {
        Cmd::BuildIndex { input, output } => {
            let src = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let (kb, stats) = EntityIndex::ingest_jsonl(&src);
            kb.save(&output).with_context(|| format!("writing {}", output.display()))?;
            println!("{}", serde_json::to_string_pretty(&stats).expect("stats serialize"));
        }
        Cmd::IngestGazetteer { input, output } => {
            let src = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let (g, stats) = Gazetteer::ingest_gazetteer(&src);
            g.save(&output).with_context(|| format!("writing {}", output.display()))?;
            println!("{}", serde_json::to_string_pretty(&stats).expect("stats serialize"));
        }
        Cmd::Calibrate {
            input,
            scores,
            percentile,
            min_sample,
            output,
        } => {
            let samples = match (input, scores) {
                (_, Some(s)) => read_score_file(&s)?,
                (Some(i), None) => {
                    let engine = load_engine(&load_config(config)?)?;
                    positive_scores(&engine, &read_docs(&i)?)?
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            let table = calibrate(&samples, CalibrationParams { percentile, min_sample }).context("calibrating")?;
            for e in table.entries().filter(|e| e.cutoff.is_none()) {
                warn!("{}: {} positive scores, left uncalibrated", e.label, e.sample_size);
            }
            write_out(Some(&output), &table.to_toml())?;
        }
        Cmd::Code {
            input,
            output,
            workers,
            batch_size,
            resume,
            sort_by_doc_id,
            report,
        } => {
            let mut c = load_config(config)?;
            if let Some(w) = workers {
                c.workers = w;
            }
            if let Some(b) = batch_size {
                c.batch_size = b;
            }
            c.sort_by_doc_id |= sort_by_doc_id;
            c.validate().context("checking configuration")?;
            let engine = load_engine(&c)?;
            let docs = read_docs(&input)?;
            return code(&engine, &c, &docs, &output, resume, report.as_deref());
        }
        Cmd::Evaluate {
            predicted,
            gold,
            task,
            output,
        } => {
            let report = evaluate(&read_records(&predicted)?, &read_records(&gold)?, task.into()).context("evaluating")?;
            let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            write_out(output.as_deref(), &body)?;
        }
        Cmd::SelectAnnotationBatch {
            input,
            label,
            n,
            cutoff,
            output,
        } => {
            let engine = load_engine(&load_config(config)?)?;
            let set = scorer_for_label(&engine, &label)?;
            let mut by_doc = BTreeMap::new();
            for d in read_docs(&input)? {
                let Ok(p) = prepare_text(&d, &engine.clean_rules) else { continue };
                let s = score_labels(&p.coded_text, &set).map_err(|e| Failure::Backend(e.into()))?;
                by_doc.insert(d.id, s.into_iter().next().expect("one label asked"));
            }
            let cutoff = cutoff.or_else(|| engine.calibration.cutoff(&label)).unwrap_or(0.5);
            let ids = select_uncertain(&by_doc, cutoff, n);
            let body: String = ids.iter().map(|id| format!("{id}\t{:.4}\n", by_doc[id].score)).collect();
            write_out(output.as_deref(), &body)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_score_file(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((label, score)) = line.split_once('\t') else {
            bail!("{}: line {}: expected label<TAB>score", path.display(), i + 1);
        };
        let score: f64 = score
            .trim()
            .parse()
            .with_context(|| format!("{}: line {}: bad score", path.display(), i + 1))?;
        out.entry(label.trim().to_string()).or_default().push(score);
    }
    Ok(out)
}

/// All labels of every namespace, each bound to its scorer.
fn scorer_sets(engine: &Engine) -> Vec<ScorerSet> {
    let modes: Vec<String> = engine
        .ontology
        .categories()
        .iter()
        .flat_map(|c| engine.ontology.mode_labels(c))
        .collect();
    vec![
        engine.categories.clone(),
        ScorerSet::new(Namespace::Mode, modes, engine.modes.clone()),
        engine.contexts.clone(),
    ]
}

fn scorer_for_label(engine: &Engine, label: &str) -> Result<ScorerSet> {
    scorer_sets(engine)
        .into_iter()
        .find(|s| s.labels.iter().any(|l| l == label))
        .map(|s| ScorerSet::new(s.namespace, vec![label.to_string()], s.backend))
        .with_context(|| format!("unknown label `{label}`"))
}

fn positive_scores(engine: &Engine, docs: &[Document]) -> Result<BTreeMap<String, Vec<f64>>, Failure> {
    let sets = scorer_sets(engine);
    let mut out: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for s in &sets {
        for l in &s.labels {
            out.entry(l.clone()).or_default();
        }
    }
    for d in docs {
        let Ok(p) = prepare_text(d, &engine.clean_rules) else { continue };
        for s in &sets {
            let scored: Vec<ScoredLabel> = score_labels(&p.coded_text, s).map_err(|e| Failure::Backend(e.into()))?;
            for l in scored.into_iter().filter(|l| l.positive) {
                out.entry(l.label).or_default().push(l.score);
            }
        }
    }
    Ok(out)
}

fn code(
    engine: &Engine,
    c: &PipelineConfig,
    docs: &[Document],
    output: &Path,
    resume: bool,
    report_path: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let ckpt_path = with_suffix(output, ".ckpt.json");
    let checkpoint: Option<Checkpoint> = if resume {
        let src = fs::read_to_string(&ckpt_path).with_context(|| format!("reading {}", ckpt_path.display()))?;
        Some(serde_json::from_str(&src).with_context(|| format!("parsing {}", ckpt_path.display()))?)
    } else {
        None
    };
    let file = match &checkpoint {
        Some(cp) => {
            let f = OpenOptions::new()
                .write(true)
                .open(output)
                .with_context(|| format!("opening {}", output.display()))?;
            // drop anything written after the last completed batch
            f.set_len(cp.bytes_written).context("truncating output")?;
            let mut f = f;
            std::io::Seek::seek(&mut f, std::io::SeekFrom::End(0)).context("seeking output")?;
            info!("resuming after {} documents", cp.docs_done);
            f
        }
        None => File::create(output).with_context(|| format!("creating {}", output.display()))?,
    };
    let mut out = BufWriter::new(file);
    let mut save = |cp: &Checkpoint| -> evcoder::Result<()> {
        let body = serde_json::to_string(cp).expect("checkpoint serializes");
        let tmp = with_suffix(&ckpt_path, ".tmp");
        fs::write(&tmp, body)
            .and_then(|_| fs::rename(&tmp, &ckpt_path))
            .map_err(|e| evcoder::Error::Invalid(format!("{}: {e}", ckpt_path.display())))
    };
    let report = match run_pipeline(docs, engine, &RunOptions::from(c), &mut out, checkpoint, &mut save) {
        Ok(r) => r,
        Err(e @ RunError::Backend { .. }) => {
            return Err(Failure::Backend(anyhow::anyhow!("{e}; rerun with --resume to continue")))
        }
        Err(e) => return Err(Failure::Config(e.into())),
    };
    drop(out);
    if c.sort_by_doc_id {
        let mut records = read_records(output)?;
        sort_records(&mut records);
        let body: String = records
            .iter()
            .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
            .collect();
        fs::write(output, body).with_context(|| format!("writing {}", output.display()))?;
    }
    let _ = fs::remove_file(&ckpt_path);
    let report_path = report_path.map(Path::to_path_buf).unwrap_or_else(|| with_suffix(output, ".report.json"));
    let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    fs::write(&report_path, body).with_context(|| format!("writing {}", report_path.display()))?;
    eprintln!(
        "{} documents: {} coded, {} dropped, {} failed; {} records",
        report.documents,
        report.coded_documents,
        report.dropped.len(),
        report.failed.len(),
        report.records
    );
    Ok(if report.failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}
