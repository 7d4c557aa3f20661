use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use emboot_core::baselines::{epb_int_build, epb_run, lp_bootstrap_run, LpConfig};
use emboot_core::harness::{
    evaluate_decision_list, gold_indices, load_corpus, precision_throughput, read_trace_jsonl,
    synth_corpus, write_metrics_csv, write_trace_jsonl, SynthSpec,
};
use emboot_core::interp::{build_decision_list, classify, Prediction};
use emboot_core::{
    bootstrap, BootstrapConfig, Corpus, CorpusStats, DecisionList, EmbeddingTable, Outcome,
    PretrainedVectors, Seeds, System, Trace, TrainConfig,
};

#[derive(Parser)]
#[command(name = "emboot", version, about = "Bootstrapped entity classification with custom embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted-pattern corpus with seeds and pretrained vectors.
    Synth(SynthArgs),
    /// Run the full embedding-based bootstrapper.
    Train(RunArgs),
    /// Run a baseline system.
    Baseline {
        #[arg(long, value_enum)]
        system: BaselineSystem,
        /// RBF kernel width for label propagation (default 1 / #patterns).
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Rebuild the decision list of a finished run.
    ExportInterp {
        #[command(flatten)]
        input: RunInput,
        /// Snapshot to export (default: last).
        #[arg(long)]
        epoch: Option<usize>,
        /// Output file (default: <run>/decision_list.tsv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every corpus entity with a run's decision list.
    Classify {
        #[command(flatten)]
        input: RunInput,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report precision/throughput and decision-list statistics of a run.
    Eval {
        #[command(flatten)]
        input: RunInput,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineSystem {
    Epb,
    Lp,
}

#[derive(Args)]
struct SynthArgs {
    /// JSON generator spec; missing fields take defaults.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Corpus output, two-column CoNLL.
    #[arg(long)]
    out: PathBuf,
    /// Seeds output (default: next to the corpus, `seeds.json`).
    #[arg(long)]
    seeds_out: Option<PathBuf>,
    /// Pretrained vectors output (default: next to the corpus, `pretrained.tsv`).
    #[arg(long)]
    pretrained_out: Option<PathBuf>,
    /// Planted pattern truth output (default: next to the corpus, `truth.tsv`).
    #[arg(long)]
    truth_out: Option<PathBuf>,
    /// Overrides the spec's seed.
    #[arg(long)]
    rng_seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    seeds: PathBuf,
    /// Word vectors, one word per line followed by its components.
    #[arg(long)]
    pretrained: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 100)]
    inner_epochs: usize,
    #[arg(long, default_value_t = 15)]
    dim: usize,
    #[arg(long, default_value_t = 4)]
    window: usize,
    #[arg(long, default_value_t = 10)]
    promote_entities: usize,
    #[arg(long, default_value_t = 10)]
    promote_patterns: usize,
    #[arg(long, default_value_t = 5)]
    neg_samples: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

#[derive(Args)]
struct RunInput {
    #[arg(long)]
    corpus: PathBuf,
    /// Directory written by `train` or `baseline`.
    #[arg(long)]
    run: PathBuf,
    /// Needed for EPB runs, whose decision list uses pretrained vectors.
    #[arg(long)]
    pretrained: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Synth(args) => synth(args),
        Command::Train(args) => run_system(System::Emboot, &args, None),
        Command::Baseline { system, gamma, run } => {
            let system = match system {
                BaselineSystem::Epb => System::Epb,
                BaselineSystem::Lp => System::Lp,
            };
            run_system(system, &run, gamma)
        }
        Command::ExportInterp { input, epoch, out } => export_interp(&input, epoch, out),
        Command::Classify { input, out } => classify_all(&input, out),
        Command::Eval { input } => eval(&input),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn sibling(corpus: &Path, name: &str) -> PathBuf {
    corpus.with_file_name(name)
}

fn synth(args: SynthArgs) -> Result<()> {
    let mut spec: SynthSpec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => SynthSpec::default(),
    };
    if let Some(seed) = args.rng_seed {
        spec.rng_seed = seed;
    }
    let out = synth_corpus(&spec)?;
    fs::write(&args.out, out.corpus.to_conll()).with_context(|| format!("writing {}", args.out.display()))?;
    let seeds_path = args.seeds_out.unwrap_or_else(|| sibling(&args.out, "seeds.json"));
    fs::write(&seeds_path, out.seeds.to_json())?;
    let pre_path = args.pretrained_out.unwrap_or_else(|| sibling(&args.out, "pretrained.tsv"));
    out.pretrained.write(create(&pre_path)?)?;
    let truth_path = args.truth_out.unwrap_or_else(|| sibling(&args.out, "truth.tsv"));
    let mut w = create(&truth_path)?;
    for (c, planted) in out.truth.planted.iter().enumerate() {
        for p in planted {
            writeln!(w, "{p}\t{}", out.truth.categories[c])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_pretrained(path: Option<&Path>) -> Result<PretrainedVectors> {
    match path {
        Some(path) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            Ok(PretrainedVectors::read(BufReader::new(file))?)
        }
        None => Ok(PretrainedVectors::empty(0)),
    }
}

fn load_stats(corpus: &Path, window: usize) -> Result<(Corpus, CorpusStats)> {
    let corpus = load_corpus(corpus).with_context(|| format!("loading {}", corpus.display()))?;
    let stats = CorpusStats::build(&corpus.view(), window)?;
    Ok((corpus, stats))
}

fn run_system(system: System, args: &RunArgs, gamma: Option<f64>) -> Result<()> {
    let seeds_text = fs::read_to_string(&args.seeds).with_context(|| format!("reading {}", args.seeds.display()))?;
    let seeds = Seeds::from_json(&seeds_text)?;
    let pretrained = read_pretrained(args.pretrained.as_deref())?;
    let (corpus, stats) = load_stats(&args.corpus, args.window)?;
    let config = BootstrapConfig {
        epochs: args.epochs,
        k_ent: args.promote_entities,
        k_pat: args.promote_patterns,
        window: args.window,
        train: TrainConfig {
            inner_epochs: args.inner_epochs,
            neg_samples: args.neg_samples,
            dim: args.dim,
            ..TrainConfig::default()
        },
        seed: args.rng_seed,
        ..BootstrapConfig::default()
    };
    let outcome: Outcome = match system {
        System::Emboot => bootstrap::run(&config, &stats, &seeds, &pretrained)?,
        System::Epb => epb_run(&config, &stats, &seeds, &pretrained)?,
        System::Lp => lp_bootstrap_run(
            &config,
            &stats,
            &seeds,
            &LpConfig {
                gamma,
                ..LpConfig::default()
            },
        )?,
    };

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let dir = &args.out;
    let run_info = json!({
        "system": system.name(),
        "window": args.window,
        "epochs": args.epochs,
        "innerEpochs": args.inner_epochs,
        "dim": args.dim,
        "promoteEntities": args.promote_entities,
        "promotePatterns": args.promote_patterns,
        "negSamples": args.neg_samples,
        "rngSeed": args.rng_seed,
        "gamma": gamma,
    });
    fs::write(dir.join("run.json"), serde_json::to_string_pretty(&run_info)? + "\n")?;

    let mut w = create(&dir.join("trace.jsonl"))?;
    write_trace_jsonl(&mut w, &outcome.trace, &stats)?;
    w.flush()?;

    let curve = precision_throughput(&outcome.trace, &corpus.gold_labels(), &stats.entities)?;
    let mut w = create(&dir.join("metrics.csv"))?;
    write_metrics_csv(&mut w, system, &curve)?;
    w.flush()?;

    if let Some(table) = &outcome.table {
        let mut w = create(&dir.join("embeddings.tsv"))?;
        table.write_tsv(&mut w, &stats.entities, &stats.patterns)?;
        w.flush()?;
    }
    if let Some(dl) = decision_list(&outcome.trace, outcome.table.as_ref(), &pretrained, &stats, args.epochs)? {
        let mut w = create(&dir.join("decision_list.tsv"))?;
        dl.write_tsv(&mut w, &stats.patterns)?;
        w.flush()?;
    }
    if let Some(last) = curve.last() {
        eprintln!(
            "{}: throughput {} precision {:.6}",
            system.name(),
            last.throughput,
            last.precision
        );
    }
    Ok(())
}

/// Custom-embedding list for Emboot, pretrained-vector list for EPB, none for LP.
fn decision_list(
    trace: &Trace,
    table: Option<&EmbeddingTable>,
    pretrained: &PretrainedVectors,
    stats: &CorpusStats,
    epoch: usize,
) -> Result<Option<DecisionList>> {
    let epoch = epoch.min(trace.snapshots.len() - 1);
    let pools = &trace.snapshots[epoch];
    Ok(match (trace.system, table) {
        (System::Emboot, Some(table)) => Some(build_decision_list(pools, table, epoch)?),
        (System::Epb, _) if !pretrained.is_empty() => Some(epb_int_build(
            pools,
            pretrained,
            &stats.entities,
            &stats.patterns,
            epoch,
        )?),
        _ => None,
    })
}

struct LoadedRun {
    corpus: Corpus,
    stats: CorpusStats,
    trace: Trace,
    table: Option<EmbeddingTable>,
    pretrained: PretrainedVectors,
}

fn load_run(input: &RunInput) -> Result<LoadedRun> {
    let info_path = input.run.join("run.json");
    let info: Value = serde_json::from_str(
        &fs::read_to_string(&info_path).with_context(|| format!("reading {}", info_path.display()))?,
    )?;
    let window = info["window"].as_u64().context("run.json lacks a window")? as usize;
    let (corpus, stats) = load_stats(&input.corpus, window)?;
    let trace_path = input.run.join("trace.jsonl");
    let file = File::open(&trace_path).with_context(|| format!("opening {}", trace_path.display()))?;
    let trace = read_trace_jsonl(BufReader::new(file), &stats)?;
    let table_path = input.run.join("embeddings.tsv");
    let table = if table_path.exists() {
        let file = File::open(&table_path)?;
        Some(EmbeddingTable::read_tsv(BufReader::new(file), &stats.entities, &stats.patterns)?)
    } else {
        None
    };
    let pretrained = read_pretrained(input.pretrained.as_deref())?;
    Ok(LoadedRun {
        corpus,
        stats,
        trace,
        table,
        pretrained,
    })
}

fn require_list(run: &LoadedRun, epoch: usize) -> Result<DecisionList> {
    match decision_list(&run.trace, run.table.as_ref(), &run.pretrained, &run.stats, epoch)? {
        Some(dl) => Ok(dl),
        None => match run.trace.system {
            System::Emboot => bail!("run has no embeddings.tsv"),
            System::Epb => bail!("EPB decision lists need --pretrained"),
            System::Lp => bail!("label propagation runs have no decision list"),
        },
    }
}

fn export_interp(input: &RunInput, epoch: Option<usize>, out: Option<PathBuf>) -> Result<()> {
    let run = load_run(input)?;
    let last = run.trace.snapshots.len() - 1;
    let epoch = epoch.unwrap_or(last);
    if epoch > last {
        bail!("trace has epochs 0..={last}, asked for {epoch}");
    }
    let dl = require_list(&run, epoch)?;
    let path = out.unwrap_or_else(|| input.run.join("decision_list.tsv"));
    let mut w = create(&path)?;
    dl.write_tsv(&mut w, &run.stats.patterns)?;
    w.flush()?;
    Ok(())
}

fn classify_all(input: &RunInput, out: Option<PathBuf>) -> Result<()> {
    let run = load_run(input)?;
    let dl = require_list(&run, usize::MAX)?;
    let mut w: Box<dyn Write> = match out {
        Some(path) => Box::new(create(&path)?),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    write!(w, "entity\tlabel\tpatterns")?;
    for c in dl.categories() {
        write!(w, "\t{c}")?;
    }
    writeln!(w)?;
    for e in run.stats.entities.ids() {
        let got = classify(e, &dl, &run.stats.cooc);
        let label = match got.label {
            Prediction::Category(c) => dl.categories()[c].as_str(),
            Prediction::Abstain => "ABSTAIN",
        };
        write!(w, "{}\t{label}\t{}", run.stats.entities.surface(e), got.contributing)?;
        for s in &got.scores {
            write!(w, "\t{s:.6}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

fn eval(input: &RunInput) -> Result<()> {
    let run = load_run(input)?;
    let gold = run.corpus.gold_labels();
    let curve = precision_throughput(&run.trace, &gold, &run.stats.entities)?;
    let last = run.trace.last();
    let mut report = json!({
        "system": run.trace.system.name(),
        "curve": curve.iter().map(|p| json!({
            "epoch": p.epoch,
            "throughput": p.throughput,
            "precision": format!("{:.6}", p.precision),
        })).collect::<Vec<_>>(),
    });
    if let Ok(dl) = require_list(&run, usize::MAX) {
        let index = gold_indices(last.categories(), &gold, &run.stats.entities);
        let items: Vec<_> = last
            .promoted_entities()
            .filter_map(|(_, x)| Some((x.id, *index.get(&x.id)?)))
            .collect();
        let ev = evaluate_decision_list(&dl, &items, &run.stats.cooc);
        let histogram: serde_json::Map<String, Value> =
            ev.histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        report["decisionList"] = json!({
            "evaluated": ev.evaluated,
            "accuracy": format!("{:.6}", ev.accuracy),
            "abstainRate": format!("{:.6}", ev.abstain_rate),
            "atMost2Patterns": format!("{:.6}", ev.share_at_most(2)),
            "atMost5Patterns": format!("{:.6}", ev.share_at_most(5)),
            "histogram": histogram,
        });
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
