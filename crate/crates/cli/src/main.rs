//! `hinsim`: similarity search and evaluation on heterogeneous information networks.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use hinsim_core::eval::{
    evaluate, sweep, ClusteringBenchmark, RelevanceJudgments, SweepConfig, SweepTable, Task,
};
use hinsim_core::matrix::{SmsPipeline, SmsWeights};
use hinsim_core::similarity::{bpcrw, bscse, pathsim_row, smss_from_matrix, SimilarityResult, SmssEngine};
use hinsim_core::synth::{planted_partition, PlantedConfig};
use hinsim_core::{build_sms, extract_schema, Hin, MetaPath, MetaStructure, ObjectId};

use output::Report;

#[derive(Parser, Debug)]
#[command(name = "hinsim", version, about, args_override_self = true)]
struct Cli {
    /// Flat key=value file; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (falls back to HINSIM_THREADS, then 1).
    #[arg(long, env = "HINSIM_THREADS")]
    threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write results here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Network {
    #[arg(long)]
    nodes: PathBuf,
    #[arg(long)]
    edges: PathBuf,
}

impl Network {
    fn load(&self) -> Result<Hin> {
        Ok(Hin::load(&self.nodes, &self.edges)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and validate a network, then print its census.
    Ingest(Network),
    /// Print the network schema.
    Schema(Network),
    /// Show the stratified meta structure rooted at a type.
    Sms {
        #[command(flatten)]
        network: Network,
        #[arg(long)]
        source_type: String,
    },
    /// Score one source object against every object of its type.
    Sim(SimArgs),
    /// Evaluate a single (λ, w) setting.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Evaluate a grid of λ values and Beta-sampled weights.
    Sweep(SweepArgs),
    /// Write a planted-partition network with its benchmark.
    Synth(SynthArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Metric {
    Smss,
    Pathsim,
    Bpcrw,
    Bscse,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[command(flatten)]
    network: Network,
    #[arg(long, value_enum)]
    metric: Metric,
    #[arg(long)]
    source: String,
    /// Report only this object.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Comma-separated, one per basic structure depth.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    /// Meta path for pathsim and bpcrw, e.g. `Author,Paper,Author`.
    #[arg(long)]
    path: Option<String>,
    /// Meta structure for bscse, e.g. `Author,Paper,(Venue,Term),Paper,Author`.
    #[arg(long)]
    structure: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Keep the first K rows.
    #[arg(long)]
    top: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Setting {
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<f64>,
}

#[derive(Subcommand, Debug)]
enum EvalCommand {
    /// k-means on SMSS rows, scored by NMI against a benchmark.
    Cluster {
        #[command(flatten)]
        network: Network,
        #[arg(long)]
        benchmark: PathBuf,
        #[command(flatten)]
        setting: Setting,
    },
    /// nDCG of the SMSS ranking against graded judgments.
    Rank {
        #[command(flatten)]
        network: Network,
        #[arg(long)]
        judgments: PathBuf,
        /// Defaults to every judged source.
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        at: Option<usize>,
        #[command(flatten)]
        setting: Setting,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum TaskKind {
    Cluster,
    Rank,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    network: Network,
    #[arg(long, value_enum)]
    task: TaskKind,
    #[arg(long)]
    benchmark: Option<PathBuf>,
    #[arg(long)]
    judgments: Option<PathBuf>,
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    at: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,0.7,0.9")]
    lambdas: Vec<f64>,
    /// `a:b` pairs, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1:9,2:8,3:7,4:6,5:5,6:4,7:3,8:2,9:1")]
    beta_pairs: Vec<String>,
    #[arg(long, default_value_t = 10)]
    samples: usize,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Directory receiving nodes.tsv, edges.tsv and benchmark.tsv.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 3)]
    communities: usize,
    #[arg(long, default_value_t = 300)]
    authors: usize,
    #[arg(long, default_value_t = 1650)]
    papers: usize,
    #[arg(long, default_value_t = 50)]
    venues: usize,
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
}

fn object(hin: &Hin, name: &str) -> Result<ObjectId> {
    Ok(hin.require_object(name)?)
}

fn fmt_weights(w: &[f64]) -> String {
    serde_json::to_string(w).expect("finite weights")
}

fn similarity(report: &mut Report, args: &SimArgs) -> Result<()> {
    let hin = args.network.load()?;
    let schema = extract_schema(&hin);
    let source = object(&hin, &args.source)?;
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| usage(format!("--metric {:?} needs --{flag}", args.metric)));
    report.param("metric", format!("{:?}", args.metric).to_lowercase());
    report.param("source", &args.source);
    let result: SimilarityResult = match args.metric {
        Metric::Smss => {
            let lambda = need(args.lambda, "lambda")?;
            let w = args.weights.clone().ok_or_else(|| usage("--metric smss needs --weights".into()))?;
            let sms = build_sms(&schema, hin.type_of(source))?;
            let weights = SmsWeights::new(lambda, w)?;
            report.param("lambda", lambda);
            report.param("weights", fmt_weights(weights.weights()));
            SmssEngine::new(&hin, &schema, &sms)?.similarity(source, &weights)?
        }
        Metric::Pathsim | Metric::Bpcrw => {
            let spec = args.path.as_deref().ok_or_else(|| usage("this metric needs --path".into()))?;
            let path = MetaPath::parse(&hin, spec)?;
            report.param("path", spec);
            if args.metric == Metric::Pathsim {
                pathsim_row(&hin, &schema, &path, source)?
            } else {
                let alpha = need(args.alpha, "alpha")?;
                report.param("alpha", alpha);
                bpcrw(&hin, &path, source, alpha)?
            }
        }
        Metric::Bscse => {
            let spec = args.structure.as_deref().ok_or_else(|| usage("bscse needs --structure".into()))?;
            let ms = MetaStructure::parse(spec, &schema)?;
            let alpha = need(args.alpha, "alpha")?;
            report.param("structure", spec);
            report.param("alpha", alpha);
            bscse(&hin, &schema, &ms, source, alpha)?
        }
    };
    report.row(["object", "score"]);
    if let Some(t) = &args.target {
        let t = object(&hin, t)?;
        if hin.type_of(t) != result.target_type {
            return Err(usage(format!(
                "target `{}` is not of type `{}`",
                hin.object_name(t),
                hin.type_name(result.target_type)
            )));
        }
        report.row([hin.object_name(t).to_string(), output::score(result.score(&hin, t))]);
        return Ok(());
    }
    let ranked = result.ranked(&hin);
    let k = args.top.unwrap_or(ranked.len());
    for (o, s) in ranked.into_iter().take(k) {
        report.row([hin.object_name(o).to_string(), output::score(s)]);
    }
    Ok(())
}

fn judged_sources(hin: &Hin, judgments: &RelevanceJudgments, source: Option<&str>) -> Result<Vec<ObjectId>> {
    match source {
        Some(s) => Ok(vec![object(hin, s)?]),
        None if judgments.per_source.is_empty() => Err(usage("judgments file has no rows".into())),
        None => Ok(judgments.per_source.keys().copied().collect()),
    }
}

fn source_type_of(hin: &Hin, objects: &[ObjectId]) -> Result<hinsim_core::TypeId> {
    let first = objects.first().ok_or_else(|| usage("no labeled objects".into()))?;
    Ok(hin.type_of(*first))
}

fn run_eval(report: &mut Report, cmd: &EvalCommand, seed: u64) -> Result<()> {
    let (network, setting) = match cmd {
        EvalCommand::Cluster { network, setting, .. } | EvalCommand::Rank { network, setting, .. } => {
            (network, setting)
        }
    };
    let hin = network.load()?;
    let schema = extract_schema(&hin);
    let weights = SmsWeights::new(setting.lambda, setting.weights.clone())?;
    let benchmark;
    let judgments;
    let sources;
    let (task, ty, metric) = match cmd {
        EvalCommand::Cluster { benchmark: path, .. } => {
            benchmark = ClusteringBenchmark::load(&hin, path)?;
            report.param("benchmark", path.display());
            let ty = source_type_of(&hin, &benchmark.objects)?;
            (Task::Cluster(&benchmark), ty, "nmi")
        }
        EvalCommand::Rank { judgments: path, source, at, .. } => {
            judgments = RelevanceJudgments::load(&hin, path)?;
            sources = judged_sources(&hin, &judgments, source.as_deref())?;
            report.param("judgments", path.display());
            if let Some(k) = at {
                report.param("at", k);
            }
            let ty = source_type_of(&hin, &sources)?;
            (Task::Rank { judgments: &judgments, sources: &sources, at: *at }, ty, "ndcg")
        }
    };
    let sms = build_sms(&schema, ty)?;
    let pipeline = SmsPipeline::new(&hin, &schema, &sms)?;
    let smss = smss_from_matrix(&pipeline.matrix(&weights)?);
    let score = evaluate(&hin, ty, &smss, &task, seed)?;
    report.row(["metric", "lambda", "w_json", "score"]);
    report.row([
        metric.to_string(),
        setting.lambda.to_string(),
        fmt_weights(&setting.weights),
        output::score(score),
    ]);
    Ok(())
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("Beta pair `{s}` must look like a:b")))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| usage(format!("bad Beta pair `{s}`")));
    Ok((parse(a)?, parse(b)?))
}

fn run_sweep(report: &mut Report, args: &SweepArgs, seed: u64) -> Result<()> {
    let hin = args.network.load()?;
    let schema = extract_schema(&hin);
    let config = SweepConfig {
        lambda_grid: args.lambdas.clone(),
        beta_pairs: args.beta_pairs.iter().map(|p| parse_pair(p)).collect::<Result<_>>()?,
        samples_per_pair: args.samples,
        seed,
    };
    report.param("task", format!("{:?}", args.task).to_lowercase());
    report.param("lambdas", fmt_weights(&config.lambda_grid));
    report.param("beta-pairs", args.beta_pairs.join(","));
    report.param("samples", config.samples_per_pair);
    let benchmark;
    let judgments;
    let sources;
    let (task, ty) = match args.task {
        TaskKind::Cluster => {
            let path = args.benchmark.as_ref().ok_or_else(|| usage("--task cluster needs --benchmark".into()))?;
            benchmark = ClusteringBenchmark::load(&hin, path)?;
            report.param("benchmark", path.display());
            (Task::Cluster(&benchmark), source_type_of(&hin, &benchmark.objects)?)
        }
        TaskKind::Rank => {
            let path = args.judgments.as_ref().ok_or_else(|| usage("--task rank needs --judgments".into()))?;
            judgments = RelevanceJudgments::load(&hin, path)?;
            sources = judged_sources(&hin, &judgments, args.source.as_deref())?;
            report.param("judgments", path.display());
            let ty = source_type_of(&hin, &sources)?;
            (Task::Rank { judgments: &judgments, sources: &sources, at: args.at }, ty)
        }
    };
    let sms = build_sms(&schema, ty)?;
    let pipeline = SmsPipeline::new(&hin, &schema, &sms)?;
    let table = sweep(&pipeline, &task, &config)?;
    write_table(report, &table);
    Ok(())
}

fn write_table(report: &mut Report, table: &SweepTable) {
    report.row(["lambda", "w_json", "score"]);
    for r in &table.rows {
        report.row([r.lambda.to_string(), fmt_weights(&r.weights), output::score(r.score)]);
    }
    for r in table.best_per_lambda() {
        report.trailer(format!(
            "best-at-lambda\t{}\t{}\t{}",
            r.lambda,
            fmt_weights(&r.weights),
            output::score(r.score)
        ));
    }
    if let Some(r) = table.best() {
        report.trailer(format!("best\t{}\t{}\t{}", r.lambda, fmt_weights(&r.weights), output::score(r.score)));
    }
}

fn run_synth(report: &mut Report, args: &SynthArgs, seed: u64) -> Result<()> {
    let planted = planted_partition(&PlantedConfig {
        communities: args.communities,
        authors: args.authors,
        papers: args.papers,
        venues: args.venues,
        noise: args.noise,
        seed,
        ..PlantedConfig::default()
    })?;
    planted.write_tsv(&args.out)?;
    report.line(planted.hin.census().to_string());
    Ok(())
}

fn run(cli: &Cli, report: &mut Report) -> Result<()> {
    match &cli.command {
        Command::Ingest(net) => {
            let hin = net.load()?;
            let census = hin.census();
            report.line(census.to_string());
            report.row(["type", "objects"]);
            for (name, n) in &census.per_type {
                report.row([name.clone(), n.to_string()]);
            }
        }
        Command::Schema(net) => {
            let hin = net.load()?;
            let schema = extract_schema(&hin);
            report.row(["type", "neighbors"]);
            for t in schema.types() {
                let names: Vec<&str> = schema.neighbors(t).iter().map(|&n| schema.type_name(n)).collect();
                report.row([schema.type_name(t).to_string(), names.join(",")]);
            }
        }
        Command::Sms { network, source_type } => {
            let hin = network.load()?;
            let schema = extract_schema(&hin);
            let ty = schema
                .type_id(source_type)
                .ok_or_else(|| anyhow!(hinsim_core::Error::UnknownType(source_type.clone())))?;
            report.param("source-type", source_type);
            report.line(build_sms(&schema, ty)?.render(&schema).trim_end().to_string());
        }
        Command::Sim(args) => similarity(report, args)?,
        Command::Eval(cmd) => run_eval(report, cmd, cli.seed)?,
        Command::Sweep(args) => run_sweep(report, args, cli.seed)?,
        Command::Synth(args) => run_synth(report, args, cli.seed)?,
    }
    Ok(())
}

/// A usage problem: reported like a bad flag, with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: String) -> anyhow::Error {
    Usage(msg).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use hinsim_core::Error as E;
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(E::Singular | E::NegativeEntry { .. }) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args: Vec<_> = std::env::args_os().collect();
    let command = Cli::command();
    let merged = match config::merge_args(&command, args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match command.try_get_matches_from(merged).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let threads = cli.threads.unwrap_or(1).max(1);
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        log::warn!("thread pool already initialized: {e}");
    }
    let mut report = Report::new(&cli);
    let result = run(&cli, &mut report).and_then(|()| report.finish(cli.output.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
