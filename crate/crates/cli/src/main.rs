use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use streamsub::algos::{Preset, SalsaParams};
use streamsub::audit::{audit_exhaustive, audit_monotone_submodular};
use streamsub::exact::BruteForce;
use streamsub::forge::{load_edge_list, load_points_csv, load_recsys, InstanceBundle, OptProvenance, SyntheticSpec};
use streamsub::harness::{
    emit_results, run_experiment, verify_suite, AlgoSpec, Bounds, ExperimentConfig, OptMode, Ordering, OutputFormat,
    RunSettings,
};
use streamsub::SubmodularOracle;

/// Streaming submodular maximization benchmarks.
#[derive(Parser)]
#[command(name = "streamsub", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it as a JSON document.
    Gen(GenArgs),
    /// Run algorithms over an instance and emit one record per run.
    Run(RunArgs),
    /// Brute-force the optimum of a small instance.
    Opt(OptArgs),
    /// Check that an objective is monotone and submodular.
    Audit(AuditArgs),
    /// Run a ratio suite against brute-forced optima.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Source {
    /// Instance document written by `gen`.
    #[arg(long, conflicts_with_all = ["synthetic", "edge_list", "points", "movies"])]
    instance: Option<PathBuf>,
    /// Generator spec such as `graph:n=12,p=0.3`.
    #[arg(long, conflicts_with_all = ["edge_list", "points", "movies"])]
    synthetic: Option<String>,
    /// Edge list file (`u v` per line).
    #[arg(long, conflicts_with_all = ["points", "movies"])]
    edge_list: Option<PathBuf>,
    /// Points CSV for the exemplar objective.
    #[arg(long, conflicts_with = "movies")]
    points: Option<PathBuf>,
    /// Skip mean-centering of --points.
    #[arg(long)]
    no_center: bool,
    /// Movie vectors CSV for the recommendation objective.
    #[arg(long, requires = "users")]
    movies: Option<PathBuf>,
    /// User vectors CSV, same format as --movies.
    #[arg(long)]
    users: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    user_row: usize,
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
}

impl Source {
    fn is_synthetic(&self) -> bool {
        self.synthetic.is_some()
    }

    fn load(&self, seed: u64) -> Result<InstanceBundle> {
        if let Some(path) = &self.instance {
            return InstanceBundle::load(path).with_context(|| format!("reading {}", path.display()));
        }
        if let Some(spec) = &self.synthetic {
            return Ok(spec.parse::<SyntheticSpec>()?.generate(seed)?);
        }
        let objective = if let Some(path) = &self.edge_list {
            load_edge_list(path)?.into()
        } else if let Some(path) = &self.points {
            load_points_csv(path, !self.no_center)?.into()
        } else if let (Some(movies), Some(users)) = (&self.movies, &self.users) {
            load_recsys(movies, users, self.user_row, self.alpha)?.into()
        } else {
            bail!("name an input with --instance, --synthetic, --edge-list, --points or --movies");
        };
        Ok(InstanceBundle::with_identity_order(objective, 1))
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, required = true)]
    synthetic: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Capacity stored in the document.
    #[arg(long)]
    k: Option<usize>,
    /// Brute-force OPT at the stored capacity and record it.
    #[arg(long)]
    with_opt: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct ExperimentArgs {
    #[command(flatten)]
    source: Source,
    /// Comma-separated algorithm labels.
    #[arg(long, value_delimiter = ',', default_value = "sieve,salsa")]
    algo: Vec<String>,
    /// Comma-separated capacities.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Pass count for a bare `p-pass` label.
    #[arg(long, default_value_t = 2)]
    passes: u32,
    #[arg(long, value_parser = ["known", "guessed"])]
    opt_mode: Option<String>,
    /// Shuffle the stream per trial (the default for synthetic inputs).
    #[arg(long, conflicts_with = "fixed_order")]
    shuffle: bool,
    /// Keep the canonical order in every trial.
    #[arg(long)]
    fixed_order: bool,
    #[arg(long, value_parser = ["icml", "analysis"], default_value = "icml")]
    preset: String,
    /// Record wall-clock milliseconds (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
    format: String,
}

impl ExperimentArgs {
    fn config(&self, default_mode: OptMode) -> Result<ExperimentConfig> {
        let algos = self
            .algo
            .iter()
            .map(|a| a.parse::<AlgoSpec>())
            .collect::<Result<Vec<_>, _>>()?;
        let opt_mode = match &self.opt_mode {
            Some(m) => m.parse()?,
            None => default_mode,
        };
        let shuffled = self.shuffle || (self.source.is_synthetic() && !self.fixed_order);
        Ok(ExperimentConfig {
            algos,
            ks: self.k.clone(),
            trials: self.trials,
            base_seed: self.seed,
            passes: self.passes,
            ordering: if shuffled { Ordering::Shuffled } else { Ordering::Fixed },
            settings: RunSettings {
                opt_mode,
                eps: self.epsilon,
                salsa: SalsaParams::preset(self.preset.parse::<Preset>()?),
            },
            timing: self.timing,
            ..ExperimentConfig::default()
        })
    }

    fn format(&self) -> Result<OutputFormat> {
        Ok(self.format.parse()?)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
}

#[derive(Args)]
struct OptArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate only sets of exactly k elements (valid for monotone objectives).
    #[arg(long)]
    monotone: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check every triple instead of sampling (ground sets up to 12).
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Number of generated instances; the generator seed is `--seed + i`.
    #[arg(long, default_value_t = 1)]
    instances: u32,
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let mut bundle = args.synthetic.parse::<SyntheticSpec>()?.generate(args.seed)?;
    if let Some(k) = args.k {
        if k != bundle.k {
            bundle.known_opt = None;
        }
        bundle.k = k;
    }
    if args.with_opt && bundle.known_opt.is_none() {
        let opt = BruteForce::default().solve(&bundle.objective, bundle.k)?;
        bundle = bundle.with_known_opt(opt.value, OptProvenance::BruteForced);
    }
    bundle.save(&args.out)?;
    eprintln!(
        "wrote {} ({} objective, {} elements, stream length {})",
        args.out.display(),
        bundle.objective.kind(),
        bundle.objective.ground_size(),
        bundle.canonical_order.len()
    );
    Ok(0)
}

fn cmd_run(args: RunArgs) -> Result<i32> {
    let e = &args.experiment;
    let bundle = e.source.load(e.seed)?;
    let records = run_experiment(&bundle, &e.config(OptMode::Guessed)?)?;
    emit_results(&records, e.format()?, e.out.as_deref())?;
    Ok(0)
}

fn cmd_opt(args: OptArgs) -> Result<i32> {
    let bundle = args.source.load(args.seed)?;
    let solver = BruteForce {
        monotone: args.monotone,
        ..BruteForce::default()
    };
    let opt = solver.solve(&bundle.objective, args.k)?;
    print_out(&serde_json::to_string_pretty(&opt)?)?;
    Ok(0)
}

fn cmd_audit(args: AuditArgs) -> Result<i32> {
    let bundle = args.source.load(args.seed)?;
    let report = if args.exhaustive {
        audit_exhaustive(&bundle.objective)?
    } else {
        audit_monotone_submodular(&bundle.objective, args.samples, args.seed)?
    };
    print_out(&serde_json::to_string_pretty(&report)?)?;
    Ok(if report.passed() { 0 } else { 2 })
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let e = &args.experiment;
    let config = e.config(OptMode::Known)?;
    let mut records = Vec::new();
    for i in 0..args.instances {
        let bundle = e.source.load(e.seed.wrapping_add(i as u64))?;
        for mut r in run_experiment(&bundle, &config)? {
            r.params.insert("instance".into(), i.to_string());
            records.push(r);
        }
    }
    if let Some(out) = &e.out {
        emit_results(&records, e.format()?, Some(out))?;
    }
    let report = verify_suite(&records, &Bounds::theorems());
    let mut worst: BTreeMap<(&str, usize), (usize, f64, bool)> = BTreeMap::new();
    for c in &report.checked {
        let entry = worst.entry((&c.algo, c.k)).or_insert((0, f64::INFINITY, true));
        entry.0 += 1;
        entry.1 = entry.1.min(c.check.ratio);
        entry.2 &= c.check.pass;
    }
    let mut table = String::from("algo,k,checked,min_ratio,status");
    for ((algo, k), (n, ratio, ok)) in &worst {
        table += &format!("\n{algo},{k},{n},{ratio:.6},{}", if *ok { "pass" } else { "FAIL" });
    }
    print_out(&table)?;
    eprintln!(
        "{} checked, {} failed, {} without a guarantee",
        report.checked.len(),
        report.failures().count(),
        report.skipped
    );
    Ok(report.exit_code())
}

/// Writes `text` and a newline to stdout without panicking on a closed pipe.
fn print_out(text: &str) -> io::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain()
        .filter_map(|e| e.downcast_ref::<io::Error>())
        .any(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Opt(a) => cmd_opt(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

