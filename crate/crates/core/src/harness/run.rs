use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::algos::{
    greedy, guess_opt, lazy_greedy, live_guess_bound, p_pass, salsa, schedule_pass, sieve_pass, small_k_pass,
    two_pass, GuessedAlgorithm, RunOutcome, SalsaParams, StreamSource,
};
use crate::error::{Error, Result};
use crate::exact::BruteForce;
use crate::forge::{shuffle, InstanceBundle, StreamPlan};
use crate::oracle::{ElementId, MeteredOracle, SubmodularOracle};

use super::record::{OptMode, RunRecord};

/// An algorithm the harness can run, by label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgoSpec {
    Sieve,
    Salsa,
    SmallK,
    Dense,
    Fixed,
    HighLow,
    TwoPass,
    /// `p-pass:P`; a bare `p-pass` takes `P` from the configuration.
    PPass(Option<u32>),
    Greedy,
    LazyGreedy,
}

impl AlgoSpec {
    pub const ALL_LABELS: [&'static str; 10] = [
        "sieve",
        "salsa",
        "small-k",
        "dense",
        "fixed",
        "high-low",
        "two-pass",
        "p-pass",
        "greedy",
        "lazy-greedy",
    ];

    /// Replaces a bare `p-pass` with an explicit pass count.
    pub fn resolve(self, passes: u32) -> Self {
        match self {
            AlgoSpec::PPass(None) => AlgoSpec::PPass(Some(passes)),
            other => other,
        }
    }

    pub fn is_offline(self) -> bool {
        matches!(self, AlgoSpec::Greedy | AlgoSpec::LazyGreedy)
    }

    fn uses_salsa_params(self) -> bool {
        matches!(self, AlgoSpec::Salsa | AlgoSpec::Dense | AlgoSpec::Fixed | AlgoSpec::HighLow)
    }

    /// Threshold candidates run side by side.
    fn candidates(self) -> usize {
        match self {
            AlgoSpec::Salsa => 5,
            _ => 1,
        }
    }

    fn passes(self) -> u32 {
        match self {
            AlgoSpec::TwoPass => 2,
            AlgoSpec::PPass(p) => p.unwrap_or(1),
            _ => 1,
        }
    }
}

impl fmt::Display for AlgoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgoSpec::Sieve => f.write_str("sieve"),
            AlgoSpec::Salsa => f.write_str("salsa"),
            AlgoSpec::SmallK => f.write_str("small-k"),
            AlgoSpec::Dense => f.write_str("dense"),
            AlgoSpec::Fixed => f.write_str("fixed"),
            AlgoSpec::HighLow => f.write_str("high-low"),
            AlgoSpec::TwoPass => f.write_str("two-pass"),
            AlgoSpec::PPass(None) => f.write_str("p-pass"),
            AlgoSpec::PPass(Some(p)) => write!(f, "p-pass:{p}"),
            AlgoSpec::Greedy => f.write_str("greedy"),
            AlgoSpec::LazyGreedy => f.write_str("lazy-greedy"),
        }
    }
}

impl FromStr for AlgoSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sieve" => AlgoSpec::Sieve,
            "salsa" => AlgoSpec::Salsa,
            "small-k" => AlgoSpec::SmallK,
            "dense" => AlgoSpec::Dense,
            "fixed" => AlgoSpec::Fixed,
            "high-low" => AlgoSpec::HighLow,
            "two-pass" => AlgoSpec::TwoPass,
            "p-pass" => AlgoSpec::PPass(None),
            "greedy" => AlgoSpec::Greedy,
            "lazy-greedy" => AlgoSpec::LazyGreedy,
            other => match other.strip_prefix("p-pass:").map(str::parse::<u32>) {
                Some(Ok(p)) if p > 0 => AlgoSpec::PPass(Some(p)),
                _ => return Err(Error::UnknownAlgorithm(other.to_string())),
            },
        })
    }
}

/// Settings shared by every run of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSettings {
    pub opt_mode: OptMode,
    /// Guess spacing for guessed mode.
    pub eps: f64,
    pub salsa: SalsaParams,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            opt_mode: OptMode::Guessed,
            eps: 0.1,
            salsa: SalsaParams::default(),
        }
    }
}

/// One algorithm execution with its cost counters.
#[derive(Clone, Debug)]
pub struct Execution {
    pub outcome: RunOutcome,
    pub oracle_calls: u64,
    /// Largest set the oracle was asked about.
    pub largest_query: usize,
    pub stream_reads: u64,
    pub stream_passes: u32,
}

/// Runs `algo` over `stream`. `opt` is required in known mode and ignored in
/// guessed mode; offline algorithms use neither.
pub fn execute(
    algo: AlgoSpec,
    objective: &dyn SubmodularOracle,
    stream: &[ElementId],
    k: usize,
    opt: Option<f64>,
    settings: &RunSettings,
) -> Result<Execution> {
    let oracle = MeteredOracle::new(objective);
    let source = StreamSource::new(stream);
    let n = stream.len();
    let outcome = if algo.is_offline() {
        let mut universe = stream.to_vec();
        universe.sort_unstable();
        universe.dedup();
        source.pass().for_each(drop);
        match algo {
            AlgoSpec::Greedy => greedy(&oracle, &universe, k)?,
            _ => lazy_greedy(&oracle, &universe, k)?,
        }
    } else {
        match settings.opt_mode {
            OptMode::Known => {
                let v = opt.ok_or_else(|| Error::MissingOpt(format!("{algo} at k={k}")))?;
                let p = &settings.salsa;
                match algo {
                    AlgoSpec::Sieve => sieve_pass(&oracle, &source, k, v)?,
                    AlgoSpec::Salsa => salsa(&oracle, &source, k, v, p)?,
                    AlgoSpec::SmallK => small_k_pass(&oracle, &source, k, v)?,
                    AlgoSpec::Dense => schedule_pass(&oracle, &source, k, p.dense_schedule(v, k, n)?)?,
                    AlgoSpec::Fixed => schedule_pass(&oracle, &source, k, p.fixed_schedule(v, k, n)?)?,
                    AlgoSpec::HighLow => schedule_pass(&oracle, &source, k, p.high_low_schedule(v, k, n)?)?,
                    AlgoSpec::TwoPass => two_pass(&oracle, &source, k, v)?,
                    AlgoSpec::PPass(p) => p_pass(&oracle, &source, k, v, p.unwrap_or(1))?,
                    AlgoSpec::Greedy | AlgoSpec::LazyGreedy => unreachable!("offline handled above"),
                }
            }
            OptMode::Guessed => {
                let wrapped = guessed_form(algo, settings)?;
                guess_opt(&wrapped, &oracle, &source, k, settings.eps)?
            }
        }
    };
    Ok(Execution {
        oracle_calls: oracle.stats().eval_count(),
        largest_query: oracle.stats().largest_query(),
        stream_reads: source.reads(),
        stream_passes: source.passes(),
        outcome,
    })
}

fn guessed_form(algo: AlgoSpec, settings: &RunSettings) -> Result<GuessedAlgorithm> {
    Ok(match algo {
        AlgoSpec::Sieve => GuessedAlgorithm::Sieve,
        AlgoSpec::SmallK => GuessedAlgorithm::SmallK,
        AlgoSpec::Salsa => GuessedAlgorithm::Salsa {
            params: settings.salsa.clone(),
        },
        // Two-pass thresholds are exactly those of the 2-pass schedule.
        AlgoSpec::TwoPass => GuessedAlgorithm::PPass { p: 2 },
        AlgoSpec::PPass(p) => GuessedAlgorithm::PPass { p: p.unwrap_or(1) },
        other => {
            return Err(Error::Parameter(format!(
                "{other} has no guessed form; run it with a known OPT"
            )))
        }
    })
}

fn t_min(algo: AlgoSpec, settings: &RunSettings) -> Option<f64> {
    guessed_form(algo, settings).ok().map(|g| g.min_threshold_coefficient())
}

/// Upper bound on live OPT guesses, or 1 when OPT is known.
pub fn guess_count_bound(algo: AlgoSpec, k: usize, settings: &RunSettings) -> usize {
    match (settings.opt_mode, t_min(algo, settings)) {
        (OptMode::Guessed, Some(t)) if !algo.is_offline() => live_guess_bound(k, t, settings.eps),
        _ => 1,
    }
}

/// Largest number of elements the configuration may hold at once.
pub fn memory_bound(algo: AlgoSpec, k: usize, universe: usize, settings: &RunSettings) -> usize {
    if algo.is_offline() {
        return universe;
    }
    algo.candidates() * k * guess_count_bound(algo, k, settings)
}

/// Allowed oracle calls per stream element read: two per live candidate per
/// pass, times the number of live guesses.
pub fn calls_per_element_bound(algo: AlgoSpec, k: usize, settings: &RunSettings) -> Option<f64> {
    if algo.is_offline() {
        return None;
    }
    Some((2 * algo.candidates() * algo.passes() as usize * guess_count_bound(algo, k, settings)) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ordering {
    /// Seeded shuffle per trial.
    Shuffled,
    /// The bundle's canonical order in every trial.
    Fixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub algos: Vec<AlgoSpec>,
    pub ks: Vec<usize>,
    pub trials: u32,
    pub base_seed: u64,
    pub passes: u32,
    pub ordering: Ordering,
    pub settings: RunSettings,
    /// Measure wall time. Off by default so repeated runs are byte-identical.
    pub timing: bool,
    /// Cap for brute-forcing OPT when the bundle does not carry it.
    pub brute_force_cap: u128,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algos: vec![AlgoSpec::Sieve, AlgoSpec::Salsa],
            ks: vec![2],
            trials: 1,
            base_seed: 0,
            passes: 2,
            ordering: Ordering::Shuffled,
            settings: RunSettings::default(),
            timing: false,
            brute_force_cap: crate::exact::DEFAULT_MAX_SUBSETS,
        }
    }
}

/// OPT at capacity `k`: the bundle's own value when it was built for `k`,
/// else brute force when within `cap`.
pub fn resolve_opt(bundle: &InstanceBundle, k: usize, cap: u128) -> Result<Option<f64>> {
    if let Some(known) = bundle.known_opt {
        if bundle.k == k {
            return Ok(Some(known.value));
        }
    }
    let solver = BruteForce {
        monotone: false,
        max_subsets: cap,
    };
    match solver.solve(&bundle.objective, k) {
        Ok(opt) => Ok(Some(opt.value)),
        Err(Error::Size { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs every (algorithm, k, trial) combination. Trial `t` uses seed
/// `base_seed + t`. Records come back sorted by (algo, k, trial).
pub fn run_experiment(bundle: &InstanceBundle, config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    if config.algos.is_empty() || config.ks.is_empty() {
        return Err(Error::Parameter("need at least one algorithm and one k".into()));
    }
    let algos: Vec<AlgoSpec> = config.algos.iter().map(|a| a.resolve(config.passes)).collect();
    let settings = &config.settings;
    let needs_opt = algos.iter().any(|a| !a.is_offline());
    let mut opts: BTreeMap<usize, Option<f64>> = BTreeMap::new();
    for &k in &config.ks {
        let opt = resolve_opt(bundle, k, config.brute_force_cap)?;
        if opt.is_none() && needs_opt && settings.opt_mode == OptMode::Known {
            return Err(Error::MissingOpt(format!(
                "k={k}: the instance carries no optimum for this k and brute force exceeds the cap"
            )));
        }
        opts.insert(k, opt);
    }
    let universe = bundle.universe().len();

    let mut records = Vec::new();
    for trial in 0..config.trials {
        let seed = config.base_seed.wrapping_add(trial as u64);
        let plan = match config.ordering {
            Ordering::Shuffled => shuffle(bundle, seed),
            Ordering::Fixed => StreamPlan::canonical(bundle),
        };
        let stream = plan.ids();
        for &algo in &algos {
            for &k in &config.ks {
                let opt = opts[&k];
                let started = config.timing.then(Instant::now);
                let run = execute(algo, &bundle.objective, &stream, k, opt, settings)?;
                let wall_ms = started.map_or(0, |t| t.elapsed().as_millis() as u64);
                let mode = if algo.is_offline() {
                    OptMode::Known
                } else {
                    settings.opt_mode
                };
                let mut params = BTreeMap::new();
                params.insert("n".to_string(), stream.len().to_string());
                params.insert("size".to_string(), run.outcome.solution.len().to_string());
                params.insert("winner".to_string(), run.outcome.winner.clone());
                params.insert(
                    "order".to_string(),
                    match config.ordering {
                        Ordering::Shuffled => "shuffled",
                        Ordering::Fixed => "fixed",
                    }
                    .to_string(),
                );
                if let Some(opt) = opt {
                    params.insert("opt".to_string(), opt.to_string());
                }
                if let AlgoSpec::PPass(Some(p)) = algo {
                    params.insert("p".to_string(), p.to_string());
                }
                if algo.uses_salsa_params() {
                    params.insert("preset".to_string(), settings.salsa.preset.to_string());
                }
                if mode == OptMode::Guessed {
                    params.insert("eps".to_string(), settings.eps.to_string());
                    params.insert("live_guesses".to_string(), run.outcome.max_live_guesses.to_string());
                }
                params.insert(
                    "memory_bound".to_string(),
                    memory_bound(algo, k, universe, settings).to_string(),
                );
                records.push(RunRecord {
                    algo: algo.to_string(),
                    k,
                    trial,
                    seed,
                    utility: run.outcome.value(),
                    oracle_calls: run.oracle_calls,
                    peak_stored: run.outcome.peak_stored,
                    passes: run.outcome.passes,
                    opt_estimate_mode: mode,
                    wall_ms,
                    params,
                });
            }
        }
    }
    records.sort_by(|a, b| (&a.algo, a.k, a.trial).cmp(&(&b.algo, b.k, b.trial)));
    Ok(records)
}
