use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shellgap::bench::{self, ExperimentConfig, OutputFormat, TableId};
use shellgap::gaps::catalog::NAMES;
use shellgap::optimizer::{
    evaluate, grid_search, local_refine, results_csv, Family, FilterStats, GridSpec, SearchConfig,
    SearchOptions, SprtConfig,
};
use shellgap::rng::derive_seed;
use shellgap::{resolve, verify, CostKind};

/// Shellsort gap-sequence laboratory.
#[derive(Debug, Parser)]
#[command(name = "shellgap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the gaps a named sequence uses for arrays of length N.
    Gen {
        /// Sequence name, e.g. tokuda, pratt-23, template-a:<a,b,c,d,e,f>.
        name: String,
        #[arg(long)]
        n: usize,
        /// Print the gaps as a JSON array.
        #[arg(long)]
        json: bool,
    },
    /// Measure operation counts or wall time over random permutations.
    Bench(BenchArgs),
    /// Grid search over template parameters.
    Optimize(OptimizeArgs),
    /// Re-run one of the published tables and compare.
    Reproduce(ReproduceArgs),
    /// Run the chain-pass and structural property suites.
    Verify {
        /// Smaller suites (n <= 6, 500 trials).
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// JSON experiment config. Cannot be combined with inline flags.
    #[arg(long, conflicts_with_all = ["seq", "n", "trials", "cost", "seed", "paired", "format"])]
    config: Option<PathBuf>,
    /// Sequence names (comma-separated or repeated).
    #[arg(long, value_delimiter = ',')]
    seq: Vec<String>,
    /// Array sizes (comma-separated or repeated).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Cost kinds: co, ex, exop, time.
    #[arg(long, value_delimiter = ',')]
    cost: Vec<CostKind>,
    #[arg(long)]
    seed: Option<u64>,
    /// Feed identical permutations to every sequence at a given N.
    #[arg(long)]
    paired: bool,
    /// csv, markdown or json.
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Emit differences against this sequence instead of the report.
    #[arg(long)]
    plot_baseline: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    template: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "co")]
    cost: CostKind,
    /// `default`, `coarse`, or axes such as `a=0.5:5:6,e=0..5,f=0.76`.
    #[arg(long, default_value = "coarse")]
    grid: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refine the best tuple on a local grid around it.
    #[arg(long)]
    refine: bool,
    #[arg(long, default_value_t = 0.25)]
    refine_radius: f64,
    #[arg(long, default_value_t = 5)]
    refine_points: usize,
    /// Sequence whose mean sets the filter threshold.
    #[arg(long, default_value = "tokuda")]
    baseline: String,
    /// Filter threshold as a multiple of the baseline mean.
    #[arg(long, default_value_t = 1.02)]
    threshold_factor: f64,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    #[arg(long, default_value_t = SprtConfig::DEFAULT_MIN_TRIALS)]
    min_trials: usize,
    #[arg(long, default_value_t = SprtConfig::DEFAULT_MAX_TRIALS)]
    max_trials: usize,
    /// Trials for the baseline and for every accepted candidate.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Share permutation streams across candidates.
    #[arg(long)]
    paired: bool,
    /// Resume from and save progress to this file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Candidates per checkpoint batch.
    #[arg(long, default_value_t = 512)]
    batch: usize,
    /// Report progress on stderr after each batch.
    #[arg(long)]
    progress: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    /// small, medium, large, time or inversions.
    #[arg(long)]
    table: TableId,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Exit with status 2 if any deviation exceeds the tolerance (or, for
    /// the time table, if the ordering is not reproduced).
    #[arg(long)]
    strict: bool,
    /// Largest accepted |mean / published - 1|.
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Deviation(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn write_out(out: Option<&PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn gen(name: &str, n: usize, json: bool) -> Outcome {
    let strategy = resolve(name).map_err(|e| format!("{e}; known names: {}", NAMES.join(", ")))?;
    for w in strategy.warnings() {
        eprintln!("warning: {w}");
    }
    let gaps = strategy.gaps_for(n)?;
    if json {
        println!("{}", serde_json::to_string(gaps.gaps())?);
    } else {
        let text: Vec<String> = gaps.gaps().iter().map(ToString::to_string).collect();
        println!("{}", text.join(" "));
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Outcome {
    let cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let mut cfg = ExperimentConfig::new(args.seq, args.n);
            if let Some(t) = args.trials {
                cfg.trials = t;
            }
            if !args.cost.is_empty() {
                cfg.costs = args.cost;
            }
            if let Some(s) = args.seed {
                cfg.seed = s;
            }
            if let Some(f) = args.format {
                cfg.format = f;
            }
            cfg.paired = args.paired;
            cfg.validate()?;
            cfg
        }
    };
    let rows = bench::run_experiment(&cfg)?;
    for r in &rows {
        for w in &r.warnings {
            eprintln!("warning: {} n={}: {w}", r.sequence, r.n);
        }
    }
    let text = match &args.plot_baseline {
        Some(b) => bench::emit_plot_data(&rows, b)?,
        None => bench::render(&rows, cfg.format)?,
    };
    write_out(args.out.as_ref(), &text)
}

fn optimize(args: OptimizeArgs) -> Outcome {
    let spec = GridSpec::parse(args.template, &args.grid)?;
    let baseline = resolve(&args.baseline)?.gaps_for(args.n)?;
    let base_stats = evaluate(
        &baseline,
        args.n,
        args.trials,
        args.cost,
        derive_seed(args.seed, "baseline"),
    )?;
    let mut sprt = SprtConfig::from_baseline(&base_stats);
    sprt.mean_threshold = args.threshold_factor * base_stats.mean;
    sprt.confidence = args.confidence;
    sprt.min_trials = args.min_trials;
    sprt.max_trials = args.max_trials;
    eprintln!(
        "baseline {} at n={}: mean {:.2}, sd {:.2}; threshold {:.2}",
        args.baseline, args.n, base_stats.mean, base_stats.sd, sprt.mean_threshold
    );
    let cfg = SearchConfig {
        spec,
        n: args.n,
        cost: args.cost,
        sprt,
        full_trials: args.trials,
        seed: args.seed,
        top_k: args.top,
        paired: args.paired,
    };
    let report = |s: &FilterStats| {
        eprintln!(
            "processed {}/{} (accepted {}, rejected {})",
            s.processed, s.unique, s.accepted, s.rejected
        );
    };
    let opts = SearchOptions {
        checkpoint: args.checkpoint.clone(),
        batch: args.batch,
        progress: args
            .progress
            .then_some(&report as &(dyn Fn(&FilterStats) + Sync)),
    };
    let outcome = grid_search(&cfg, &opts)?;
    let s = outcome.stats;
    eprintln!(
        "tuples {}, degenerate {}, too short {}, unique {}, accepted {}, rejected {}",
        s.tuples, s.degenerate, s.too_short, s.unique, s.accepted, s.rejected
    );
    if let Some(d) = &outcome.diagnostic {
        eprintln!("{d}");
    }
    let mut results = outcome.results;
    if args.refine {
        if let Some(best) = results.first() {
            let refined = local_refine(
                &best.parameters,
                args.refine_radius,
                args.refine_points,
                &cfg,
            )?;
            eprintln!(
                "refined: {} mean {:.4}",
                refined.parameters, refined.stats.mean
            );
            results.retain(|r| r.key != refined.key);
            results.insert(0, refined);
            for (i, r) in results.iter_mut().enumerate() {
                r.rank = i + 1;
            }
            results.truncate(args.top.max(1));
        }
    }
    write_out(args.out.as_ref(), &results_csv(&results)?)
}

fn reproduce(args: ReproduceArgs) -> Outcome {
    if args.trials == 0 {
        return Err(Failure::Usage("trials must be at least 1".into()));
    }
    let report = bench::reproduce_table(args.table, args.seed, args.trials)?;
    write_out(args.out.as_ref(), &report.to_csv()?)?;
    if let Some(holds) = report.ordering_holds {
        eprintln!("published ordering reproduced: {holds}");
        if args.strict && !holds {
            return Err(Failure::Deviation(
                "timing order differs from the published one".into(),
            ));
        }
        return Ok(());
    }
    let bad = report.exceeding(args.tolerance);
    eprintln!(
        "max |deviation| {:.4}; {} cells above {}",
        report.max_abs_deviation(),
        bad.len(),
        args.tolerance
    );
    if args.strict && !bad.is_empty() {
        for r in &bad {
            eprintln!(
                "  {} n={} {}: {:.2} vs {:.2}",
                r.sequence,
                r.n,
                r.cost,
                r.mean,
                r.published_mean.unwrap_or(f64::NAN)
            );
        }
        return Err(Failure::Deviation(format!(
            "{} cells outside tolerance",
            bad.len()
        )));
    }
    Ok(())
}

fn run_verify(quick: bool, seed: u64) -> Outcome {
    let suites = verify::standard_suites(seed, quick);
    for s in &suites {
        println!("{s}");
    }
    let failed = suites.iter().filter(|s| !s.passed()).count();
    if failed > 0 {
        return Err(Failure::Deviation(format!("{failed} suites failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Gen { name, n, json } => gen(&name, n, json),
        Command::Bench(args) => bench(args),
        Command::Optimize(args) => optimize(args),
        Command::Reproduce(args) => reproduce(args),
        Command::Verify { quick, seed } => run_verify(quick, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Deviation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
