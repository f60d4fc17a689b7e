use clap::{Args, Parser, Subcommand};
use dmea::benchmarks::Benchmark;
use dmea::engine::{Algorithm, SelectMode};
use dmea::harness::{
    aggregate, convergence, read_csv, read_records, run_experiment_to_dir, summarize, sweep_configs,
    wilcoxon_signed_rank, Alternative, ExperimentConfig, ResultRow, ETA_GRID, RESULTS_FILE,
};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dmea", version, about = "Batch Bayesian optimization experiments with DMEA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated runs of one algorithm on one problem.
    Run(RunArgs),
    /// DMEA over an η grid plus the random-select ablation.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated η values.
        #[arg(long, value_delimiter = ',', default_values_t = ETA_GRID)]
        etas: Vec<f64>,
    },
    /// One-sided Wilcoxon signed-rank tests between two result directories, paired by seed.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Alternative hypothesis: `less` means A reaches lower regret than B.
        #[arg(long, default_value = "less")]
        alternative: String,
    },
    /// Summary table and convergence CSV for a result directory.
    Report {
        dir: PathBuf,
        /// Where to write summary.csv, summary.json and convergence.csv (defaults to DIR).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Benchmark problems with dimension, bounds and optimum.
    ListProblems,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value = "branin")]
    problem: String,
    /// dmea, ei-lp or random-search.
    #[arg(long, default_value = "dmea")]
    algorithm: String,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 45)]
    iters: usize,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// preferred or random.
    #[arg(long, default_value = "preferred")]
    select: String,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Base seed; repetition i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Initial design size, replacing 11·d − 1.
    #[arg(long)]
    n_init: Option<usize>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

impl RunArgs {
    fn config(&self) -> dmea::Result<ExperimentConfig> {
        let problem: Benchmark = self.problem.parse()?;
        Ok(ExperimentConfig {
            problem: problem.name().to_string(),
            algorithm: self.algorithm.parse::<Algorithm>()?,
            k: self.k,
            iterations: self.iters,
            eta: self.eta,
            select_mode: self.select.parse::<SelectMode>()?,
            repetitions: self.reps,
            base_seed: self.seed,
            n_init: self.n_init,
        })
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run(args) => {
            let config = args.config()?;
            execute(&config, args.jobs, &args.out)?;
        }
        Command::Sweep { run, etas } => {
            let base = run.config()?;
            for config in sweep_configs(&base, &etas) {
                let dir = run.out.join(format!("eta{}_{}", config.eta, config.select_mode));
                execute(&config, run.jobs, &dir)?;
            }
        }
        Command::Compare { a, b, alternative } => compare(&a, &b, &alternative)?,
        Command::Report { dir, out } => report(&dir, out.as_deref().unwrap_or(&dir))?,
        Command::ListProblems => {
            println!("{:<16} {:>3}  {:<28} {:>22}", "problem", "d", "bounds", "f*");
            for b in Benchmark::ALL {
                let (lo, hi) = b.bounds()[0];
                let uniform = b.bounds().iter().all(|&r| r == (lo, hi));
                let bounds = if uniform {
                    format!("[{lo}, {hi}]^{}", b.dim())
                } else {
                    b.bounds().iter().map(|(l, h)| format!("[{l}, {h}]")).collect::<Vec<_>>().join("x")
                };
                println!("{:<16} {:>3}  {:<28} {:>22}", b.name(), b.dim(), bounds, b.f_star());
            }
        }
    }
    Ok(())
}

fn execute(config: &ExperimentConfig, jobs: usize, out: &Path) -> dmea::Result<()> {
    let outcomes = run_experiment_to_dir(config, jobs, out)?;
    let f_star = config.benchmark()?.f_star();
    let finals: Vec<f64> = outcomes.iter().map(|o| o.record.final_regret(f_star)).collect();
    let s = summarize(&finals).expect("at least one repetition");
    println!(
        "{} {} k={} eta={} select={}: {} runs, mean regret {:.4e}, median {:.4e}, std {:.4e} -> {}",
        config.problem,
        config.algorithm,
        config.k,
        config.eta,
        config.select_mode,
        s.n,
        s.mean,
        s.median,
        s.std,
        out.display()
    );
    Ok(())
}

type Cell = (String, usize);

fn by_cell(dir: &Path) -> dmea::Result<BTreeMap<Cell, BTreeMap<u64, f64>>> {
    let mut cells: BTreeMap<Cell, BTreeMap<u64, f64>> = BTreeMap::new();
    for row in read_csv(&dir.join(RESULTS_FILE))? {
        let ResultRow { problem, k, seed, final_regret, .. } = row;
        cells.entry((problem, k)).or_default().insert(seed, final_regret);
    }
    Ok(cells)
}

fn compare(a: &Path, b: &Path, alternative: &str) -> Result<(), Box<dyn std::error::Error>> {
    let alt = match alternative {
        "less" => Alternative::Less,
        "greater" => Alternative::Greater,
        other => return Err(format!("unknown alternative `{other}` (less or greater)").into()),
    };
    let (ca, cb) = (by_cell(a)?, by_cell(b)?);
    println!("problem,k,pairs,w_plus,p_value,method,degenerate");
    for (cell, runs_a) in &ca {
        let Some(runs_b) = cb.get(cell) else { continue };
        let (xa, xb): (Vec<f64>, Vec<f64>) =
            runs_a.iter().filter_map(|(seed, ra)| runs_b.get(seed).map(|rb| (*ra, *rb))).unzip();
        match wilcoxon_signed_rank(&xa, &xb, alt) {
            Ok(r) => println!(
                "{},{},{},{},{:.6e},{:?},{}",
                cell.0,
                cell.1,
                xa.len(),
                r.w_plus,
                r.p_value,
                r.method,
                r.degenerate
            ),
            Err(e) => eprintln!("{} k={}: {e}", cell.0, cell.1),
        }
    }
    Ok(())
}

fn f_star(name: &str) -> dmea::Result<f64> {
    Ok(name.parse::<Benchmark>()?.f_star())
}

fn report(dir: &Path, out: &Path) -> Result<(), Box<dyn std::error::Error>> {
    let records = read_records(dir)?;
    let rows = aggregate(&records, f_star)?;
    std::fs::create_dir_all(out)?;
    let mut w = csv::Writer::from_path(out.join("summary.csv"))?;
    w.write_record(["problem", "algorithm", "k", "eta", "select_mode", "n", "mean", "median", "std", "min", "max"])?;
    for r in &rows {
        let s = &r.summary;
        w.write_record([
            r.problem.clone(),
            r.algorithm.to_string(),
            r.k.to_string(),
            r.eta.to_string(),
            r.select_mode.to_string(),
            s.n.to_string(),
            s.mean.to_string(),
            s.median.to_string(),
            s.std.to_string(),
            s.min.to_string(),
            s.max.to_string(),
        ])?;
    }
    w.flush()?;
    std::fs::write(out.join("summary.json"), serde_json::to_string_pretty(&rows)?)?;
    let mut w = csv::Writer::from_path(out.join("convergence.csv"))?;
    for p in convergence(&records, f_star)? {
        w.serialize(p)?;
    }
    w.flush()?;
    println!("{:<16} {:<14} {:>3} {:>6} {:<10} {:>4} {:>12} {:>12} {:>12}", "problem", "algorithm", "k", "eta", "select", "n", "mean", "median", "std");
    for r in &rows {
        println!(
            "{:<16} {:<14} {:>3} {:>6} {:<10} {:>4} {:>12.4e} {:>12.4e} {:>12.4e}",
            r.problem,
            r.algorithm.to_string(),
            r.k,
            r.eta,
            r.select_mode.to_string(),
            r.summary.n,
            r.summary.mean,
            r.summary.median,
            r.summary.std
        );
    }
    Ok(())
}
