use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use monosec::geometry::FlagMode;
use monosec::harness::{
    audit, read_results, report, run, ExperimentConfig, HarnessError, NecklaceSelection, ReportFormat, Tally,
};
use monosec::problem_file::{load_problem, LoadedProblem, ProblemFileError};
use monosec::schubert::{enumerate_necklaces, Necklace};
use monosec::solvecount::{instance_seed, Solver};

#[derive(Parser)]
#[command(name = "monosec", version, about = "Count real solutions of Schubert problems given by secant flags")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the number of complex solutions.
    Degree { problem: PathBuf },
    /// List necklaces, monotone ones first.
    Necklaces { problem: PathBuf },
    /// Solve a single instance.
    SolveOne {
        problem: PathBuf,
        #[arg(long)]
        necklace: String,
        /// Master seed; the instance seed is derived from it, the necklace and the index.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "secant")]
        mode: FlagMode,
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
    /// Run a batch experiment, appending to a results file.
    Run {
        #[arg(long)]
        problem: PathBuf,
        /// Accepted instances per necklace.
        #[arg(long)]
        instances: u64,
        /// `all`, `monotone`, or a comma-separated list.
        #[arg(long, default_value = "all")]
        necklaces: String,
        #[arg(long, default_value = "secant")]
        mode: FlagMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "MONOSEC_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Attempts per necklace (default four times --instances).
        #[arg(long)]
        attempt_cap: Option<u64>,
        /// Write 0 for elapsed_ms so repeated runs produce identical files.
        #[arg(long)]
        no_timing: bool,
    },
    /// Render a results file as a necklace table.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "markdown")]
        format: ReportFormat,
        /// Fixes the column range to the problem's degree.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
    /// Check invariants of a results file and recompute a sample of rows.
    Audit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        fraction: f64,
    },
}

enum Failure {
    Parse(String),
    Invalid(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Invalid(_) => 3,
            Failure::Runtime(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Invalid(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<ProblemFileError> for Failure {
    fn from(e: ProblemFileError) -> Self {
        if e.is_parse_error() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) | HarnessError::Schubert(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn solver_for(loaded: &LoadedProblem) -> Result<Solver, Failure> {
    Solver::new(loaded.problem.clone(), loaded.id.clone()).map_err(|e| Failure::Invalid(e.to_string()))
}

fn necklace_of(loaded: &LoadedProblem, text: &str) -> Result<Necklace, Failure> {
    let nk: Necklace = text.parse().map_err(|e| Failure::Parse(format!("{e}")))?;
    let all = enumerate_necklaces(&loaded.problem).map_err(|e| Failure::Invalid(e.to_string()))?;
    if !all.contains(&nk) {
        return Err(Failure::Invalid(format!("necklace {nk} does not belong to {}", loaded.id)));
    }
    Ok(nk)
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Degree { problem } => {
            let loaded = load_problem(&problem)?;
            println!("{}", solver_for(&loaded)?.degree());
        }
        Command::Necklaces { problem } => {
            let loaded = load_problem(&problem)?;
            for nk in enumerate_necklaces(&loaded.problem).map_err(|e| Failure::Invalid(e.to_string()))? {
                if nk.is_monotone() {
                    println!("{nk} (monotone)");
                } else {
                    println!("{nk}");
                }
            }
        }
        Command::SolveOne {
            problem,
            necklace,
            seed,
            mode,
            index,
        } => {
            let loaded = load_problem(&problem)?;
            let solver = solver_for(&loaded)?;
            let nk = necklace_of(&loaded, &necklace)?;
            let r = solver
                .solve(&nk, mode, instance_seed(seed, &nk, index), index)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            let mut line = r.status.to_string();
            if let Some(real) = r.num_real {
                line += &format!(", real={real}");
            }
            match r.eliminant_degree {
                Some(d) => line += &format!(", degree={d}"),
                None => line += ", degree=-",
            }
            println!("{line}, seed={}, elapsed_ms={}", r.seed, r.elapsed_ms);
        }
        Command::Run {
            problem,
            instances,
            necklaces,
            mode,
            seed,
            jobs,
            out,
            attempt_cap,
            no_timing,
        } => {
            let loaded = load_problem(&problem)?;
            let mut cfg = ExperimentConfig::new(loaded.problem, loaded.id, mode, out);
            cfg.necklaces = necklaces
                .parse::<NecklaceSelection>()
                .map_err(|e| Failure::Parse(e.to_string()))?;
            cfg.target = instances;
            cfg.attempt_cap = attempt_cap;
            cfg.master_seed = seed;
            cfg.workers = jobs.unwrap_or_else(default_jobs);
            cfg.record_timing = !no_timing;
            let summary = run(&cfg)?;
            print!("{}", report(&summary.tally, ReportFormat::Markdown));
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            for nk in &summary.capped {
                let accepted = summary.tally.row(nk).map_or(0, |r| r.accepted());
                eprintln!("attempt cap {} reached for {nk}: {accepted}/{instances} accepted", cfg.cap());
            }
        }
        Command::Report {
            input,
            format,
            problem,
        } => {
            let degree = match problem {
                Some(p) => Some(solver_for(&load_problem(&p)?)?.degree()),
                None => None,
            };
            let file = read_results(&input)?;
            if let Some((line, message)) = file.corrupt.first() {
                return Err(Failure::Runtime(format!("{}, line {line}: {message}", input.display())));
            }
            let tally = Tally::from_results(file.rows.iter().map(|(_, r)| r), degree);
            print!("{}", report(&tally, format));
        }
        Command::Audit {
            input,
            problem,
            fraction,
        } => {
            let solver = solver_for(&load_problem(&problem)?)?;
            let found = audit(Path::new(&input), &solver, fraction)?;
            println!("rows: {}", found.rows);
            println!("recomputed: {}, mismatches: 0", found.recomputed);
            for (line, message) in &found.corrupt {
                println!("corrupt row at line {line}: {message}");
            }
            for line in &found.parity_violations {
                println!("parity violation at line {line}");
            }
            for line in &found.bound_violations {
                println!("bound violation at line {line}");
            }
            for (nk, attempts, discarded) in &found.discard_rates {
                println!("{nk}: {discarded}/{attempts} discarded");
            }
            if !found.is_clean() {
                return Err(Failure::Runtime("audit found problems".to_string()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
