//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use monosec::exactalg::{det_rational, mat_det, sturm_count, MPoly, Rational};
use monosec::geometry::{secant_to_osculating_limit_check, FlagMode};
use monosec::harness::{audit, read_results, run, ExperimentConfig, NecklaceSelection, RunSummary, TallyRow};
use monosec::problem_file::{load_problem, LoadedProblem, ProblemFileError};
use monosec::schubert::{schubert_degree, FlagType, InvalidReason, Permutation, SchubertProblem};
use monosec::solvecount::Solver;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{constructed_polynomial, half_grid_count, hook_length_count, q, rational_cofactor};

const MASTER_SEED: u64 = 1;
const DEGREE_TIME_LIMIT: Duration = Duration::from_secs(1);
const LINES_DEGREE: u64 = 2;
const FLAG_DEGREE: u64 = 12;
const LINES_ATTEMPTS: u64 = 1000;
const LINES_MAX_DISCARD_RATE: f64 = 0.01;
const MONOTONE_TARGET: u64 = 50;
const CONTRAST_TARGET: u64 = 100;
const CONTRAST_NECKLACE: &str = "23232323";
const CONTRAST_MIN_BELOW_DEGREE: u64 = 1;
const CONTRAST_MIN_ZERO_REAL: u64 = 5;
const OSCULATING_TARGET: u64 = 50;
const STURM_CASES: usize = 1000;
const STURM_MAX_DEGREE: usize = 12;
const DET_CASES: usize = 500;
const DET_MAX_SIZE: usize = 5;
const HOOK_MAX_A: usize = 3;
const HOOK_MAX_N: usize = 7;
const RESUME_CHUNK: u64 = 37;
const PARALLEL_WORKERS: usize = 4;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, pass: bool, detail: String, started: Instant) {
        if !pass {
            self.failures += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("{verdict} {id:>2} {name}: {detail} ({:.1}s)", started.elapsed().as_secs_f64());
    }
}

fn problem_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn out_path(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let _ = std::fs::remove_file(&path);
    path
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn batch(problem: &LoadedProblem, mode: FlagMode, necklaces: &str, target: u64, out: &Path) -> RunSummary {
    let mut cfg = ExperimentConfig::new(problem.problem.clone(), problem.id.clone(), mode, out);
    cfg.necklaces = necklaces.parse::<NecklaceSelection>().unwrap();
    cfg.target = target;
    cfg.master_seed = MASTER_SEED;
    cfg.workers = workers();
    run(&cfg).unwrap()
}

fn histogram(row: &TallyRow) -> String {
    let parts: Vec<String> = row.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn degrees(r: &mut Report) {
    let t = Instant::now();
    let mut detail = Vec::new();
    let mut pass = true;
    for (file, expected) in [("four_lines.toml", LINES_DEGREE), ("fl23-5.toml", FLAG_DEGREE)] {
        let start = Instant::now();
        let loaded = load_problem(&problem_path(file)).unwrap();
        let d = schubert_degree(&loaded.problem).unwrap();
        let took = start.elapsed();
        pass &= d == expected && took < DEGREE_TIME_LIMIT;
        detail.push(format!("{} = {d} (expected {expected}, {} ms)", loaded.id, took.as_millis()));
    }
    r.line(1, "degree reproduction", pass, detail.join("; "), t);
}

fn lines_secant(r: &mut Report, outputs: &mut Vec<(PathBuf, LoadedProblem)>) {
    let t = Instant::now();
    let loaded = load_problem(&problem_path("four_lines.toml")).unwrap();
    let out = out_path("lines_secant.csv");
    let mut cfg = ExperimentConfig::new(loaded.problem.clone(), loaded.id.clone(), FlagMode::Secant, &out);
    cfg.necklaces = NecklaceSelection::All;
    cfg.target = LINES_ATTEMPTS;
    cfg.attempt_cap = Some(LINES_ATTEMPTS);
    cfg.master_seed = MASTER_SEED;
    cfg.workers = workers();
    let s = run(&cfg).unwrap();
    let row = &s.tally.rows[0];
    let rate = row.discarded() as f64 / row.attempts() as f64;
    let all_two = row.histogram.keys().all(|&k| k as u64 == LINES_DEGREE);
    let pass = row.attempts() == LINES_ATTEMPTS && all_two && rate < LINES_MAX_DISCARD_RATE;
    let detail = format!(
        "{} attempts, {} accepted {}, discard rate {:.3} (limit {LINES_MAX_DISCARD_RATE})",
        row.attempts(),
        row.accepted(),
        histogram(row),
        rate
    );
    outputs.push((out, loaded));
    r.line(2, "secant four lines", pass, detail, t);
}

fn monotone_rows(
    r: &mut Report,
    outputs: &mut Vec<(PathBuf, LoadedProblem)>,
    id: u32,
    name: &str,
    mode: FlagMode,
    target: u64,
    file: &str,
) {
    let t = Instant::now();
    let loaded = load_problem(&problem_path("fl23-5.toml")).unwrap();
    let out = out_path(file);
    let s = batch(&loaded, mode, "monotone", target, &out);
    let row = &s.tally.rows[0];
    let pass = s.tally.rows.len() == 1
        && row.necklace.to_string() == "22223333"
        && row.accepted() == target
        && row.histogram.get(&(FLAG_DEGREE as usize)) == Some(&target);
    let detail = format!(
        "{} accepted of {} attempts, real counts {}",
        row.accepted(),
        row.attempts(),
        histogram(row)
    );
    outputs.push((out, loaded));
    r.line(id, name, pass, detail, t);
}

fn contrast(r: &mut Report, outputs: &mut Vec<(PathBuf, LoadedProblem)>) {
    let t = Instant::now();
    let loaded = load_problem(&problem_path("fl23-5.toml")).unwrap();
    let out = out_path("contrast.csv");
    let s = batch(&loaded, FlagMode::Secant, CONTRAST_NECKLACE, CONTRAST_TARGET, &out);
    let row = &s.tally.rows[0];
    let below: u64 = row.histogram.iter().filter(|(k, _)| (**k as u64) < FLAG_DEGREE).map(|(_, v)| v).sum();
    let zero = row.histogram.get(&0).copied().unwrap_or(0);
    let pass = row.accepted() == CONTRAST_TARGET && below >= CONTRAST_MIN_BELOW_DEGREE && zero >= CONTRAST_MIN_ZERO_REAL;
    let detail = format!(
        "{} accepted, {below} below {FLAG_DEGREE} (need {CONTRAST_MIN_BELOW_DEGREE}), {zero} with 0 real (need {CONTRAST_MIN_ZERO_REAL}), real counts {}",
        row.accepted(),
        histogram(row)
    );
    outputs.push((out, loaded));
    r.line(4, "non-monotone contrast", pass, detail, t);
}

fn invariants(r: &mut Report, outputs: &[(PathBuf, LoadedProblem)]) {
    let t = Instant::now();
    let mut rows = 0;
    let mut violations = 0;
    let mut corrupt = 0;
    for (path, loaded) in outputs {
        let solver = Solver::new(loaded.problem.clone(), loaded.id.clone()).unwrap();
        let found = audit(path, &solver, 0.0).unwrap();
        rows += found.rows;
        corrupt += found.corrupt.len();
        violations += found.parity_violations.len() + found.bound_violations.len();
    }
    let pass = violations == 0 && corrupt == 0 && rows > 0;
    r.line(
        6,
        "parity and bound invariants",
        pass,
        format!("{rows} rows in {} files, {violations} violations, {corrupt} corrupt rows", outputs.len()),
        t,
    );
}

fn oracles(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED);

    let mut sturm_bad = 0;
    for _ in 0..STURM_CASES {
        let degree = rng.gen_range(0..=STURM_MAX_DEGREE);
        let quads = rng.gen_range(0..=degree / 2);
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < degree - 2 * quads {
            let v = rng.gen_range(-20..=20);
            if !roots.contains(&v) {
                roots.push(v);
            }
        }
        let mut qs: Vec<(i64, i64)> = Vec::new();
        while qs.len() < quads {
            let v = (rng.gen_range(-6..=6), rng.gen_range(1..=30));
            if !qs.contains(&v) {
                qs.push(v);
            }
        }
        let scale = if rng.gen_bool(0.5) { 1 } else { -3 };
        let p = constructed_polynomial(&roots, &qs, scale);
        let counted = sturm_count(&p).unwrap();
        if counted != roots.len() || half_grid_count(&p) != roots.len() {
            sturm_bad += 1;
        }
    }

    let mut det_bad = 0;
    for _ in 0..DET_CASES {
        let n = rng.gen_range(1..=DET_MAX_SIZE);
        let m: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..n).map(|_| q(rng.gen_range(-20..=20), rng.gen_range(1..=6))).collect())
            .collect();
        let expected = rational_cofactor(&m);
        let symbolic: Vec<Vec<MPoly>> = m
            .iter()
            .map(|row| row.iter().map(|c| MPoly::constant(1, c.clone())).collect())
            .collect();
        if det_rational(&m).unwrap() != expected || mat_det(&symbolic).unwrap() != MPoly::constant(1, expected) {
            det_bad += 1;
        }
    }

    let mut hook_bad = 0;
    let mut hook_cases = 0;
    for n in 2..=HOOK_MAX_N {
        for a in 1..=HOOK_MAX_A.min(n - 1) {
            let ft = FlagType::new(vec![a], n).unwrap();
            let p = SchubertProblem::new(ft, vec![(Permutation::simple_transposition(n, a), a * (n - a))]);
            hook_cases += 1;
            if schubert_degree(&p).unwrap() as u128 != hook_length_count(a, n - a) {
                hook_bad += 1;
            }
        }
    }
    let pass = sturm_bad == 0 && det_bad == 0 && hook_bad == 0;
    let detail = format!(
        "sturm {}/{STURM_CASES}, det {}/{DET_CASES}, hook-length {}/{hook_cases}",
        STURM_CASES - sturm_bad,
        DET_CASES - det_bad,
        hook_cases - hook_bad
    );
    r.line(7, "oracle suites", pass, detail, t);
}

fn limits(r: &mut Report) {
    let t = Instant::now();
    let points = [q(0, 1), q(1, 1), q(-1, 2)];
    let mut checked = 0;
    let mut failed = Vec::new();
    for (alpha, n) in [(vec![2, 3], 5), (vec![2], 4)] {
        let ft = FlagType::new(alpha.clone(), n).unwrap();
        for &a in &alpha {
            for s in &points {
                checked += 1;
                if !secant_to_osculating_limit_check(a, &ft, s).unwrap() {
                    failed.push(format!("{alpha:?}/{n} a={a} s={s}"));
                }
            }
        }
    }
    let detail = format!("{}/{checked} limits agree {failed:?}", checked - failed.len());
    r.line(8, "secant to osculating limit", failed.is_empty(), detail, t);
}

fn w3x5_problem(r: &mut Report) {
    let t = Instant::now();
    let result = load_problem(&problem_path("fl23-6_w3x5.toml"));
    let pass = matches!(
        result,
        Err(ProblemFileError::Invalid(InvalidReason::LengthMismatch { total: 8, dim: 11 }))
    );
    let detail = match result {
        Err(e) => format!("{e}; a degree of 21 cannot be reproduced from these conditions"),
        Ok(p) => format!("unexpectedly valid: {}", p.id),
    };
    r.line(9, "W^3 X^5 length mismatch flagged", pass, detail, t);
}

fn sorted_file(path: &Path) -> Vec<String> {
    let mut lines: Vec<String> = std::fs::read_to_string(path).unwrap().lines().map(String::from).collect();
    lines.sort();
    lines
}

fn determinism(r: &mut Report) {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    for (file, mode, target, label) in [
        ("four_lines.toml", FlagMode::Secant, 200, "lines"),
        ("fl23-5.toml", FlagMode::Osculating, 1, "flag"),
    ] {
        let loaded = load_problem(&problem_path(file)).unwrap();
        let base = |out: &Path, workers: usize| {
            let mut cfg = ExperimentConfig::new(loaded.problem.clone(), loaded.id.clone(), mode, out);
            cfg.target = target;
            cfg.master_seed = MASTER_SEED;
            cfg.workers = workers;
            cfg.record_timing = false;
            cfg
        };
        let serial = out_path(&format!("{label}_serial.csv"));
        let parallel = out_path(&format!("{label}_parallel.csv"));
        let resumed = out_path(&format!("{label}_resumed.csv"));
        let a = run(&base(&serial, 1)).unwrap();
        let b = run(&base(&parallel, PARALLEL_WORKERS)).unwrap();
        let mut cfg = base(&resumed, PARALLEL_WORKERS);
        cfg.stop_after = Some(if label == "lines" { RESUME_CHUNK } else { 3 });
        let mut interruptions = 0;
        let c = loop {
            let s = run(&cfg).unwrap();
            if !s.interrupted {
                break s;
            }
            interruptions += 1;
        };
        let same = a.tally == b.tally
            && a.tally == c.tally
            && sorted_file(&serial) == sorted_file(&parallel)
            && sorted_file(&serial) == sorted_file(&resumed);
        pass &= same && interruptions > 0;
        notes.push(format!(
            "{label}: {} rows, 1 vs {PARALLEL_WORKERS} workers and {interruptions} interruptions {}",
            read_results(&serial).unwrap().rows.len(),
            if same { "identical" } else { "differ" }
        ));
    }
    r.line(10, "determinism and resume", pass, notes.join("; "), t);
}

fn main() {
    let mut report = Report { failures: 0 };
    let mut outputs = Vec::new();
    println!("acceptance: {} worker thread(s)", workers());
    degrees(&mut report);
    lines_secant(&mut report, &mut outputs);
    monotone_rows(
        &mut report,
        &mut outputs,
        3,
        "monotone secant flagship",
        FlagMode::Secant,
        MONOTONE_TARGET,
        "monotone_secant.csv",
    );
    contrast(&mut report, &mut outputs);
    monotone_rows(
        &mut report,
        &mut outputs,
        5,
        "monotone osculating",
        FlagMode::Osculating,
        OSCULATING_TARGET,
        "monotone_osculating.csv",
    );
    invariants(&mut report, &outputs);
    oracles(&mut report);
    limits(&mut report);
    w3x5_problem(&mut report);
    determinism(&mut report);
    println!("acceptance: {} of 10 criteria failed", report.failures);
    if report.failures > 0 {
        std::process::exit(1);
    }
}
