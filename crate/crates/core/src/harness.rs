//! Batch runs over necklaces with an append-only CSV of results.
//!
//! Every attempt is seeded from (master seed, necklace, index), so a run is a
//! pure function of its configuration. For each necklace the coordinator
//! commits results in index order and stops at the first index where the
//! target is met; the file is therefore the same for any worker count and
//! across interrupted runs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crossbeam_channel::unbounded;
use thiserror::Error;

use crate::geometry::{FlagMode, SamplingConfig};
use crate::schubert::{enumerate_necklaces, validate_problem, Necklace, SchubertError, SchubertProblem, Validity};
use crate::solvecount::{instance_seed, DiscardReason, InstanceResult, SolveError, Solver, Status};

pub const RESULTS_HEADER: [&str; 8] = [
    "problem_id",
    "necklace",
    "mode",
    "instance_index",
    "seed",
    "status",
    "num_real",
    "elapsed_ms",
];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Schubert(#[from] SchubertError),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}, line {line}: {message}")]
    Corrupt { path: PathBuf, line: usize, message: String },
    #[error("line {line}: seed {found} does not match the configured master seed (expected {expected})")]
    SeedMismatch { line: usize, expected: u64, found: u64 },
    #[error("necklace {necklace}, instance {index}: {source}")]
    Solve {
        necklace: Necklace,
        index: u64,
        source: SolveError,
    },
    #[error("line {line}: recomputed {recomputed}, file has {recorded}")]
    Mismatch { line: usize, recorded: String, recomputed: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NecklaceSelection {
    All,
    MonotoneOnly,
    Explicit(Vec<Necklace>),
}

impl FromStr for NecklaceSelection {
    type Err = SchubertError;

    /// `all`, `monotone`, or a comma-separated list of necklaces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "all" => Ok(NecklaceSelection::All),
            "monotone" | "monotone-only" => Ok(NecklaceSelection::MonotoneOnly),
            list => list
                .split(',')
                .map(Necklace::from_str)
                .collect::<Result<_, _>>()
                .map(NecklaceSelection::Explicit),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub problem: SchubertProblem,
    pub problem_id: String,
    pub mode: FlagMode,
    pub necklaces: NecklaceSelection,
    /// Accepted instances wanted per necklace.
    pub target: u64,
    /// Attempts allowed per necklace; `None` means four times the target.
    pub attempt_cap: Option<u64>,
    pub master_seed: u64,
    pub workers: usize,
    pub output: PathBuf,
    pub sampling: SamplingConfig,
    /// When false, `elapsed_ms` is written as 0 so that files compare bitwise.
    pub record_timing: bool,
    /// Stop after writing this many new rows, as if interrupted.
    pub stop_after: Option<u64>,
    /// Warn when a necklace's share of degree-drop discards exceeds this.
    pub degree_drop_warning: f64,
}

impl ExperimentConfig {
    pub fn new(problem: SchubertProblem, problem_id: impl Into<String>, mode: FlagMode, output: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            problem,
            problem_id: problem_id.into(),
            mode,
            necklaces: NecklaceSelection::All,
            target: 1,
            attempt_cap: None,
            master_seed: 0,
            workers: 1,
            output: output.into(),
            sampling: SamplingConfig::default(),
            record_timing: true,
            stop_after: None,
            degree_drop_warning: 0.05,
        }
    }

    pub fn cap(&self) -> u64 {
        self.attempt_cap.unwrap_or(self.target.saturating_mul(4))
    }

    /// The selected necklaces in tally order.
    pub fn selected_necklaces(&self) -> Result<Vec<Necklace>, HarnessError> {
        let all = enumerate_necklaces(&self.problem)?;
        Ok(match &self.necklaces {
            NecklaceSelection::All => all,
            NecklaceSelection::MonotoneOnly => all.into_iter().filter(Necklace::is_monotone).collect(),
            NecklaceSelection::Explicit(list) => {
                let mut chosen: Vec<Necklace> = Vec::new();
                for nk in list {
                    if !all.contains(nk) {
                        return Err(HarnessError::Config(format!("necklace {nk} does not belong to the problem")));
                    }
                    if !chosen.contains(nk) {
                        chosen.push(nk.clone());
                    }
                }
                chosen.sort_by_key(|nk| (!nk.is_monotone(), nk.clone()));
                chosen
            }
        })
    }
}

/// Counts for one necklace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TallyRow {
    pub necklace: Necklace,
    /// Accepted instances by number of real solutions.
    pub histogram: BTreeMap<usize, u64>,
    pub discards: BTreeMap<DiscardReason, u64>,
}

impl TallyRow {
    pub fn new(necklace: Necklace) -> Self {
        TallyRow {
            necklace,
            ..Default::default()
        }
    }

    pub fn record(&mut self, r: &InstanceResult) {
        match (r.status, r.num_real) {
            (Status::Accepted, Some(real)) => *self.histogram.entry(real).or_default() += 1,
            (Status::Discarded(reason), _) => *self.discards.entry(reason).or_default() += 1,
            (Status::Accepted, None) => {}
        }
    }

    pub fn accepted(&self) -> u64 {
        self.histogram.values().sum()
    }

    pub fn discarded(&self) -> u64 {
        self.discards.values().sum()
    }

    pub fn attempts(&self) -> u64 {
        self.accepted() + self.discarded()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    pub degree: u64,
    pub rows: Vec<TallyRow>,
}

impl Tally {
    pub fn new(degree: u64) -> Self {
        Tally { degree, rows: Vec::new() }
    }

    /// Real-solution counts of the right parity, `degree mod 2` to `degree`.
    pub fn columns(&self) -> Vec<usize> {
        ((self.degree % 2) as usize..=self.degree as usize).step_by(2).collect()
    }

    /// Tally of result rows. Without a known degree it is taken to be the
    /// largest observed count.
    pub fn from_results<'a>(results: impl IntoIterator<Item = &'a InstanceResult>, degree: Option<u64>) -> Self {
        let mut rows: BTreeMap<(bool, Necklace), TallyRow> = BTreeMap::new();
        let mut max_seen = 0;
        for r in results {
            max_seen = max_seen.max(r.num_real.unwrap_or(0) as u64);
            rows.entry((!r.necklace.is_monotone(), r.necklace.clone()))
                .or_insert_with(|| TallyRow::new(r.necklace.clone()))
                .record(r);
        }
        Tally {
            degree: degree.unwrap_or(max_seen),
            rows: rows.into_values().collect(),
        }
    }

    pub fn total(&self) -> TallyRow {
        let mut total = TallyRow::default();
        for row in &self.rows {
            for (k, v) in &row.histogram {
                *total.histogram.entry(*k).or_default() += v;
            }
            for (k, v) in &row.discards {
                *total.discards.entry(*k).or_default() += v;
            }
        }
        total
    }

    pub fn row(&self, nk: &Necklace) -> Option<&TallyRow> {
        self.rows.iter().find(|r| &r.necklace == nk)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected markdown or csv)")),
        }
    }
}

/// Necklaces against real counts, one row per necklace plus a total row.
pub fn report(tally: &Tally, format: ReportFormat) -> String {
    let columns = tally.columns();
    let mut header = vec!["Necklace".to_string()];
    header.extend(columns.iter().map(|c| c.to_string()));
    header.push("Total".to_string());
    let mut body: Vec<Vec<String>> = Vec::new();
    let cells = |label: String, row: &TallyRow| {
        let mut line = vec![label];
        line.extend(columns.iter().map(|c| row.histogram.get(c).copied().unwrap_or(0).to_string()));
        line.push(row.accepted().to_string());
        line
    };
    for row in &tally.rows {
        body.push(cells(row.necklace.to_string(), row));
    }
    if !tally.rows.is_empty() {
        body.push(cells("Total".to_string(), &tally.total()));
    }
    match format {
        ReportFormat::Markdown => {
            let mut out = String::new();
            let _ = writeln!(out, "| {} |", header.join(" | "));
            let align: Vec<&str> = std::iter::once("---")
                .chain(std::iter::repeat("---:").take(header.len() - 1))
                .collect();
            let _ = writeln!(out, "|{}|", align.join("|"));
            for line in body {
                let _ = writeln!(out, "| {} |", line.join(" | "));
            }
            out
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("writing to memory");
            for line in body {
                w.write_record(&line).expect("writing to memory");
            }
            String::from_utf8(w.into_inner().expect("writing to memory")).expect("ASCII output")
        }
    }
}

/// Parsed contents of a results file.
#[derive(Clone, Debug, Default)]
pub struct ResultsFile {
    /// Rows with their 1-based line numbers.
    pub rows: Vec<(usize, InstanceResult)>,
    pub corrupt: Vec<(usize, String)>,
}

pub fn parse_results(text: &str) -> ResultsFile {
    let mut out = ResultsFile::default();
    if text.is_empty() {
        return out;
    }
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    if complete.len() < text.len() {
        out.corrupt.push((complete.lines().count() + 1, "truncated row".to_string()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(complete.as_bytes());
    for (i, record) in reader.records().enumerate() {
        let line = i + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                out.corrupt.push((line, e.to_string()));
                continue;
            }
        };
        let line = record.position().map_or(line, |p| p.line() as usize);
        if line == 1 {
            if record.iter().ne(RESULTS_HEADER) {
                out.corrupt.push((line, "unexpected header".to_string()));
            }
            continue;
        }
        match parse_row(&record) {
            Ok(r) => out.rows.push((line, r)),
            Err(message) => out.corrupt.push((line, message)),
        }
    }
    out
}

fn parse_row(record: &csv::StringRecord) -> Result<InstanceResult, String> {
    if record.len() != RESULTS_HEADER.len() {
        return Err(format!("expected {} fields, found {}", RESULTS_HEADER.len(), record.len()));
    }
    let int = |i: usize| -> Result<u64, String> {
        record[i]
            .parse::<u64>()
            .map_err(|_| format!("{} `{}` is not a non-negative integer", RESULTS_HEADER[i], &record[i]))
    };
    let status: Status = record[5].parse()?;
    let num_real = match (&record[6], status.is_accepted()) {
        ("", false) => None,
        (_, false) => return Err("discarded row carries a real count".to_string()),
        ("", true) => return Err("accepted row without a real count".to_string()),
        (_, true) => Some(int(6)? as usize),
    };
    Ok(InstanceResult {
        problem_id: record[0].to_string(),
        necklace: record[1].parse().map_err(|e: SchubertError| e.to_string())?,
        mode: record[2].parse()?,
        instance_index: int(3)?,
        seed: int(4)?,
        status,
        num_real,
        eliminant_degree: None,
        elapsed_ms: int(7)?,
    })
}

pub fn read_results(path: &Path) -> Result<ResultsFile, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(parse_results(&text))
}

fn row_fields(r: &InstanceResult, record_timing: bool) -> [String; 8] {
    [
        r.problem_id.clone(),
        r.necklace.to_string(),
        r.mode.to_string(),
        r.instance_index.to_string(),
        r.seed.to_string(),
        r.status.to_string(),
        r.num_real.map(|k| k.to_string()).unwrap_or_default(),
        if record_timing { r.elapsed_ms } else { 0 }.to_string(),
    ]
}

/// Opens the results file for appending, dropping a partial last line and
/// writing the header into a new file. Returns the rows already present.
fn open_results(path: &Path) -> Result<(csv::Writer<File>, ResultsFile), HarnessError> {
    let text = match std::fs::read(path) {
        Ok(bytes) => String::from_utf8(bytes).map_err(|_| HarnessError::Corrupt {
            path: path.to_path_buf(),
            line: 0,
            message: "not UTF-8".to_string(),
        })?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(io_err(path)(e)),
    };
    let keep = text.rfind('\n').map_or(0, |i| i + 1);
    let existing = parse_results(&text[..keep]);
    if let Some((line, message)) = existing.corrupt.first() {
        return Err(HarnessError::Corrupt {
            path: path.to_path_buf(),
            line: *line,
            message: message.clone(),
        });
    }
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err(path))?;
    file.set_len(keep as u64).map_err(io_err(path))?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if keep == 0 {
        writer.write_record(RESULTS_HEADER).map_err(|e| csv_io(path, e))?;
        writer.flush().map_err(io_err(path))?;
    }
    Ok((writer, existing))
}

fn csv_io(path: &Path, e: csv::Error) -> HarnessError {
    io_err(path)(std::io::Error::other(e))
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub tally: Tally,
    /// Necklaces whose attempt cap was reached before the target.
    pub capped: Vec<Necklace>,
    pub new_rows: u64,
    /// True when `stop_after` ended the run early.
    pub interrupted: bool,
    pub warnings: Vec<String>,
}

type Job = (usize, u64);
type Done = (usize, u64, Result<InstanceResult, SolveError>);

pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    if cfg.target == 0 {
        return Err(HarnessError::Config("target must be at least 1".to_string()));
    }
    if let Validity::Invalid(reason) = validate_problem(&cfg.problem) {
        return Err(SchubertError::Invalid(reason).into());
    }
    cfg.problem.require_simple()?;
    let necklaces = cfg.selected_necklaces()?;
    let solver = Solver::new(cfg.problem.clone(), cfg.problem_id.clone())
        .map_err(|e| HarnessError::Config(e.to_string()))?
        .with_sampling(cfg.sampling.clone());
    let (mut writer, existing) = open_results(&cfg.output)?;

    let position: HashMap<&Necklace, usize> = necklaces.iter().enumerate().map(|(i, nk)| (nk, i)).collect();
    let mut known: HashMap<Job, InstanceResult> = HashMap::new();
    for (line, r) in existing.rows {
        if r.problem_id != cfg.problem_id || r.mode != cfg.mode {
            continue;
        }
        if let Some(&k) = position.get(&r.necklace) {
            let expected = instance_seed(cfg.master_seed, &r.necklace, r.instance_index);
            if r.seed != expected {
                return Err(HarnessError::SeedMismatch {
                    line,
                    expected,
                    found: r.seed,
                });
            }
            known.insert((k, r.instance_index), r);
        }
    }

    let cap = cfg.cap();
    let workers = cfg.workers.max(1);
    let mut summary = RunSummary {
        tally: Tally::new(solver.degree()),
        capped: Vec::new(),
        new_rows: 0,
        interrupted: false,
        warnings: Vec::new(),
    };

    std::thread::scope(|scope| -> Result<(), HarnessError> {
        let (job_tx, job_rx) = unbounded::<Job>();
        let (done_tx, done_rx) = unbounded::<Done>();
        for _ in 0..workers {
            let (job_rx, done_tx) = (job_rx.clone(), done_tx.clone());
            let (solver, necklaces) = (&solver, &necklaces);
            scope.spawn(move || {
                for (k, index) in job_rx {
                    let nk = &necklaces[k];
                    let seed = instance_seed(cfg.master_seed, nk, index);
                    if done_tx.send((k, index, solver.solve(nk, cfg.mode, seed, index))).is_err() {
                        break;
                    }
                }
            });
        }
        drop(done_tx);

        let mut in_flight = 0usize;
        let outcome = (|| {
            for (k, nk) in necklaces.iter().enumerate() {
                let mut row = TallyRow::new(nk.clone());
                let mut buffered: BTreeMap<u64, Result<InstanceResult, SolveError>> = BTreeMap::new();
                let (mut next, mut dispatched) = (0u64, 0u64);
                while row.accepted() < cfg.target && next < cap {
                    if let Some(r) = known.get(&(k, next)) {
                        row.record(r);
                        next += 1;
                        continue;
                    }
                    if let Some(r) = buffered.remove(&next) {
                        let r = r.map_err(|source| HarnessError::Solve {
                            necklace: nk.clone(),
                            index: next,
                            source,
                        })?;
                        writer
                            .write_record(row_fields(&r, cfg.record_timing))
                            .map_err(|e| csv_io(&cfg.output, e))?;
                        writer.flush().map_err(io_err(&cfg.output))?;
                        row.record(&r);
                        summary.new_rows += 1;
                        next += 1;
                        if cfg.stop_after.is_some_and(|s| summary.new_rows >= s) {
                            summary.interrupted = true;
                            break;
                        }
                        continue;
                    }
                    dispatched = dispatched.max(next);
                    while in_flight < 2 * workers && dispatched < cap {
                        if !known.contains_key(&(k, dispatched)) {
                            job_tx.send((k, dispatched)).expect("workers outlive the coordinator");
                            in_flight += 1;
                        }
                        dispatched += 1;
                    }
                    let (kk, index, r) = done_rx.recv().expect("a job is in flight");
                    in_flight -= 1;
                    if kk == k {
                        buffered.insert(index, r);
                    }
                }
                if row.attempts() > 0 {
                    let drops = row.discards.get(&DiscardReason::DegreeDrop).copied().unwrap_or(0);
                    if drops as f64 > cfg.degree_drop_warning * row.attempts() as f64 {
                        summary.warnings.push(format!(
                            "{nk}: {drops} of {} attempts lost degree",
                            row.attempts()
                        ));
                    }
                    summary.tally.rows.push(row.clone());
                }
                if summary.interrupted {
                    break;
                }
                if row.accepted() < cfg.target {
                    summary.capped.push(nk.clone());
                }
            }
            Ok(())
        })();
        drop(job_tx);
        outcome
    })?;
    Ok(summary)
}

/// What `audit` found in a results file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub rows: usize,
    pub corrupt: Vec<(usize, String)>,
    /// Rows of another problem; not checked.
    pub foreign: usize,
    pub parity_violations: Vec<usize>,
    pub bound_violations: Vec<usize>,
    pub recomputed: usize,
    /// Per necklace: attempts and discards.
    pub discard_rates: Vec<(Necklace, u64, u64)>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.corrupt.is_empty() && self.parity_violations.is_empty() && self.bound_violations.is_empty()
    }
}

/// Checks every row of `path` against the solver's problem and recomputes
/// `fraction` of them from their recorded seeds. A recomputation that
/// disagrees with the file is an error.
pub fn audit(path: &Path, solver: &Solver, fraction: f64) -> Result<AuditReport, HarnessError> {
    let file = read_results(path)?;
    let degree = solver.degree() as usize;
    let mut report = AuditReport {
        rows: file.rows.len(),
        corrupt: file.corrupt,
        ..Default::default()
    };
    let mut mine = Vec::new();
    for (line, r) in &file.rows {
        if r.problem_id != solver.problem_id() {
            report.foreign += 1;
            continue;
        }
        if let Some(real) = r.num_real {
            if real % 2 != degree % 2 {
                report.parity_violations.push(*line);
            }
            if real > degree {
                report.bound_violations.push(*line);
            }
        }
        mine.push((*line, r));
    }
    let tally = Tally::from_results(mine.iter().map(|(_, r)| *r), Some(solver.degree()));
    report.discard_rates = tally
        .rows
        .iter()
        .map(|row| (row.necklace.clone(), row.attempts(), row.discarded()))
        .collect();

    let count = ((fraction.clamp(0.0, 1.0) * mine.len() as f64).round() as usize).min(mine.len());
    for j in 0..count {
        let (line, r) = mine[j * mine.len() / count];
        let again = solver
            .solve(&r.necklace, r.mode, r.seed, r.instance_index)
            .map_err(|source| HarnessError::Solve {
                necklace: r.necklace.clone(),
                index: r.instance_index,
                source,
            })?;
        if again.status != r.status || again.num_real != r.num_real {
            let show = |x: &InstanceResult| format!("{} real={:?}", x.status, x.num_real);
            return Err(HarnessError::Mismatch {
                line,
                recorded: show(r),
                recomputed: show(&again),
            });
        }
        report.recomputed += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schubert::{FlagType, Permutation};

    fn four_lines() -> SchubertProblem {
        let ft = FlagType::new(vec![2], 4).unwrap();
        SchubertProblem::new(ft, vec![(Permutation::new(vec![1, 3, 2, 4]).unwrap(), 4)])
    }

    fn result(nk: &str, index: u64, status: Status, real: Option<usize>) -> InstanceResult {
        InstanceResult {
            problem_id: "p".into(),
            necklace: nk.parse().unwrap(),
            mode: FlagMode::Secant,
            instance_index: index,
            seed: index,
            status,
            num_real: real,
            eliminant_degree: None,
            elapsed_ms: 0,
        }
    }

    #[test]
    fn selection_parsing() {
        assert_eq!("all".parse::<NecklaceSelection>().unwrap(), NecklaceSelection::All);
        assert_eq!("monotone".parse::<NecklaceSelection>().unwrap(), NecklaceSelection::MonotoneOnly);
        let NecklaceSelection::Explicit(list) = "32,23".parse::<NecklaceSelection>().unwrap() else {
            panic!("expected a list");
        };
        assert_eq!(list.len(), 2);
        assert_eq!(list[0], list[1]);
    }

    #[test]
    fn report_layout() {
        let rows = [
            result("2323", 0, Status::Accepted, Some(0)),
            result("2233", 0, Status::Accepted, Some(4)),
            result("2323", 1, Status::Discarded(DiscardReason::DegreeDrop), None),
        ];
        let tally = Tally::from_results(&rows, Some(4));
        assert_eq!(tally.rows[0].necklace.to_string(), "2233");
        let md = report(&tally, ReportFormat::Markdown);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "| Necklace | 0 | 2 | 4 | Total |");
        assert_eq!(lines[2], "| 2233 | 0 | 0 | 1 | 1 |");
        assert_eq!(lines[3], "| 2323 | 1 | 0 | 0 | 1 |");
        assert_eq!(lines[4], "| Total | 1 | 0 | 1 | 2 |");
        let csv = report(&tally, ReportFormat::Csv);
        assert_eq!(csv.lines().next().unwrap(), "Necklace,0,2,4,Total");
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn empty_report_is_header_only() {
        let tally = Tally::new(3);
        assert_eq!(tally.columns(), vec![1, 3]);
        assert_eq!(report(&tally, ReportFormat::Csv), "Necklace,1,3,Total\n");
        assert_eq!(report(&tally, ReportFormat::Markdown).lines().count(), 2);
    }

    #[test]
    fn results_round_trip() {
        let rows = [
            result("2233", 0, Status::Accepted, Some(4)),
            result("2323", 7, Status::Discarded(DiscardReason::NotSquareFree), None),
        ];
        let mut text = RESULTS_HEADER.join(",") + "\n";
        for r in &rows {
            text += &(row_fields(r, true).join(",") + "\n");
        }
        let parsed = parse_results(&text);
        assert!(parsed.corrupt.is_empty());
        assert_eq!(parsed.rows.iter().map(|(l, _)| *l).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(parsed.rows[1].1, rows[1]);
    }

    #[test]
    fn corrupt_rows_carry_line_numbers() {
        let mut text = RESULTS_HEADER.join(",") + "\n";
        text += "p,2233,secant,0,0,ok,,0\n";
        text += "p,2233,secant,1,1,ok,2,0\n";
        text += "p,2233,sec";
        let parsed = parse_results(&text);
        assert_eq!(parsed.rows.len(), 1);
        let lines: Vec<usize> = parsed.corrupt.iter().map(|(l, _)| *l).collect();
        assert_eq!(lines, vec![4, 2]);
    }

    #[test]
    fn zero_cap_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.csv");
        let mut cfg = ExperimentConfig::new(four_lines(), "four", FlagMode::Secant, &out);
        cfg.attempt_cap = Some(0);
        let summary = run(&cfg).unwrap();
        assert!(summary.tally.rows.is_empty());
        assert_eq!(summary.capped.len(), 1);
        assert!(read_results(&out).unwrap().rows.is_empty());
    }

    #[test]
    fn small_run_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.csv");
        let mut cfg = ExperimentConfig::new(four_lines(), "four", FlagMode::Secant, &out);
        cfg.target = 6;
        cfg.workers = 3;
        cfg.record_timing = false;
        cfg.stop_after = Some(2);
        let first = run(&cfg).unwrap();
        assert!(first.interrupted);
        cfg.stop_after = None;
        let second = run(&cfg).unwrap();
        assert_eq!(first.new_rows + second.new_rows, second.tally.rows[0].attempts());
        assert_eq!(second.tally.rows[0].histogram.get(&2), Some(&6));

        let fresh = dir.path().join("fresh.csv");
        cfg.output = fresh.clone();
        cfg.workers = 1;
        run(&cfg).unwrap();
        assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&fresh).unwrap());
    }

    #[test]
    fn foreign_necklace_is_rejected() {
        let mut cfg = ExperimentConfig::new(four_lines(), "four", FlagMode::Secant, "unused.csv");
        cfg.necklaces = NecklaceSelection::Explicit(vec!["2233".parse().unwrap()]);
        assert!(matches!(run(&cfg), Err(HarnessError::Config(_))));
    }
}
