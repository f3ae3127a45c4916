//! The `verify` command: runs named checks on named examples and reports
//! residuals against tolerances as JSON or markdown.

pub mod checks;
pub mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use clap::Parser;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

pub use config::{CheckName, Format, RunConfig};

use crate::error::{Error, Result};
use crate::liegroups::ExampleId;
use crate::polar::polar_structure;
use crate::sampling::Worst;
use crate::sasaki::{calibrate_curvature_slots, CalibrationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

const CALIBRATION_SAMPLES: usize = 5;
const CALIBRATION_TOL: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "verify", version, about = "Numeric and exact checks on built-in polar actions")]
pub struct Args {
    /// Comma-separated example names, or `all`.
    #[arg(long, default_value = "all")]
    pub example: Vec<String>,
    /// Comma-separated check names, or `all`.
    #[arg(long, default_value = "all")]
    pub check: Vec<String>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Tolerance override `CHECK=VALUE`; repeatable.
    #[arg(long = "tol", value_name = "CHECK=VALUE")]
    pub tolerances: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// `json` or `md`.
    #[arg(long, default_value = "json")]
    pub format: String,
}

impl Args {
    pub fn config(&self) -> Result<RunConfig> {
        RunConfig::resolve(&self.example, &self.check, self.samples, self.seed, &self.tolerances, self.out.clone(), &self.format)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Within tolerance, but some samples could not be evaluated.
    Degraded,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reproduction {
    pub example: String,
    pub check: CheckName,
    pub seed: u64,
    pub samples: usize,
    pub index: Option<usize>,
}

/// JSON has no infinities; non-finite residuals are written as strings.
fn finite_or_string<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: CheckName,
    pub example: String,
    pub status: Status,
    #[serde(serialize_with = "finite_or_string")]
    pub max_residual: f64,
    pub tolerance: f64,
    pub sample_count: usize,
    pub skipped: usize,
    pub worst_case: Option<Worst>,
    pub reproduction: Reproduction,
    pub details: Value,
    /// Kept out of the report so identical runs serialize identically.
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Zero tolerance demands an exact zero; otherwise the bound is strict.
pub fn within(residual: f64, tolerance: f64) -> bool {
    if tolerance == 0.0 {
        residual == 0.0
    } else {
        residual < tolerance
    }
}

pub fn run_check(config: &RunConfig, example: ExampleId, check: CheckName) -> CheckReport {
    let start = Instant::now();
    let ps = polar_structure(example);
    let tolerance = config.tolerance(check);
    let outcome = checks::run(check, example, &ps, config.samples, config.seed);
    let (status, max_residual, sample_count, skipped, worst_case, details) = match outcome {
        Ok(o) => {
            let status = match (within(o.max_residual, tolerance), o.skipped) {
                (false, _) => Status::Fail,
                (true, 0) => Status::Pass,
                (true, _) => Status::Degraded,
            };
            (status, o.max_residual, o.sample_count, o.skipped, o.worst, o.details)
        }
        Err(e) => (Status::Fail, f64::INFINITY, 0, 0, None, json!({ "error": e.to_string() })),
    };
    CheckReport {
        check,
        example: example.name(),
        status,
        max_residual,
        tolerance,
        sample_count,
        skipped,
        reproduction: Reproduction {
            example: example.name(),
            check,
            seed: config.seed,
            samples: config.samples,
            index: worst_case.as_ref().map(|w| w.index),
        },
        worst_case,
        details,
        wall_time: start.elapsed(),
    }
}

/// Runs every job on a small thread pool; reports keep job order.
pub fn run_all(config: &RunConfig) -> Vec<CheckReport> {
    let jobs = config.jobs();
    let slots: Vec<Mutex<Option<CheckReport>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(example, check)) = jobs.get(i) else { break };
                let report = run_check(config, example, check);
                *slots[i].lock().expect("report slot") = Some(report);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("report slot").expect("job finished")).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutput {
    pub config: RunConfig,
    pub library_version: &'static str,
    pub calibration: Value,
    pub reports: Vec<CheckReport>,
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# verify {}\n", self.library_version);
        let _ = writeln!(
            s,
            "seed {}, samples {}, curvature slots: {}\n",
            self.config.seed, self.config.samples, self.calibration["curvature_slot_choice"]
        );
        let _ = writeln!(s, "| example | check | status | max residual | tolerance | samples |");
        let _ = writeln!(s, "|---|---|---|---|---|---|");
        for r in &self.reports {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Degraded => "degraded",
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {:.3e} | {:.0e} | {} |",
                r.example, r.check, status, r.max_residual, r.tolerance, r.sample_count
            );
        }
        s
    }
}

fn calibration(seed: u64) -> Value {
    match calibrate_curvature_slots(CALIBRATION_SAMPLES, seed, CALIBRATION_TOL) {
        Ok(CalibrationReport { choice, passing, residuals, samples, tolerance }) => json!({
            "curvature_slot_choice": choice.map_or_else(|| format!("undetermined ({passing} passed)"), |c| c.to_string()),
            "passing": passing,
            "samples": samples,
            "tolerance": tolerance,
            "residuals": residuals,
        }),
        Err(e) => json!({ "curvature_slot_choice": "undetermined", "error": e.to_string() }),
    }
}

pub fn execute(config: RunConfig) -> RunOutput {
    let start = Instant::now();
    let calibration = calibration(config.seed);
    let reports = run_all(&config);
    for r in &reports {
        eprintln!("{:<10} {:<26} {:?} {:.2?}", r.example, r.check.as_str(), r.status, r.wall_time);
    }
    eprintln!("wall_time {:.2?}", start.elapsed());
    RunOutput { config, library_version: env!("CARGO_PKG_VERSION"), calibration, reports }
}

fn write_output(output: &RunOutput) -> Result<()> {
    let text = match output.config.format {
        Format::Json => output.to_json(),
        Format::Md => output.to_markdown(),
    };
    match &output.config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parses arguments, runs, writes the report, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    let config = match args.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_CONFIG;
        }
    };
    let output = execute(config);
    if let Err(e) = write_output(&output) {
        eprintln!("{e}");
        return EXIT_CONFIG;
    }
    if output.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
