//! Batch front-end for the `qss` binary.

mod equations;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::detection::{self, Mode, TrialBatch};
use crate::error::Error;

pub use equations::{verify_equations, EquationLedger, LedgerRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    Honest,
    Attack,
    VerifyEquations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Simulate quantum secret sharing on reusable GHZ carriers, with or
/// without a cheating Bob who splits the carrier entanglement.
#[derive(Debug, Clone, Parser)]
#[command(name = "qss", version)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "attack")]
    pub mode: RunMode,
    /// Rounds per session.
    #[arg(long, default_value_t = 20)]
    pub rounds: usize,
    /// Number of independent sessions.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Probability that each round is publicly compared.
    #[arg(long, default_value_t = 0.25)]
    pub compare_fraction: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.mode == RunMode::VerifyEquations {
            return Ok(());
        }
        let min_rounds = if self.mode == RunMode::Attack { 2 } else { 1 };
        if self.rounds < min_rounds {
            return Err(Error::Config(format!(
                "--rounds must be at least {min_rounds} in this mode"
            )));
        }
        if self.trials < 1 {
            return Err(Error::Config("--trials must be at least 1".into()));
        }
        let f = self.compare_fraction;
        if f.is_nan() || f <= 0.0 || f > 1.0 {
            return Err(Error::Config("--compare-fraction must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Renders the report for `config`. Errors carry the exit code to use.
pub fn render(config: &RunConfig) -> Result<(String, i32), (Error, i32)> {
    config.validate().map_err(|e| (e, EXIT_CONFIG))?;
    match config.mode {
        RunMode::VerifyEquations => {
            let ledger = verify_equations();
            let code = if ledger.all_pass { EXIT_OK } else { EXIT_INTERNAL };
            Ok((render_ledger(&ledger, config.format), code))
        }
        RunMode::Honest | RunMode::Attack => {
            let mode = if config.mode == RunMode::Honest {
                Mode::Honest
            } else {
                Mode::Attack
            };
            let batch = detection::run_trials(
                mode,
                config.rounds,
                config.trials,
                config.compare_fraction,
                config.seed,
            )
            .map_err(|e| {
                let code = if e.is_invariant_breach() { EXIT_INTERNAL } else { EXIT_CONFIG };
                (e, code)
            })?;
            Ok((render_batch(&batch, config.format), EXIT_OK))
        }
    }
}

fn render_ledger(ledger: &EquationLedger, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(ledger).expect("ledger serializes") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["id", "case", "pass", "max_deviation"]).expect("in-memory write");
            for r in &ledger.rows {
                w.write_record([
                    r.id.clone(),
                    r.case.clone(),
                    r.pass.to_string(),
                    format!("{:e}", r.max_deviation),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
        Format::Text => {
            let mut out = String::new();
            for r in &ledger.rows {
                let verdict = if r.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{verdict}  {:<18} {:<34} max dev {:.2e}", r.id, r.case, r.max_deviation);
            }
            let _ = writeln!(
                out,
                "{} rows, {}",
                ledger.rows.len(),
                if ledger.all_pass { "all pass" } else { "FAILURES PRESENT" }
            );
            out
        }
    }
}

fn render_batch(batch: &TrialBatch, format: Format) -> String {
    let s = &batch.stats;
    match format {
        Format::Json => serde_json::to_string_pretty(s).expect("stats serialize") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "trial",
                "seed",
                "n",
                "detected",
                "recovery_errors",
                "error_rounds",
                "q2_resolved",
                "round2_check",
                "other_failures",
                "failure_event",
            ])
            .expect("in-memory write");
            for (k, t) in batch.trials.iter().enumerate() {
                let rounds: Vec<String> = t.bob_recovery_errors.iter().map(usize::to_string).collect();
                let round2 = match t.round2_pass {
                    None => "",
                    Some(true) => "pass",
                    Some(false) => "fail",
                };
                w.write_record([
                    k.to_string(),
                    t.seed.to_string(),
                    t.n.to_string(),
                    t.detected.to_string(),
                    t.bob_recovery_errors.len().to_string(),
                    rounds.join(";"),
                    t.q2_resolved.to_string(),
                    round2.to_string(),
                    t.other_failures.to_string(),
                    t.failure_event.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "mode               {}", s.mode);
            let _ = writeln!(out, "rounds             {}", s.n);
            let _ = writeln!(out, "trials             {}", s.trials);
            let _ = writeln!(out, "compare fraction   {}", s.fraction);
            let _ = writeln!(out, "detection rate     {:.4}", s.detection_rate);
            match s.round2_check_pass_rate {
                Some(r) => {
                    let _ = writeln!(out, "round-2 check pass {r:.4}");
                }
                None => {
                    let _ = writeln!(out, "round-2 check pass n/a (round 2 never compared)");
                }
            }
            if s.mode == Mode::Attack {
                let _ = writeln!(out, "q2 resolved        {:.4}", s.q2_resolution_rate);
                let _ = writeln!(
                    out,
                    "failure event      {:.4} (closed form {:.4})",
                    s.failure_event_rate,
                    detection::failure_event_probability(s.n, s.fraction)
                );
                let _ = writeln!(out, "recovery errors per trial:");
                for (errors, count) in &s.recovery_error_histogram {
                    let _ = writeln!(out, "  {errors:>3} : {count}");
                }
            }
            out
        }
    }
}

/// Entry point shared by the binary and tests. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    log::info!("{config:?}");
    let (report, code) = match render(&config) {
        Ok(r) => r,
        Err((e, code)) => {
            eprintln!("qss: {e}");
            return code;
        }
    };
    let written = match &config.out {
        Some(path) => std::fs::write(path, &report),
        None => std::io::stdout().write_all(report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("qss: cannot write report: {e}");
        return EXIT_CONFIG;
    }
    code
}
