//! Public comparison of a random subsequence of rounds, and Monte Carlo
//! statistics over many seeded sessions.
//!
//! For every compared round Alice's bit, Bob's announced bit and Charlie's
//! bit are made public. Odd rounds pass when all three agree; even rounds
//! pass when the three bits XOR to zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attack;
use crate::error::{Error, Result};
use crate::protocol::{self, Parity, Transcript};
use crate::seeds::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Honest,
    Attack,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Honest => "honest",
            Mode::Attack => "attack",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(Mode::Honest),
            "attack" => Ok(Mode::Attack),
            other => Err(Error::Config(format!("unknown mode '{other}'"))),
        }
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if fraction.is_nan() || fraction <= 0.0 || fraction > 1.0 {
        return Err(Error::Config(format!(
            "compare fraction must lie in (0, 1], got {fraction}"
        )));
    }
    Ok(())
}

/// Picks each round 1..=n independently with probability `fraction`.
pub fn select_comparison<R: Rng + ?Sized>(
    n: usize,
    fraction: f64,
    rng: &mut R,
) -> Result<BTreeSet<usize>> {
    check_fraction(fraction)?;
    Ok((1..=n).filter(|_| rng.random_bool(fraction)).collect())
}

pub fn verify_round(kind: Parity, alice: u8, bob: u8, charlie: u8) -> bool {
    match kind {
        Parity::Odd => alice == bob && alice == charlie,
        Parity::Even => alice ^ bob ^ charlie == 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparedRound {
    pub i: usize,
    pub alice_bit: u8,
    pub bob_announced: u8,
    pub charlie_bit: u8,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub compared_indices: BTreeSet<usize>,
    pub rounds: Vec<ComparedRound>,
    pub detected: bool,
}

impl ComparisonReport {
    /// (index, Alice's bit) for every compared round.
    pub fn announcements(&self) -> Vec<(usize, u8)> {
        self.rounds.iter().map(|r| (r.i, r.alice_bit)).collect()
    }

    pub fn get(&self, i: usize) -> Option<&ComparedRound> {
        self.rounds.iter().find(|r| r.i == i)
    }
}

/// Publicly checks the rounds in `indices` against the transcript.
pub fn compare(transcript: &Transcript, indices: &BTreeSet<usize>) -> Result<ComparisonReport> {
    let rounds = indices
        .iter()
        .map(|&i| {
            let r = transcript.round(i).ok_or_else(|| {
                Error::Config(format!("compared index {i} outside 1..={}", transcript.len()))
            })?;
            Ok(ComparedRound {
                i,
                alice_bit: r.q,
                bob_announced: r.bob,
                charlie_bit: r.charlie,
                pass: verify_round(r.kind, r.q, r.bob, r.charlie),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport {
        compared_indices: indices.clone(),
        detected: rounds.iter().any(|r| !r.pass),
        rounds,
    })
}

/// True when no even round from 4 on was compared, so Bob cannot learn
/// the round-2 bit from the announcements.
pub fn is_failure_event(compared: &BTreeSet<usize>) -> bool {
    !compared.iter().any(|&i| i >= 4 && i % 2 == 0)
}

/// Closed-form probability of [`is_failure_event`] under Bernoulli
/// selection: (1 − fraction)^⌊(n − 2)/2⌋.
pub fn failure_event_probability(n: usize, fraction: f64) -> f64 {
    let even_rounds_from_four = n.saturating_sub(2) / 2;
    (1.0 - fraction).powi(even_rounds_from_four as i32)
}

/// One seeded session and its public comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub seed: u64,
    pub n: usize,
    pub detected: bool,
    /// Rounds where Bob's corrected string differs from Alice's. Always
    /// empty in honest mode.
    pub bob_recovery_errors: Vec<usize>,
    pub q2_resolved: bool,
    /// Outcome of the round-2 check, when round 2 was compared.
    pub round2_pass: Option<bool>,
    /// Failed checks among compared rounds other than round 2.
    pub other_failures: usize,
    pub failure_event: bool,
}

impl TrialReport {
    fn from_comparison(seed: u64, n: usize, report: &ComparisonReport) -> Self {
        TrialReport {
            seed,
            n,
            detected: report.detected,
            bob_recovery_errors: Vec::new(),
            q2_resolved: false,
            round2_pass: report.get(2).map(|r| r.pass),
            other_failures: report.rounds.iter().filter(|r| r.i != 2 && !r.pass).count(),
            failure_event: is_failure_event(&report.compared_indices),
        }
    }
}

pub fn random_bits(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = seeds::stream(seed, Stream::DataBits);
    (0..n).map(|_| rng.random_range(0..=1u8)).collect()
}

/// Runs a single session of `mode` with random data bits drawn from `seed`.
pub fn run_trial(mode: Mode, n: usize, fraction: f64, seed: u64) -> Result<TrialReport> {
    let bits = random_bits(n, seed);
    match mode {
        Mode::Honest => {
            let transcript = protocol::run_honest_session(&bits, seed)?;
            let compared =
                select_comparison(n, fraction, &mut seeds::stream(seed, Stream::Comparison))?;
            let report = compare(&transcript, &compared)?;
            Ok(TrialReport::from_comparison(seed, n, &report))
        }
        Mode::Attack => {
            let out = attack::run_attacked_session(&bits, fraction, seed)?;
            let mut trial = TrialReport::from_comparison(seed, n, &out.comparison);
            trial.bob_recovery_errors = out
                .recovered
                .iter()
                .zip(&bits)
                .enumerate()
                .filter(|(_, (r, q))| r != q)
                .map(|(k, _)| k + 1)
                .collect();
            trial.q2_resolved = out.records.q2_knowledge.bit().is_some();
            Ok(trial)
        }
    }
}

/// Aggregate Monte Carlo statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub mode: Mode,
    pub n: usize,
    pub trials: usize,
    pub fraction: f64,
    pub detection_rate: f64,
    /// Pass rate of the round-2 check over trials that compared round 2;
    /// `null` when no trial did.
    pub round2_check_pass_rate: Option<f64>,
    /// Number of Bob's recovery errors per trial → trial count.
    pub recovery_error_histogram: BTreeMap<usize, usize>,
    pub q2_resolution_rate: f64,
    pub failure_event_rate: f64,
}

impl AggregateStats {
    pub fn from_trials(mode: Mode, n: usize, fraction: f64, trials: &[TrialReport]) -> Self {
        let count = trials.len();
        let rate = |hits: usize| hits as f64 / count as f64;
        let round2: Vec<bool> = trials.iter().filter_map(|t| t.round2_pass).collect();
        let mut histogram = BTreeMap::new();
        for t in trials {
            *histogram.entry(t.bob_recovery_errors.len()).or_insert(0) += 1;
        }
        AggregateStats {
            mode,
            n,
            trials: count,
            fraction,
            detection_rate: rate(trials.iter().filter(|t| t.detected).count()),
            round2_check_pass_rate: (!round2.is_empty())
                .then(|| round2.iter().filter(|&&p| p).count() as f64 / round2.len() as f64),
            recovery_error_histogram: histogram,
            q2_resolution_rate: rate(trials.iter().filter(|t| t.q2_resolved).count()),
            failure_event_rate: rate(trials.iter().filter(|t| t.failure_event).count()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialBatch {
    pub stats: AggregateStats,
    pub trials: Vec<TrialReport>,
}

/// Runs `trials` independent sessions in parallel. Trial `k` uses the seed
/// derived from (`seed`, `k`), so results do not depend on scheduling.
pub fn run_trials(mode: Mode, n: usize, trials: usize, fraction: f64, seed: u64) -> Result<TrialBatch> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    match mode {
        Mode::Honest if n < 1 => return Err(Error::Config("rounds must be at least 1".into())),
        Mode::Attack if n < 2 => {
            return Err(Error::Config("attacked sessions need at least 2 rounds".into()))
        }
        _ => {}
    }
    check_fraction(fraction)?;
    let reports = (0..trials as u64)
        .into_par_iter()
        .map(|k| run_trial(mode, n, fraction, seeds::trial_seed(seed, k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialBatch {
        stats: AggregateStats::from_trials(mode, n, fraction, &reports),
        trials: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::SimRng;
    use rand::SeedableRng;

    #[test]
    fn full_fraction_selects_everything() {
        let mut rng = SimRng::seed_from_u64(0);
        let set = select_comparison(10, 1.0, &mut rng).unwrap();
        assert_eq!(set, (1..=10).collect());
    }

    #[test]
    fn fraction_must_be_positive_and_at_most_one() {
        let mut rng = SimRng::seed_from_u64(0);
        for f in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(select_comparison(10, f, &mut rng), Err(Error::Config(_))));
        }
    }

    #[test]
    fn selection_rate_concentrates() {
        // Binomial(1000, 0.25) has sd ≈ 0.0137 in rate; 0.04 is ~3 sd.
        let mut rng = SimRng::seed_from_u64(21);
        let set = select_comparison(1000, 0.25, &mut rng).unwrap();
        let rate = set.len() as f64 / 1000.0;
        assert!((rate - 0.25).abs() <= 0.04, "{rate}");
        let again = select_comparison(1000, 0.25, &mut SimRng::seed_from_u64(21)).unwrap();
        assert_eq!(set, again);
    }

    #[test]
    fn round_checks() {
        assert!(verify_round(Parity::Even, 1, 0, 1));
        assert!(verify_round(Parity::Odd, 1, 1, 1));
        assert!(!verify_round(Parity::Even, 1, 0, 0));
        assert!(!verify_round(Parity::Odd, 1, 1, 0));
    }

    #[test]
    fn compare_rejects_out_of_range() {
        let t = protocol::run_honest_session(&[1, 0], 0).unwrap();
        assert!(compare(&t, &[3].into()).is_err());
        assert!(compare(&t, &[0].into()).is_err());
        let ok = compare(&t, &[1, 2].into()).unwrap();
        assert!(!ok.detected);
        assert_eq!(ok.announcements(), vec![(1, 1), (2, 0)]);
    }

    #[test]
    fn failure_event_definition() {
        assert!(is_failure_event(&[1, 2, 3, 5].into()));
        assert!(!is_failure_event(&[2, 4].into()));
        assert_eq!(failure_event_probability(20, 0.5), 0.5f64.powi(9));
        assert_eq!(failure_event_probability(3, 0.5), 1.0);
    }

    #[test]
    fn honest_trials_are_never_detected() {
        let batch = run_trials(Mode::Honest, 12, 200, 0.7, 3).unwrap();
        assert_eq!(batch.stats.detection_rate, 0.0);
        assert_eq!(batch.stats.recovery_error_histogram, BTreeMap::from([(0, 200)]));
    }

    #[test]
    fn full_comparison_always_resolves_q2() {
        let batch = run_trials(Mode::Attack, 6, 300, 1.0, 4).unwrap();
        assert_eq!(batch.stats.q2_resolution_rate, 1.0);
        assert_eq!(batch.stats.failure_event_rate, 0.0);
        assert_eq!(batch.stats.detection_rate, 0.0);
    }

    #[test]
    fn attack_trials_at_half_fraction() {
        let batch = run_trials(Mode::Attack, 20, 2000, 0.5, 8).unwrap();
        for t in &batch.trials {
            assert_eq!(t.other_failures, 0);
            if t.q2_resolved {
                assert!(t.bob_recovery_errors.iter().all(|&i| i == 2), "{t:?}");
            }
        }
    }

    #[test]
    fn batches_are_reproducible() {
        let a = run_trials(Mode::Attack, 8, 64, 0.25, 77).unwrap();
        let b = run_trials(Mode::Attack, 8, 64, 0.25, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trial_config_errors() {
        assert!(run_trials(Mode::Attack, 1, 10, 0.5, 0).is_err());
        assert!(run_trials(Mode::Honest, 0, 10, 0.5, 0).is_err());
        assert!(run_trials(Mode::Honest, 5, 0, 0.5, 0).is_err());
        assert!(run_trials(Mode::Honest, 5, 1, 0.0, 0).is_err());
    }

    #[test]
    fn stats_json_fields() {
        let batch = run_trials(Mode::Attack, 6, 10, 0.5, 1).unwrap();
        let v = serde_json::to_value(&batch.stats).unwrap();
        let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        let expected: BTreeSet<&str> = [
            "mode",
            "n",
            "trials",
            "fraction",
            "detection_rate",
            "round2_check_pass_rate",
            "recovery_error_histogram",
            "q2_resolution_rate",
            "failure_event_rate",
        ]
        .into();
        assert_eq!(keys, expected);
        assert_eq!(v["mode"], "attack");
    }
}
