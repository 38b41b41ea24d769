//! Monte Carlo generation of binned Poisson datasets and the
//! acceptance-fraction experiment.
//!
//! Each trial draws a fixed number of event positions from a chosen count
//! density, bins them into equal-width bins, runs the standard-model fit,
//! and tallies whether an acceptable solution exists and whether the
//! asymptote of the slope equation is negative.
//!
//! Trials are independent: the generator for trial `k` is a dedicated
//! ChaCha8 stream derived from `(seed, k)`, so serial and parallel runs
//! produce bit-identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::BinnedDataset;
use crate::error::{Error, Result};
use crate::solver::{fit_standard, StandardOutcome};

/// Identifier of the trial generator, recorded in output metadata.
pub const GENERATOR: &str = "chacha8; per-trial stream = trial index";

/// Parent density of event positions across the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountShape {
    /// Flat density.
    Uniform,
    /// Density rising linearly from zero at the range start.
    Increasing,
    /// Density falling linearly to zero at the range end.
    Decreasing,
}

impl CountShape {
    pub fn name(&self) -> &'static str {
        match self {
            CountShape::Uniform => "uniform",
            CountShape::Increasing => "increasing",
            CountShape::Decreasing => "decreasing",
        }
    }
}

impl std::str::FromStr for CountShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(CountShape::Uniform),
            "increasing" => Ok(CountShape::Increasing),
            "decreasing" => Ok(CountShape::Decreasing),
            other => Err(format!(
                "unknown shape '{other}' (expected uniform|increasing|decreasing)"
            )),
        }
    }
}

/// Configuration of one acceptance-fraction experiment point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub shape: CountShape,
    /// Events per trial.
    pub counts: u64,
    /// Number of equal-width bins.
    pub bins: usize,
    pub trials: u32,
    pub seed: u64,
    /// Range of the independent variable.
    pub range: (f64, f64),
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            shape: CountShape::Uniform,
            counts: 50,
            bins: 100,
            trials: 100,
            seed: 0,
            range: (0.0, 100.0),
        }
    }
}

/// Outcome of a single simulated dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// Whether the standard linear model had an acceptable solution.
    pub acceptable: bool,
    /// Whether the asymptote of the slope equation was negative.
    pub f_infinity_negative: bool,
}

/// Tallied experiment result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub fraction_acceptable: f64,
    pub fraction_f_infinity_negative: f64,
    pub outcomes: Vec<TrialOutcome>,
}

/// Draw `count` event positions from the shape's density over `range`,
/// by inverse-transform sampling of a uniform variable: the rising ramp uses
/// `sqrt(u)`, the falling ramp `1 - sqrt(u)`, rescaled to the range.
pub fn sample_positions<R: Rng>(
    shape: CountShape,
    count: u64,
    range: (f64, f64),
    rng: &mut R,
) -> Vec<f64> {
    let (lo, hi) = range;
    let span = hi - lo;
    (0..count)
        .map(|_| {
            let u: f64 = rng.gen();
            let y = match shape {
                CountShape::Uniform => u,
                CountShape::Increasing => u.sqrt(),
                CountShape::Decreasing => 1.0 - u.sqrt(),
            };
            lo + y * span
        })
        .collect()
}

/// Sort event positions into `bins` equal-width bins over `range`.
/// Interior edges are half-open on the left (an event exactly on an edge
/// lands in the right bin); the last bin is closed on the right.
pub fn bin_events(positions: &[f64], bins: usize, range: (f64, f64)) -> Result<BinnedDataset> {
    let (lo, hi) = range;
    let span = hi - lo;
    let mut counts = vec![0u64; bins];
    for &x in positions {
        if x < lo || x > hi {
            return Err(Error::PositionOutOfRange { x, lo, hi });
        }
        let mut idx = ((x - lo) / span * bins as f64) as usize;
        if idx >= bins {
            idx = bins - 1; // x == hi
        }
        counts[idx] += 1;
    }
    BinnedDataset::from_uniform_bins(lo, hi, &counts)
}

/// Generator for one trial, derived from the experiment seed and the trial
/// index; identical whether trials run serially or in parallel.
pub fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_trial(cfg: &SimConfig, trial: u32) -> Result<TrialOutcome> {
    let mut rng = trial_rng(cfg.seed, trial);
    let positions = sample_positions(cfg.shape, cfg.counts, cfg.range, &mut rng);
    let ds = bin_events(&positions, cfg.bins, cfg.range)?;
    debug_assert_eq!(ds.total_counts(), cfg.counts);
    let acceptable = matches!(fit_standard(&ds)?, StandardOutcome::Acceptable(_));
    let f_infinity_negative = if ds.total_counts() > 0 {
        crate::solver::f_infinity(&ds)? < 0.0
    } else {
        false
    };
    Ok(TrialOutcome {
        acceptable,
        f_infinity_negative,
    })
}

/// Run the acceptance-fraction experiment: for every trial, sample, bin,
/// fit, and tally. Deterministic for a fixed config; trials fan out across
/// threads.
pub fn run_acceptance_experiment(cfg: &SimConfig) -> Result<SimResult> {
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<_>>()?;
    let trials = outcomes.len().max(1) as f64;
    let acc = outcomes.iter().filter(|o| o.acceptable).count() as f64;
    let neg = outcomes.iter().filter(|o| o.f_infinity_negative).count() as f64;
    Ok(SimResult {
        fraction_acceptable: acc / trials,
        fraction_f_infinity_negative: neg / trials,
        outcomes,
    })
}

/// Default grid of per-trial count totals for experiment sweeps.
pub const DEFAULT_COUNT_GRID: [u64; 12] = [1, 2, 3, 5, 8, 12, 20, 30, 50, 80, 120, 200];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_means_match_densities() {
        let n = 100_000;
        let range = (0.0, 100.0);
        // Standard error of the mean for each shape; uniform sd = R/sqrt(12),
        // ramps sd = R sqrt(1/18).
        let cases = [
            (CountShape::Uniform, 50.0, 100.0 / 12f64.sqrt()),
            (
                CountShape::Increasing,
                100.0 * 2.0 / 3.0,
                100.0 / 18f64.sqrt(),
            ),
            (CountShape::Decreasing, 100.0 / 3.0, 100.0 / 18f64.sqrt()),
        ];
        for (shape, expected, sd) in cases {
            let mut rng = trial_rng(42, 0);
            let xs = sample_positions(shape, n, range, &mut rng);
            let mean = xs.iter().sum::<f64>() / n as f64;
            let tol = 3.0 * sd / (n as f64).sqrt();
            assert!(
                (mean - expected).abs() < tol,
                "{shape:?}: mean {mean} vs {expected} +- {tol}"
            );
        }
    }

    #[test]
    fn binning_conserves_counts() {
        let mut rng = trial_rng(7, 3);
        let xs = sample_positions(CountShape::Uniform, 1234, (0.0, 10.0), &mut rng);
        let ds = bin_events(&xs, 37, (0.0, 10.0)).unwrap();
        assert_eq!(ds.total_counts(), 1234);
        assert_eq!(ds.num_bins(), 37);
        assert!(ds.gaps().is_empty());
    }

    #[test]
    fn empty_event_list_gives_all_zero_dataset() {
        let ds = bin_events(&[], 10, (0.0, 1.0)).unwrap();
        assert_eq!(ds.total_counts(), 0);
    }

    #[test]
    fn boundary_events_follow_half_open_convention() {
        // Exactly on an interior edge: right bin. Exactly on the range end:
        // last bin.
        let ds = bin_events(&[0.5, 1.0], 2, (0.0, 1.0)).unwrap();
        let counts: Vec<u64> = ds.bins().iter().map(|b| b.count).collect();
        assert_eq!(counts, vec![0, 2]);
    }

    #[test]
    fn out_of_range_event_is_rejected() {
        let err = bin_events(&[1.5], 2, (0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::PositionOutOfRange { .. }));
    }

    #[test]
    fn uniform_counts_are_dispersed_binomially() {
        let mut rng = trial_rng(99, 0);
        let m = 10_000u64;
        let n = 100usize;
        let xs = sample_positions(CountShape::Uniform, m, (0.0, 100.0), &mut rng);
        let ds = bin_events(&xs, n, (0.0, 100.0)).unwrap();
        let expected = m as f64 / n as f64;
        let sd = (m as f64 * (1.0 / n as f64) * (1.0 - 1.0 / n as f64)).sqrt();
        for b in ds.bins() {
            assert!(
                (b.count as f64 - expected).abs() < 5.0 * sd,
                "bin count {} too far from {expected}",
                b.count
            );
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = SimConfig {
            shape: CountShape::Increasing,
            counts: 20,
            bins: 50,
            trials: 40,
            seed: 1234,
            range: (0.0, 100.0),
        };
        let r1 = run_acceptance_experiment(&cfg).unwrap();
        let r2 = run_acceptance_experiment(&cfg).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn parallel_and_serial_runs_agree() {
        let cfg = SimConfig {
            shape: CountShape::Decreasing,
            counts: 15,
            bins: 40,
            trials: 24,
            seed: 8,
            range: (0.0, 100.0),
        };
        let parallel = run_acceptance_experiment(&cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| run_acceptance_experiment(&cfg)).unwrap();
        assert_eq!(parallel, serial);
    }

    #[test]
    fn fractions_match_tallies() {
        let cfg = SimConfig {
            counts: 10,
            trials: 32,
            seed: 5,
            ..SimConfig::default()
        };
        let r = run_acceptance_experiment(&cfg).unwrap();
        let acc = r.outcomes.iter().filter(|o| o.acceptable).count() as f64;
        assert_eq!(r.fraction_acceptable, acc / 32.0);
        assert!(r.fraction_acceptable >= 0.0 && r.fraction_acceptable <= 1.0);
    }

    #[test]
    fn single_count_never_acceptable() {
        let cfg = SimConfig {
            counts: 1,
            trials: 50,
            seed: 77,
            ..SimConfig::default()
        };
        let r = run_acceptance_experiment(&cfg).unwrap();
        assert_eq!(r.fraction_acceptable, 0.0);
    }
}
