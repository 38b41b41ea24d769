//! Maximum-likelihood linear models for binned Poisson count data, fitted
//! with the Cash statistic.
//!
//! Low-count data — spectra, light curves, vote tallies — call for the
//! Poisson likelihood rather than a Gaussian chi-square, and the Cash
//! statistic is its goodness-of-fit form. For the linear density
//! `f(x) = lambda (1 + a (x - x_A))` the minimization decouples: the slope
//! comes from isolating the zeros of a rational function whose poles are
//! known analytically from the data, and the normalization follows in
//! closed form. At most one of those zeros yields a model that stays
//! non-negative across the range; when none does, three one-parameter
//! fallback models (pivoted at either end of the range, or constant) with
//! closed-form solutions guarantee a unique non-negative best fit for any
//! dataset. Non-uniform bin widths and data gaps are handled throughout.
//!
//! # Quick start
//!
//! ```
//! use cashfit::{Bin, BinnedDataset, GapSpec, fit_extended, ModelKind};
//!
//! // Three unit bins with one count each.
//! let bins = vec![
//!     Bin::new(0.0, 1.0, 1),
//!     Bin::new(1.0, 2.0, 1),
//!     Bin::new(2.0, 3.0, 1),
//! ];
//! let ds = BinnedDataset::build(bins, GapSpec::Auto).unwrap();
//! let fit = fit_extended(&ds).unwrap();
//! assert_eq!(fit.kind(), ModelKind::Standard);
//! assert!(fit.c_min >= 0.0);
//! ```
//!
//! The `examples/` directory walks through each capability: the standard
//! fit and its diagnostics, datasets with no acceptable standard model,
//! gapped and non-uniform binning, scanning the solver functions for
//! plotting, and the Monte Carlo acceptance experiment. A thin `cashfit`
//! binary exposes the same operations on CSV files.

pub mod cash;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod extended;
pub mod io;
pub mod oracle;
pub mod root;
pub mod sim;
pub mod solver;

pub use cash::{cash_from_means, cash_standard, cash_total, poisson_means_standard, ModelMeans};
pub use dataset::{Bin, BinnedDataset, Gap, GapSpec};
pub use error::{Error, Result};
pub use extended::{
    fit_constant, fit_extended, fit_extended_with, fit_pivot_a, fit_pivot_b, ExtendedFit,
    ExtendedModel, FallbackFit, ModelKind,
};
pub use sim::{
    bin_events, run_acceptance_experiment, sample_positions, CountShape, SimConfig, SimResult,
    TrialOutcome,
};
pub use solver::{
    classify_acceptability, diagnostics, f_infinity, f_value, find_f_zeros, find_g_zeros,
    fit_standard, fit_standard_with, g_value, lambda_of_a, DiagnosticsLevel, FZero,
    RejectionReason, SolverDiagnostics, StandardFit, StandardOutcome,
};
