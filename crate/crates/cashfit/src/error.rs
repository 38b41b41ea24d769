//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by dataset construction, model evaluation and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A bin has `x_hi <= x_lo`.
    #[error("bin {index} has non-positive width ({x_lo} .. {x_hi})")]
    NegativeWidth { index: usize, x_lo: f64, x_hi: f64 },

    /// Two bins overlap (beyond the contiguity tolerance).
    #[error("bins {index} and {} overlap", index + 1)]
    OverlappingBins { index: usize },

    /// A declared gap intersects a bin.
    #[error("gap {gap_index} overlaps bin {bin_index}")]
    GapBinOverlap { gap_index: usize, bin_index: usize },

    /// A gap is empty, reversed, or falls outside the data range.
    #[error("gap {index} is invalid: ({x_a} .. {x_b})")]
    InvalidGap { index: usize, x_a: f64, x_b: f64 },

    /// Declared gaps do not tile the voids between bins exactly.
    #[error("void between bins {index} and {} is not covered by a declared gap", index + 1)]
    UncoveredVoid { index: usize },

    /// A count value is not an exact non-negative integer.
    #[error("count at row {index} is not a non-negative integer: {value}")]
    NonIntegerCount { index: usize, value: f64 },

    /// Unparseable input text (CSV table or a flag value).
    #[error("malformed input at line {line}: {message}")]
    MalformedInput { line: usize, message: String },

    /// No bins were supplied.
    #[error("dataset must contain at least one bin")]
    NoBins,

    /// An explicit range override does not coincide with the bin/gap tiling.
    #[error("explicit range ({x_a}, {x_b}) does not match the bin tiling")]
    RangeMismatch { x_a: f64, x_b: f64 },

    /// Model means and dataset bins have different lengths.
    #[error("means length {got} does not match bin count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    /// A function of `a` was evaluated at (or too close to) one of its poles.
    #[error("evaluation at singularity a = {a}")]
    EvaluationAtSingularity { a: f64 },

    /// Fewer than two bins carry counts; the two-parameter model is unconstrained.
    #[error("need at least two bins with non-zero counts, found {nonzero}")]
    InsufficientData { nonzero: usize },

    /// The asymptote of the slope equation vanishes; the external zero escapes
    /// to infinity and the standard model is not defined.
    #[error("asymptotic value is zero within tolerance; no external zero exists")]
    DegenerateAsymptote,

    /// The closed-form normalization has a vanishing denominator at this slope.
    #[error("normalization denominator vanishes at a = {a}")]
    SingularDenominator { a: f64 },

    /// An operation that requires counts was called on an all-zero dataset.
    #[error("dataset has no counts")]
    EmptyData,

    /// A sampled event position lies outside the binning range.
    #[error("event position {x} outside range ({lo}, {hi})")]
    PositionOutOfRange { x: f64, lo: f64, hi: f64 },

    /// A bracketed root search failed to produce valid endpoint signs.
    /// This indicates a defect, not a property of the data.
    #[error("root bracketing failed in ({lo}, {hi})")]
    BracketFailure { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
