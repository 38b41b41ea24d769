//! Semi-analytical solution for the standard two-parameter linear model.
//!
//! Minimizing the Cash statistic over `f(x) = lambda (1 + a (x - x_A))`
//! decouples into a scalar root problem for the slope parameter plus a closed
//! form for the normalization. The root problem is governed by two rational
//! functions of `a`:
//!
//! * `g(a) = sum y_i t_i / (1 + a t_i)` over non-zero bins, with
//!   `t_i = x_i - x_A`. It has one pole per non-zero bin at `a = -1/t_i` and
//!   exactly one zero between consecutive poles.
//! * `f(a) = 1 + (R_m/2) (a - M/g(a))`, whose zeros are the stationary points
//!   of the statistic in `a`. Its poles are the zeros of `g`; it decreases
//!   monotonically between poles and tends to a common finite limit at
//!   both infinities. With gaps present, `R_m` is the effective range.
//!
//! Of the `n-1` zeros of `f`, the `n-2` between poles always produce a model
//! that goes negative somewhere; only the external zero (left of all poles
//! when the asymptote is positive, right when negative) can yield an
//! acceptable, non-negative model, and it is unique when it exists.

use crate::cash::{cash_from_means, poisson_means_standard};
use crate::dataset::BinnedDataset;
use crate::error::{Error, Result};
use crate::root;

/// Relative distance below which an evaluation point counts as sitting on a
/// pole of `g`.
pub const SINGULARITY_PROXIMITY_REL: f64 = 1e-13;

/// Threshold under which the asymptote is treated as exactly zero: the
/// external zero escapes to infinity and the standard model is undefined.
pub const DEGENERATE_ASYMPTOTE_TOL: f64 = 1e-12;

/// One zero of the slope equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FZero {
    /// Slope value at the zero.
    pub a: f64,
    /// Whether this slope yields non-negative means in every bin.
    pub acceptable: bool,
    /// Whether the zero lies outside the span of the poles (the only
    /// candidate for an acceptable solution).
    pub external: bool,
}

/// How much of the zero structure to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticsLevel {
    /// Locate only the external zero. The internal zeros are never
    /// acceptable, so this is all a fit needs.
    ExternalOnly,
    /// Additionally isolate every internal zero.
    Full,
}

/// Everything the solver learns about a dataset's slope equation.
#[derive(Debug, Clone)]
pub struct SolverDiagnostics {
    /// Poles of `g`, one per non-zero bin, ascending.
    pub g_singularities: Vec<f64>,
    /// Zeros of `g` (= poles of the slope equation), ascending.
    pub f_singularities: Vec<f64>,
    /// Common limit of the slope equation at both infinities.
    pub f_infinity: f64,
    /// Zeros of the slope equation that were isolated, ascending.
    pub f_zeros: Vec<FZero>,
    /// Open interval of slopes (lo, hi) in which any solution yields a model
    /// that goes negative somewhere; acceptable slopes satisfy
    /// `a < lo || a >= hi`.
    pub acceptability_interval: (f64, f64),
}

/// Accepted maximum-likelihood parameters of the standard linear model.
#[derive(Debug, Clone)]
pub struct StandardFit {
    pub a: f64,
    pub lambda: f64,
    pub c_min: f64,
    pub diagnostics: SolverDiagnostics,
}

/// Why no acceptable standard fit exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectionReason {
    /// No counts at all.
    EmptyData,
    /// Fewer than two bins with counts: the slope equation has no zeros.
    InsufficientData,
    /// The asymptote vanishes; the external zero escapes to infinity.
    DegenerateAsymptote,
    /// The external zero falls in the interval of unacceptable slopes.
    ExternalZeroUnacceptable,
}

/// Result of attempting the standard-model fit. The absence of an acceptable
/// solution is a property of the data, not an error.
#[derive(Debug, Clone)]
pub enum StandardOutcome {
    Acceptable(StandardFit),
    NoAcceptableSolution {
        reason: RejectionReason,
        diagnostics: Option<SolverDiagnostics>,
    },
}

impl StandardOutcome {
    pub fn fit(&self) -> Option<&StandardFit> {
        match self {
            StandardOutcome::Acceptable(fit) => Some(fit),
            StandardOutcome::NoAcceptableSolution { .. } => None,
        }
    }

    pub fn diagnostics(&self) -> Option<&SolverDiagnostics> {
        match self {
            StandardOutcome::Acceptable(fit) => Some(&fit.diagnostics),
            StandardOutcome::NoAcceptableSolution { diagnostics, .. } => diagnostics.as_ref(),
        }
    }
}

fn g_raw(ds: &BinnedDataset, a: f64) -> f64 {
    ds.nonzero_bins()
        .iter()
        .map(|&(t, y)| y * t / (1.0 + a * t))
        .sum()
}

/// Slope equation in the cancellation-free form
/// `1 - (R_m/2) q(a)/g(a)` with `q(a) = sum y_i / (1 + a t_i)`.
/// Algebraically identical to `1 + (R_m/2)(a - M/g(a))`, but stable for
/// large `|a|` and across the poles of `g`, where the limit is
/// `1 + a R_m / 2`.
fn f_raw(ds: &BinnedDataset, a: f64) -> f64 {
    let mut q = 0.0;
    let mut g = 0.0;
    for &(t, y) in ds.nonzero_bins() {
        let denom = 1.0 + a * t;
        q += y / denom;
        g += y * t / denom;
    }
    let value = 1.0 - 0.5 * ds.effective_range() * q / g;
    if value.is_nan() && (q.is_infinite() || g.is_infinite()) {
        // Exactly on a pole of g; both sums blow up and the limit is finite.
        return 1.0 + 0.5 * ds.effective_range() * a;
    }
    value
}

/// Poles of `g`: `a_j = -1/t_j`, ascending, one per non-zero bin.
pub fn g_singularities(ds: &BinnedDataset) -> Vec<f64> {
    // t ascending makes -1/t ascending as well.
    ds.nonzero_bins().iter().map(|&(t, _)| -1.0 / t).collect()
}

fn near_singularity(ds: &BinnedDataset, a: f64) -> Option<f64> {
    ds.nonzero_bins()
        .iter()
        .map(|&(t, _)| -1.0 / t)
        .find(|s| (a - s).abs() <= SINGULARITY_PROXIMITY_REL * s.abs())
}

/// Count-weighted offset sum `g(a)`.
pub fn g_value(ds: &BinnedDataset, a: f64) -> Result<f64> {
    if near_singularity(ds, a).is_some() {
        return Err(Error::EvaluationAtSingularity { a });
    }
    Ok(g_raw(ds, a))
}

/// Slope equation `f(a)`; its zeros are the candidate maximum-likelihood
/// slopes.
pub fn f_value(ds: &BinnedDataset, a: f64) -> Result<f64> {
    if near_singularity(ds, a).is_some() {
        return Err(Error::EvaluationAtSingularity { a });
    }
    if g_raw(ds, a) == 0.0 {
        return Err(Error::EvaluationAtSingularity { a });
    }
    Ok(f_raw(ds, a))
}

/// Common limit of the slope equation at both infinities:
/// `1 - (R_m / 2M) sum y_i / t_i`. Its sign locates the external zero.
pub fn f_infinity(ds: &BinnedDataset) -> Result<f64> {
    if ds.total_counts() == 0 {
        return Err(Error::EmptyData);
    }
    let inv_sum: f64 = ds.nonzero_bins().iter().map(|&(t, y)| y / t).sum();
    Ok(1.0 - 0.5 * ds.effective_range() * inv_sum / ds.total_counts() as f64)
}

/// Pick a bracket endpoint next to a pole: start at the stated offset and
/// double it until the function sign matches the side's limit.
fn endpoint_near_pole<F: Fn(f64) -> f64>(
    f: &F,
    pole: f64,
    dir: f64,
    span: f64,
    want_positive: bool,
) -> Result<f64> {
    let mut eps = 1e-12f64.max(1e-9 * span).min(0.25 * span);
    let limit = span / 3.0;
    loop {
        let x = pole + dir * eps;
        let v = f(x);
        if v == 0.0 || (v.is_finite() && (v > 0.0) == want_positive) {
            return Ok(x);
        }
        eps *= 2.0;
        if eps > limit {
            return Err(Error::BracketFailure {
                lo: pole,
                hi: pole + dir * limit,
            });
        }
    }
}

/// Isolate the `n-1` zeros of `g`, one between each pair of consecutive
/// poles. These are the poles of the slope equation.
pub fn find_g_zeros(ds: &BinnedDataset) -> Result<Vec<f64>> {
    let sing = g_singularities(ds);
    if sing.len() < 2 {
        return Err(Error::InsufficientData {
            nonzero: sing.len(),
        });
    }
    let g = |a| g_raw(ds, a);
    let mut zeros = Vec::with_capacity(sing.len() - 1);
    for w in sing.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let span = hi - lo;
        // g falls from +inf to -inf over (lo, hi).
        let left = endpoint_near_pole(&g, lo, 1.0, span, true)?;
        let right = endpoint_near_pole(&g, hi, -1.0, span, false)?;
        zeros.push(root::brent(g, left, right)?);
    }
    Ok(zeros)
}

/// Locate the external zero of the slope equation, on the side of the poles
/// selected by the sign of the asymptote.
fn external_zero(ds: &BinnedDataset, f_sing: &[f64], g_sing: &[f64], f_inf: f64) -> Result<f64> {
    let f = |a| f_raw(ds, a);
    let spacing = if f_sing.len() > 1 {
        if f_inf > 0.0 {
            f_sing[1] - f_sing[0]
        } else {
            f_sing[f_sing.len() - 1] - f_sing[f_sing.len() - 2]
        }
    } else {
        g_sing[g_sing.len() - 1] - g_sing[0]
    };

    if f_inf > 0.0 {
        // f falls from f_inf > 0 to -inf on (-inf, first pole).
        let pole = f_sing[0];
        let right = endpoint_near_pole(&f, pole, -1.0, spacing, false)?;
        let mut step = spacing;
        for _ in 0..256 {
            let left = pole - step;
            let v = f(left);
            if v >= 0.0 {
                return root::brent(f, left, right);
            }
            step *= 2.0;
        }
    } else {
        // f falls from +inf to f_inf < 0 on (last pole, inf).
        let pole = f_sing[f_sing.len() - 1];
        let left = endpoint_near_pole(&f, pole, 1.0, spacing, true)?;
        let mut step = spacing;
        for _ in 0..256 {
            let right = pole + step;
            let v = f(right);
            if v <= 0.0 {
                return root::brent(f, left, right);
            }
            step *= 2.0;
        }
    }
    Err(Error::BracketFailure {
        lo: f_sing[0],
        hi: f_sing[f_sing.len() - 1],
    })
}

/// Isolate all `n-1` zeros of the slope equation: `n-2` internal ones between
/// consecutive poles, plus the external one.
pub fn find_f_zeros(ds: &BinnedDataset) -> Result<Vec<FZero>> {
    let g_sing = g_singularities(ds);
    if g_sing.len() < 2 {
        return Err(Error::InsufficientData {
            nonzero: g_sing.len(),
        });
    }
    let f_sing = find_g_zeros(ds)?;
    let f_inf = f_infinity(ds)?;
    if f_inf.abs() <= DEGENERATE_ASYMPTOTE_TOL {
        return Err(Error::DegenerateAsymptote);
    }
    let internal = internal_f_zeros(ds, &f_sing)?;
    let ext = external_zero(ds, &f_sing, &g_sing, f_inf)?;
    let mut zeros: Vec<FZero> = internal
        .into_iter()
        .map(|a| FZero {
            a,
            acceptable: classify_acceptability(ds, a),
            external: false,
        })
        .collect();
    let ext_zero = FZero {
        a: ext,
        acceptable: classify_acceptability(ds, ext),
        external: true,
    };
    if f_inf > 0.0 {
        zeros.insert(0, ext_zero);
    } else {
        zeros.push(ext_zero);
    }
    Ok(zeros)
}

fn internal_f_zeros(ds: &BinnedDataset, f_sing: &[f64]) -> Result<Vec<f64>> {
    let f = |a| f_raw(ds, a);
    let mut zeros = Vec::new();
    for w in f_sing.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let span = hi - lo;
        // f falls from +inf to -inf over (lo, hi).
        let left = endpoint_near_pole(&f, lo, 1.0, span, true)?;
        let right = endpoint_near_pole(&f, hi, -1.0, span, false)?;
        zeros.push(root::brent(f, left, right)?);
    }
    Ok(zeros)
}

/// Closed-form normalization for a given slope, gap-aware:
/// `lambda = M / (R (1 + a R/2) - (R_gap + a S_gap))`.
pub fn lambda_of_a(ds: &BinnedDataset, a: f64) -> Result<f64> {
    let r = ds.range();
    let denom = r * (1.0 + 0.5 * a * r) - (ds.gap_length() + a * ds.gap_moment());
    if denom == 0.0 {
        return Err(Error::SingularDenominator { a });
    }
    Ok(ds.total_counts() as f64 / denom)
}

/// Open interval of slopes for which the best-fit model goes negative in
/// some bin: `(-2/dx_1, -1/(R - dx_N/2))`.
pub fn acceptability_interval(ds: &BinnedDataset) -> (f64, f64) {
    (
        -2.0 / ds.first_width(),
        -1.0 / (ds.range() - 0.5 * ds.last_width()),
    )
}

/// Whether a slope yields non-negative means in every bin. The left boundary
/// is excluded, the right boundary included (means of the boundary bin are
/// exactly zero there, which is still a valid Poisson mean).
pub fn classify_acceptability(ds: &BinnedDataset, a: f64) -> bool {
    let (lo, hi) = acceptability_interval(ds);
    a < lo || a >= hi
}

/// Fit the standard linear model, locating only the external zero.
pub fn fit_standard(ds: &BinnedDataset) -> Result<StandardOutcome> {
    fit_standard_with(ds, DiagnosticsLevel::ExternalOnly)
}

/// Fit the standard linear model.
///
/// Walks the full decision procedure: enumerate the poles of `g`, isolate its
/// zeros (the poles of the slope equation), evaluate the asymptote, isolate
/// the external zero on the side the asymptote selects, and test it against
/// the acceptability interval. Numerical failures surface as errors; the
/// absence of an acceptable solution is a normal outcome.
pub fn fit_standard_with(ds: &BinnedDataset, level: DiagnosticsLevel) -> Result<StandardOutcome> {
    if ds.total_counts() == 0 {
        return Ok(StandardOutcome::NoAcceptableSolution {
            reason: RejectionReason::EmptyData,
            diagnostics: None,
        });
    }
    let g_sing = g_singularities(ds);
    let interval = acceptability_interval(ds);
    if g_sing.len() < 2 {
        return Ok(StandardOutcome::NoAcceptableSolution {
            reason: RejectionReason::InsufficientData,
            diagnostics: Some(SolverDiagnostics {
                g_singularities: g_sing,
                f_singularities: Vec::new(),
                f_infinity: f_infinity(ds)?,
                f_zeros: Vec::new(),
                acceptability_interval: interval,
            }),
        });
    }
    let f_sing = find_g_zeros(ds)?;
    let f_inf = f_infinity(ds)?;
    if f_inf.abs() <= DEGENERATE_ASYMPTOTE_TOL {
        return Ok(StandardOutcome::NoAcceptableSolution {
            reason: RejectionReason::DegenerateAsymptote,
            diagnostics: Some(SolverDiagnostics {
                g_singularities: g_sing,
                f_singularities: f_sing,
                f_infinity: f_inf,
                f_zeros: Vec::new(),
                acceptability_interval: interval,
            }),
        });
    }

    let ext = external_zero(ds, &f_sing, &g_sing, f_inf)?;
    let acceptable = classify_acceptability(ds, ext);
    let ext_zero = FZero {
        a: ext,
        acceptable,
        external: true,
    };
    let f_zeros = match level {
        DiagnosticsLevel::ExternalOnly => vec![ext_zero],
        DiagnosticsLevel::Full => {
            let mut zeros: Vec<FZero> = internal_f_zeros(ds, &f_sing)?
                .into_iter()
                .map(|a| FZero {
                    a,
                    acceptable: classify_acceptability(ds, a),
                    external: false,
                })
                .collect();
            if f_inf > 0.0 {
                zeros.insert(0, ext_zero);
            } else {
                zeros.push(ext_zero);
            }
            zeros
        }
    };
    let diagnostics = SolverDiagnostics {
        g_singularities: g_sing,
        f_singularities: f_sing,
        f_infinity: f_inf,
        f_zeros,
        acceptability_interval: interval,
    };

    if !acceptable {
        return Ok(StandardOutcome::NoAcceptableSolution {
            reason: RejectionReason::ExternalZeroUnacceptable,
            diagnostics: Some(diagnostics),
        });
    }
    let lambda = lambda_of_a(ds, ext)?;
    // The statistic at the fit, evaluated definitionally from the means.
    let means = poisson_means_standard(ds, ext, lambda);
    let (c_min, _) = cash_from_means(ds, &means)?;
    Ok(StandardOutcome::Acceptable(StandardFit {
        a: ext,
        lambda,
        c_min,
        diagnostics,
    }))
}

/// Full solver diagnostics for a dataset, regardless of whether an
/// acceptable fit exists.
pub fn diagnostics(ds: &BinnedDataset, level: DiagnosticsLevel) -> Result<SolverDiagnostics> {
    match fit_standard_with(ds, level)? {
        StandardOutcome::Acceptable(fit) => Ok(fit.diagnostics),
        StandardOutcome::NoAcceptableSolution {
            diagnostics: Some(d),
            ..
        } => Ok(d),
        StandardOutcome::NoAcceptableSolution { .. } => Err(Error::EmptyData),
    }
}
