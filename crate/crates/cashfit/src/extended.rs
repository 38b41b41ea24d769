//! Extended non-negative linear model family.
//!
//! Not every dataset admits an acceptable standard linear fit (single counts
//! never do, and the external zero may land in the unacceptable interval).
//! Three one-parameter fallbacks, each with a closed-form maximum-likelihood
//! solution, guarantee that every dataset gets exactly one non-negative
//! best-fit linear model:
//!
//! * pivot at the range start: `f(x) = lambda_a (x - x_A)`,
//! * pivot at the range end: `f(x) = lambda_b (1 - (x - x_A)/R)`,
//! * constant: `f(x) = lambda_c`.
//!
//! When the standard model is acceptable its statistic is always the lowest,
//! so the extended fit simply selects the standard model in that case, and
//! the lowest-statistic fallback otherwise.

use crate::cash::{cash_from_means, poisson_means_standard, ModelMeans};
use crate::dataset::BinnedDataset;
use crate::error::{Error, Result};
use crate::solver::{self, RejectionReason, StandardFit, StandardOutcome};

/// Which member of the extended family a fit selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Standard,
    PivotA,
    PivotB,
    Constant,
    /// All-zero data: the zero model fits perfectly.
    DegenerateEmpty,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Standard => "standard",
            ModelKind::PivotA => "pivot_a",
            ModelKind::PivotB => "pivot_b",
            ModelKind::Constant => "constant",
            ModelKind::DegenerateEmpty => "degenerate_empty",
        }
    }
}

/// A fitted member of the extended family with enough information to
/// evaluate its density and bin means.
#[derive(Debug, Clone)]
pub enum ExtendedModel {
    Standard(StandardFit),
    PivotA { lambda: f64 },
    PivotB { lambda: f64 },
    Constant { lambda: f64 },
    DegenerateEmpty,
}

impl ExtendedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            ExtendedModel::Standard(_) => ModelKind::Standard,
            ExtendedModel::PivotA { .. } => ModelKind::PivotA,
            ExtendedModel::PivotB { .. } => ModelKind::PivotB,
            ExtendedModel::Constant { .. } => ModelKind::Constant,
            ExtendedModel::DegenerateEmpty => ModelKind::DegenerateEmpty,
        }
    }

    /// Density `f(x)` of the fitted model, in counts per unit x.
    pub fn density(&self, ds: &BinnedDataset, x: f64) -> f64 {
        let t = x - ds.x_a();
        match self {
            ExtendedModel::Standard(fit) => fit.lambda * (1.0 + fit.a * t),
            ExtendedModel::PivotA { lambda } => lambda * t,
            ExtendedModel::PivotB { lambda } => lambda * (1.0 - t / ds.range()),
            ExtendedModel::Constant { lambda } => *lambda,
            ExtendedModel::DegenerateEmpty => 0.0,
        }
    }

    /// Predicted Poisson means, one per bin.
    pub fn means(&self, ds: &BinnedDataset) -> ModelMeans {
        match self {
            ExtendedModel::Standard(fit) => poisson_means_standard(ds, fit.a, fit.lambda),
            _ => ModelMeans(
                ds.bins()
                    .iter()
                    .map(|b| self.density(ds, b.center()) * b.width())
                    .collect(),
            ),
        }
    }
}

/// One evaluated fallback model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FallbackFit {
    pub kind: ModelKind,
    pub lambda: f64,
    pub c: f64,
}

/// The unique non-negative best-fit linear model for a dataset.
#[derive(Debug, Clone)]
pub struct ExtendedFit {
    pub model: ExtendedModel,
    pub c_min: f64,
    /// All evaluated fallbacks (pivot at start, pivot at end, constant),
    /// empty only for all-zero data.
    pub alternatives: Vec<FallbackFit>,
    /// Why the standard model was not selected, when it was not.
    pub standard_rejection: Option<RejectionReason>,
    /// Diagnostics from the standard-model attempt, when one ran.
    pub diagnostics: Option<solver::SolverDiagnostics>,
}

impl ExtendedFit {
    pub fn kind(&self) -> ModelKind {
        self.model.kind()
    }
}

/// Best-fit model pivoted to zero at the range start:
/// `lambda_a = 2M / (R^2 - 2 S_gap)`, reducing to `2M/R^2` without gaps.
/// The statistic is evaluated definitionally from the means.
pub fn fit_pivot_a(ds: &BinnedDataset) -> Result<(f64, f64)> {
    if ds.total_counts() == 0 {
        return Err(Error::EmptyData);
    }
    let r = ds.range();
    let lambda = 2.0 * ds.total_counts() as f64 / (r * r - 2.0 * ds.gap_moment());
    let model = ExtendedModel::PivotA { lambda };
    let (c, _) = cash_from_means(ds, &model.means(ds))?;
    Ok((lambda, c))
}

/// Best-fit model pivoted to zero at the range end:
/// `lambda_b = 2M / (R - 2 S_end)`, reducing to `2M/R` without gaps.
pub fn fit_pivot_b(ds: &BinnedDataset) -> Result<(f64, f64)> {
    if ds.total_counts() == 0 {
        return Err(Error::EmptyData);
    }
    let lambda = 2.0 * ds.total_counts() as f64 / (ds.range() - 2.0 * ds.gap_end_moment());
    let model = ExtendedModel::PivotB { lambda };
    let (c, _) = cash_from_means(ds, &model.means(ds))?;
    Ok((lambda, c))
}

/// Best-fit constant model: `lambda_c = M / (R - R_gap)`, the sample average
/// density. All-zero data yield `lambda_c = 0` with a vanishing statistic.
pub fn fit_constant(ds: &BinnedDataset) -> Result<(f64, f64)> {
    let lambda = ds.total_counts() as f64 / (ds.range() - ds.gap_length());
    let model = ExtendedModel::Constant { lambda };
    let (c, _) = cash_from_means(ds, &model.means(ds))?;
    Ok((lambda, c))
}

fn evaluate_fallbacks(ds: &BinnedDataset) -> Result<Vec<FallbackFit>> {
    let (la, ca) = fit_pivot_a(ds)?;
    let (lb, cb) = fit_pivot_b(ds)?;
    let (lc, cc) = fit_constant(ds)?;
    Ok(vec![
        FallbackFit {
            kind: ModelKind::PivotA,
            lambda: la,
            c: ca,
        },
        FallbackFit {
            kind: ModelKind::PivotB,
            lambda: lb,
            c: cb,
        },
        FallbackFit {
            kind: ModelKind::Constant,
            lambda: lc,
            c: cc,
        },
    ])
}

/// Ties within this margin resolve by fixed preference order:
/// pivot at start, pivot at end, constant.
const TIE_TOL: f64 = 1e-12;

fn best_fallback(fallbacks: &[FallbackFit]) -> FallbackFit {
    let mut best = fallbacks[0];
    for f in &fallbacks[1..] {
        if f.c < best.c - TIE_TOL {
            best = *f;
        }
    }
    best
}

/// Fit the extended non-negative linear model.
///
/// Selects the standard two-parameter model when it has an acceptable
/// solution, otherwise the lowest-statistic fallback. Never fails on valid
/// data, and the selected model has non-negative means in every bin.
pub fn fit_extended(ds: &BinnedDataset) -> Result<ExtendedFit> {
    fit_extended_with(ds, solver::DiagnosticsLevel::ExternalOnly)
}

/// [`fit_extended`] with control over how many zeros the diagnostics carry.
pub fn fit_extended_with(
    ds: &BinnedDataset,
    level: solver::DiagnosticsLevel,
) -> Result<ExtendedFit> {
    if ds.total_counts() == 0 {
        return Ok(ExtendedFit {
            model: ExtendedModel::DegenerateEmpty,
            c_min: 0.0,
            alternatives: Vec::new(),
            standard_rejection: Some(RejectionReason::EmptyData),
            diagnostics: None,
        });
    }
    let alternatives = evaluate_fallbacks(ds)?;
    match solver::fit_standard_with(ds, level)? {
        // The boundary case of a zero mean under a positive count makes the
        // accepted standard statistic infinite; fall back in that case.
        StandardOutcome::Acceptable(fit) if fit.c_min.is_finite() => Ok(ExtendedFit {
            c_min: fit.c_min,
            model: ExtendedModel::Standard(fit),
            alternatives,
            standard_rejection: None,
            diagnostics: None,
        }),
        StandardOutcome::Acceptable(fit) => {
            let best = best_fallback(&alternatives);
            Ok(ExtendedFit {
                model: fallback_model(best),
                c_min: best.c,
                alternatives,
                standard_rejection: Some(RejectionReason::ExternalZeroUnacceptable),
                diagnostics: Some(fit.diagnostics),
            })
        }
        StandardOutcome::NoAcceptableSolution {
            reason,
            diagnostics,
        } => {
            let best = best_fallback(&alternatives);
            Ok(ExtendedFit {
                model: fallback_model(best),
                c_min: best.c,
                alternatives,
                standard_rejection: Some(reason),
                diagnostics,
            })
        }
    }
}

fn fallback_model(f: FallbackFit) -> ExtendedModel {
    match f.kind {
        ModelKind::PivotA => ExtendedModel::PivotA { lambda: f.lambda },
        ModelKind::PivotB => ExtendedModel::PivotB { lambda: f.lambda },
        ModelKind::Constant => ExtendedModel::Constant { lambda: f.lambda },
        _ => unreachable!("fallbacks are one-parameter models"),
    }
}
