//! The Cash goodness-of-fit statistic for binned Poisson data.
//!
//! `C = 2 sum_i (mu_i - y_i + y_i ln(y_i / mu_i))`, twice the negative log
//! Poisson likelihood up to a data-only constant. Terms with `y_i = 0`
//! contribute `2 mu_i` (the `0 ln 0 := 0` convention). Any bin with a
//! negative mean, or a zero mean paired with a positive count, makes the
//! model unusable and the statistic infinite.

use crate::dataset::BinnedDataset;
use crate::error::{Error, Result};

/// Model-predicted Poisson means, one per bin, in counts.
///
/// Negative entries are representable (candidate models may dip below zero);
/// acceptability is judged by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeans(pub Vec<f64>);

impl ModelMeans {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Bin means of the standard linear model `f(x) = lambda (1 + a (x - x_A))`:
/// `mu_i = f(x_i) dx_i` at each bin center `x_i`.
pub fn poisson_means_standard(ds: &BinnedDataset, a: f64, lambda: f64) -> ModelMeans {
    let mu = ds
        .bins()
        .iter()
        .map(|b| lambda * (1.0 + a * (b.center() - ds.x_a())) * b.width())
        .collect();
    ModelMeans(mu)
}

/// Single-bin contribution to the statistic, as `2 y (d - ln(1+d))` with
/// `d = mu/y - 1`. The `ln_1p` form avoids cancellation near a perfect fit
/// and keeps the term non-negative, as it is analytically.
fn bin_term(count: f64, mu: f64) -> f64 {
    if count > 0.0 {
        if mu <= 0.0 {
            f64::INFINITY
        } else {
            let d = mu / count - 1.0;
            2.0 * count * (d - d.ln_1p()).max(0.0)
        }
    } else if mu < 0.0 {
        f64::INFINITY
    } else {
        2.0 * mu
    }
}

/// Total statistic for a set of means, without materializing per-bin terms.
pub fn cash_total(ds: &BinnedDataset, means: &[f64]) -> Result<f64> {
    if means.len() != ds.num_bins() {
        return Err(Error::LengthMismatch {
            expected: ds.num_bins(),
            got: means.len(),
        });
    }
    let mut total = 0.0;
    for (bin, &mu) in ds.bins().iter().zip(means) {
        let term = bin_term(bin.count as f64, mu);
        if term.is_infinite() {
            return Ok(f64::INFINITY);
        }
        total += term;
    }
    Ok(total)
}

/// Total statistic and the per-bin contributions `C_i`.
pub fn cash_from_means(ds: &BinnedDataset, means: &ModelMeans) -> Result<(f64, Vec<f64>)> {
    if means.len() != ds.num_bins() {
        return Err(Error::LengthMismatch {
            expected: ds.num_bins(),
            got: means.len(),
        });
    }
    let per_bin: Vec<f64> = ds
        .bins()
        .iter()
        .zip(means.as_slice())
        .map(|(bin, &mu)| bin_term(bin.count as f64, mu))
        .collect();
    let total = if per_bin.iter().any(|t| t.is_infinite()) {
        f64::INFINITY
    } else {
        per_bin.iter().sum()
    };
    Ok((total, per_bin))
}

/// Closed-form statistic of the standard linear model, gap-aware.
///
/// Includes the model-independent terms so the value agrees with the
/// definitional [`cash_from_means`] route. The logarithmic form requires
/// `lambda > 0` and positive model factors in all counted bins; outside
/// that domain (any negative mean, or a non-positive factor in a bin with
/// counts) the statistic is infinite.
pub fn cash_standard(ds: &BinnedDataset, a: f64, lambda: f64) -> f64 {
    let m = ds.total_counts() as f64;
    if lambda < 0.0 || (lambda == 0.0 && m > 0.0) {
        return f64::INFINITY;
    }
    if lambda == 0.0 {
        // All means vanish; only empty bins remain, each contributing zero.
        return 0.0;
    }
    // Means must be non-negative in every bin, including empty ones.
    for b in ds.bins() {
        let factor = 1.0 + a * (b.center() - ds.x_a());
        if b.count > 0 {
            if factor <= 0.0 {
                return f64::INFINITY;
            }
        } else if factor < 0.0 {
            return f64::INFINITY;
        }
    }

    let r = ds.range();
    // 2 sum(mu) = 2 lambda [ R (1 + a R / 2) - (R_gap + a S_gap) ]
    let mut c = 2.0 * lambda * (r * (1.0 + 0.5 * a * r) - (ds.gap_length() + a * ds.gap_moment()));
    c -= 2.0 * m * lambda.ln();
    let mut log_sum = 0.0;
    let mut d = -2.0 * m;
    for b in ds.bins() {
        if b.count > 0 {
            let y = b.count as f64;
            log_sum += y * (1.0 + a * (b.center() - ds.x_a())).ln();
            d += 2.0 * y * y.ln() - 2.0 * y * b.width().ln();
        }
    }
    c - 2.0 * log_sum + d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::tests::{gap_dataset, unit_dataset};
    use crate::dataset::{Bin, BinnedDataset, GapSpec};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn flat_model_unit_bins() {
        let ds = unit_dataset(&[38, 89]);
        let means = poisson_means_standard(&ds, 0.0, 1.0);
        assert!(means.as_slice().iter().all(|&mu| (mu - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gap_example_first_bin_mean() {
        let ds = gap_dataset();
        let means = poisson_means_standard(&ds, 0.188, 0.812);
        assert!((means.as_slice()[0] - 0.812 * (1.0 + 0.188 * 0.5)).abs() < 1e-12);
        assert!((means.as_slice()[0] - 0.888).abs() < 5e-3);
    }

    #[test]
    fn negative_mean_is_representable() {
        let ds = unit_dataset(&[38, 89]);
        let means = poisson_means_standard(&ds, -0.077, -0.007);
        assert!((means.as_slice()[0] - (-0.0067)).abs() < 3e-4);
        assert!(means.as_slice()[0] < 0.0);
    }

    #[test]
    fn empty_model_on_empty_data() {
        let ds = BinnedDataset::build(
            vec![Bin::new(0.0, 1.0, 0), Bin::new(1.0, 2.0, 0)],
            GapSpec::Auto,
        )
        .unwrap();
        let (c, per_bin) = cash_from_means(&ds, &ModelMeans(vec![0.0, 0.0])).unwrap();
        assert_eq!(c, 0.0);
        assert_eq!(per_bin, vec![0.0, 0.0]);
    }

    #[test]
    fn perfect_fit_is_zero() {
        let ds = BinnedDataset::build(
            vec![
                Bin::new(0.0, 1.0, 3),
                Bin::new(1.0, 2.0, 1),
                Bin::new(2.0, 3.0, 7),
            ],
            GapSpec::Auto,
        )
        .unwrap();
        let (c, _) = cash_from_means(&ds, &ModelMeans(vec![3.0, 1.0, 7.0])).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn infinite_on_invalid_means() {
        let ds = BinnedDataset::build(
            vec![Bin::new(0.0, 1.0, 1), Bin::new(1.0, 2.0, 0)],
            GapSpec::Auto,
        )
        .unwrap();
        // zero mean under a positive count
        let (c, _) = cash_from_means(&ds, &ModelMeans(vec![0.0, 1.0])).unwrap();
        assert!(c.is_infinite());
        // negative mean under a zero count
        let (c, _) = cash_from_means(&ds, &ModelMeans(vec![1.0, -0.5])).unwrap();
        assert!(c.is_infinite());
    }

    #[test]
    fn gap_example_statistic_at_reference_parameters() {
        let ds = gap_dataset();
        let means = poisson_means_standard(&ds, 0.188, 0.812);
        let (c, per_bin) = cash_from_means(&ds, &means).unwrap();
        assert!((c - 0.078).abs() < 5e-3);
        assert_eq!(per_bin.len(), 9);
        assert!((per_bin.iter().sum::<f64>() - c).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let ds = unit_dataset(&[38]);
        let err = cash_from_means(&ds, &ModelMeans(vec![1.0; 99])).unwrap_err();
        assert_eq!(
            err,
            Error::LengthMismatch {
                expected: 100,
                got: 99
            }
        );
    }

    #[test]
    fn closed_form_matches_definitional() {
        let datasets = [
            unit_dataset(&[38, 89]),
            unit_dataset(&[13, 38, 89]),
            gap_dataset(),
        ];
        let mut rng = StdRng::seed_from_u64(7);
        for ds in &datasets {
            let a_hi = 1.0 / (ds.range() - 0.5 * ds.last_width());
            for _ in 0..1000 {
                // Positive-branch models only: lambda > 0 and positive factors.
                let a = rng.gen_range(-0.9 * a_hi..4.0 / ds.range());
                let lambda = rng.gen_range(1e-3..5.0 * ds.total_counts() as f64 / ds.range());
                let closed = cash_standard(ds, a, lambda);
                let means = poisson_means_standard(ds, a, lambda);
                let (defn, _) = cash_from_means(ds, &means).unwrap();
                assert!(
                    (closed - defn).abs() <= 1e-9 * (1.0 + defn.abs()),
                    "closed={closed} defn={defn} a={a} lambda={lambda}"
                );
            }
        }
    }

    #[test]
    fn closed_form_infinite_outside_domain() {
        let ds = unit_dataset(&[38, 89]);
        // Factor negative at a counted bin.
        assert!(cash_standard(&ds, -1.0, 0.02).is_infinite());
        // Negative normalization.
        assert!(cash_standard(&ds, 0.0, -0.5).is_infinite());
    }

    #[test]
    fn rescaling_x_leaves_statistic() {
        let base = gap_dataset();
        for k in [0.25, 3.0, 40.0] {
            let bins: Vec<Bin> = base
                .bins()
                .iter()
                .map(|b| Bin::new(k * b.x_lo, k * b.x_hi, b.count))
                .collect();
            let scaled = BinnedDataset::build(bins, GapSpec::Auto).unwrap();
            for (a, lambda) in [(0.188, 0.812), (0.0, 1.0), (0.05, 0.3)] {
                let c0 = cash_standard(&base, a, lambda);
                let c1 = cash_standard(&scaled, a / k, lambda / k);
                assert!(
                    (c0 - c1).abs() <= 1e-9 * (1.0 + c0.abs()),
                    "k={k} c0={c0} c1={c1}"
                );
            }
        }
    }

    #[test]
    fn statistic_is_nonnegative() {
        let ds = gap_dataset();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..500 {
            let mu: Vec<f64> = ds.bins().iter().map(|_| rng.gen_range(0.01..5.0)).collect();
            let (c, _) = cash_from_means(&ds, &ModelMeans(mu)).unwrap();
            assert!(c >= 0.0);
            assert!(c > 0.0); // random means never hit the counts exactly
        }
    }
}
