//! Validated in-memory representation of binned Poisson count data.
//!
//! A dataset is an ordered set of bins tiling a range `[x_A, x_B]` of the
//! independent variable, possibly interrupted by explicit gaps (intervals
//! carrying no bins, excluded from the analysis). Bins are specified by their
//! edges, not centers, so non-uniform widths and gap adjacency are
//! unambiguous. All range-level scalars used by the fitting formulas are
//! computed once at construction and cached.

use crate::error::{Error, Result};

/// Relative contiguity tolerance: edge mismatches up to `CONTIGUITY_REL * R`
/// are treated as decimal noise, not gaps.
pub const CONTIGUITY_REL: f64 = 1e-9;

/// One bin: an interval of the independent variable with an integer count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub x_lo: f64,
    pub x_hi: f64,
    pub count: u64,
}

impl Bin {
    pub fn new(x_lo: f64, x_hi: f64, count: u64) -> Self {
        Bin { x_lo, x_hi, count }
    }

    /// Bin center.
    pub fn center(&self) -> f64 {
        0.5 * (self.x_lo + self.x_hi)
    }

    /// Bin width.
    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }
}

/// A continuous interval of the independent variable not covered by any bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub x_a: f64,
    pub x_b: f64,
}

impl Gap {
    pub fn new(x_a: f64, x_b: f64) -> Self {
        Gap { x_a, x_b }
    }

    /// Gap length.
    pub fn length(&self) -> f64 {
        self.x_b - self.x_a
    }

    /// Gap midpoint.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.x_a + self.x_b)
    }
}

/// How gaps are supplied to [`BinnedDataset::build`].
#[derive(Debug, Clone)]
pub enum GapSpec {
    /// Infer gaps from the voids between non-contiguous consecutive bins.
    Auto,
    /// Declared gaps; they must exactly cover the voids between bins.
    /// Declared endpoints are snapped to the adjacent bin edges, and gaps
    /// shorter than the contiguity tolerance are dropped as decimal noise.
    Explicit(Vec<Gap>),
}

/// Binned Poisson data over a range, with cached derived scalars.
///
/// Construction validates all structural invariants: strictly positive bin
/// widths, no overlaps, and bins plus gaps exactly tiling `[x_A, x_B]`.
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct BinnedDataset {
    bins: Vec<Bin>,
    gaps: Vec<Gap>,
    x_a: f64,
    x_b: f64,
    total_counts: u64,
    nonzero: Vec<(f64, f64)>,
    range: f64,
    gap_length: f64,
    gap_moment: f64,
    effective_range: f64,
    gap_edge_sq_sum: f64,
    gap_end_moment: f64,
}

impl BinnedDataset {
    /// Build a dataset from bins and a gap specification, taking the range
    /// from the first and last bin edges.
    pub fn build(bins: Vec<Bin>, gaps: GapSpec) -> Result<Self> {
        Self::build_with_range(bins, gaps, None)
    }

    /// Build with an explicit range override. The override is rejected unless
    /// it coincides with the outer bin edges (the formulas assume the data
    /// cover the entire range).
    pub fn build_with_range(
        mut bins: Vec<Bin>,
        gaps: GapSpec,
        range: Option<(f64, f64)>,
    ) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::NoBins);
        }
        bins.sort_by(|a, b| a.x_lo.total_cmp(&b.x_lo));
        for (i, b) in bins.iter().enumerate() {
            if b.x_hi <= b.x_lo || !b.x_lo.is_finite() || !b.x_hi.is_finite() {
                return Err(Error::NegativeWidth {
                    index: i,
                    x_lo: b.x_lo,
                    x_hi: b.x_hi,
                });
            }
        }

        let x_a = bins[0].x_lo;
        let x_b = bins[bins.len() - 1].x_hi;
        let range_len = x_b - x_a;
        let tol = CONTIGUITY_REL * range_len;

        if let Some((lo, hi)) = range {
            if (lo - x_a).abs() > tol || (hi - x_b).abs() > tol {
                return Err(Error::RangeMismatch { x_a: lo, x_b: hi });
            }
        }

        // Voids between consecutive bins, identified by the left bin index.
        let mut voids: Vec<(usize, f64, f64)> = Vec::new();
        for i in 0..bins.len() - 1 {
            let d = bins[i + 1].x_lo - bins[i].x_hi;
            if d < -tol {
                return Err(Error::OverlappingBins { index: i });
            }
            if d > tol {
                voids.push((i, bins[i].x_hi, bins[i + 1].x_lo));
            }
        }

        let gaps: Vec<Gap> = match gaps {
            GapSpec::Auto => voids.iter().map(|&(_, a, b)| Gap::new(a, b)).collect(),
            GapSpec::Explicit(declared) => {
                Self::match_gaps(&bins, &voids, declared, x_a, x_b, tol)?
            }
        };

        let total_counts: u64 = bins.iter().map(|b| b.count).sum();
        let nonzero: Vec<(f64, f64)> = bins
            .iter()
            .filter(|b| b.count > 0)
            .map(|b| (b.center() - x_a, b.count as f64))
            .collect();

        let gap_length: f64 = gaps.iter().map(Gap::length).sum();
        let gap_moment: f64 = gaps.iter().map(|g| g.length() * (g.midpoint() - x_a)).sum();
        let gap_edge_sq_sum: f64 = gaps.iter().map(|g| g.x_b * g.x_b - g.x_a * g.x_a).sum();
        let gap_end_moment: f64 = gaps
            .iter()
            .map(|g| (g.length() / range_len) * (x_b - g.midpoint()))
            .sum();
        // Exactly R when there are no gaps, not just numerically.
        let effective_range = if gaps.is_empty() {
            range_len
        } else {
            (range_len * range_len - 2.0 * gap_moment) / (range_len - gap_length)
        };

        Ok(BinnedDataset {
            bins,
            gaps,
            x_a,
            x_b,
            total_counts,
            nonzero,
            range: range_len,
            gap_length,
            gap_moment,
            effective_range,
            gap_edge_sq_sum,
            gap_end_moment,
        })
    }

    /// Validate declared gaps against the voids and snap them to bin edges.
    fn match_gaps(
        bins: &[Bin],
        voids: &[(usize, f64, f64)],
        declared: Vec<Gap>,
        x_a: f64,
        x_b: f64,
        tol: f64,
    ) -> Result<Vec<Gap>> {
        for (gi, g) in declared.iter().enumerate() {
            if g.x_b <= g.x_a || !g.x_a.is_finite() || !g.x_b.is_finite() {
                return Err(Error::InvalidGap {
                    index: gi,
                    x_a: g.x_a,
                    x_b: g.x_b,
                });
            }
        }
        // Sub-tolerance gaps are decimal noise.
        let declared: Vec<Gap> = declared.into_iter().filter(|g| g.length() > tol).collect();
        for (gi, g) in declared.iter().enumerate() {
            if g.x_a < x_a - tol || g.x_b > x_b + tol {
                return Err(Error::InvalidGap {
                    index: gi,
                    x_a: g.x_a,
                    x_b: g.x_b,
                });
            }
            for (bi, b) in bins.iter().enumerate() {
                if g.x_a < b.x_hi - tol && g.x_b > b.x_lo + tol {
                    return Err(Error::GapBinOverlap {
                        gap_index: gi,
                        bin_index: bi,
                    });
                }
            }
        }
        let mut used = vec![false; declared.len()];
        let mut snapped = Vec::with_capacity(voids.len());
        for &(left_bin, lo, hi) in voids {
            let hit = declared
                .iter()
                .position(|g| (g.x_a - lo).abs() <= tol && (g.x_b - hi).abs() <= tol);
            match hit {
                Some(gi) => {
                    used[gi] = true;
                    snapped.push(Gap::new(lo, hi));
                }
                None => return Err(Error::UncoveredVoid { index: left_bin }),
            }
        }
        if let Some(gi) = used.iter().position(|&u| !u) {
            // A leftover gap sits inside a void already covered by another.
            return Err(Error::InvalidGap {
                index: gi,
                x_a: declared[gi].x_a,
                x_b: declared[gi].x_b,
            });
        }
        Ok(snapped)
    }

    /// Convenience constructor: `counts.len()` equal-width bins tiling
    /// `[x_a, x_b]` with no gaps.
    pub fn from_uniform_bins(x_a: f64, x_b: f64, counts: &[u64]) -> Result<Self> {
        let n = counts.len();
        if n == 0 {
            return Err(Error::NoBins);
        }
        let r = x_b - x_a;
        let bins = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                Bin::new(
                    x_a + r * (i as f64) / (n as f64),
                    x_a + r * ((i + 1) as f64) / (n as f64),
                    c,
                )
            })
            .collect();
        Self::build(bins, GapSpec::Auto)
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    /// Range start `x_A`.
    pub fn x_a(&self) -> f64 {
        self.x_a
    }

    /// Range end `x_B`.
    pub fn x_b(&self) -> f64 {
        self.x_b
    }

    /// Number of bins, `N`.
    pub fn num_bins(&self) -> usize {
        self.bins.len()
    }

    /// Total counts over all bins, `M`.
    pub fn total_counts(&self) -> u64 {
        self.total_counts
    }

    /// Number of bins with non-zero counts, `n`.
    pub fn num_nonzero(&self) -> usize {
        self.nonzero.len()
    }

    /// Full range length `R = x_B - x_A`.
    pub fn range(&self) -> f64 {
        self.range
    }

    /// Combined length of all gaps.
    pub fn gap_length(&self) -> f64 {
        self.gap_length
    }

    /// Gap lengths weighted by their midpoint offset from the range start.
    pub fn gap_moment(&self) -> f64 {
        self.gap_moment
    }

    /// Range value to use in the slope equation when gaps are present;
    /// equals [`Self::range`] exactly for gap-free data.
    pub fn effective_range(&self) -> f64 {
        self.effective_range
    }

    /// Sum of squared gap edges, `sum(x_b^2 - x_a^2)` over gaps.
    pub fn gap_edge_sq_sum(&self) -> f64 {
        self.gap_edge_sq_sum
    }

    /// Gap lengths (as fractions of the range) weighted by their midpoint
    /// distance from the range end.
    pub fn gap_end_moment(&self) -> f64 {
        self.gap_end_moment
    }

    /// Width of the first bin.
    pub fn first_width(&self) -> f64 {
        self.bins[0].width()
    }

    /// Width of the last bin.
    pub fn last_width(&self) -> f64 {
        self.bins[self.bins.len() - 1].width()
    }

    /// Center offsets and counts of the non-zero bins, ascending in offset.
    /// Offsets are measured from the range start.
    pub fn nonzero_bins(&self) -> &[(f64, f64)] {
        &self.nonzero
    }

    /// Per-bin center offsets from the range start, for all bins.
    pub fn center_offsets(&self) -> impl Iterator<Item = f64> + '_ {
        let x_a = self.x_a;
        self.bins.iter().map(move |b| b.center() - x_a)
    }
}
