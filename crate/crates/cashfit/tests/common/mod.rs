//! Shared constructors for the integration suites.
#![allow(dead_code)]

use cashfit::{Bin, BinnedDataset, GapSpec};
use rand::rngs::StdRng;
use rand::Rng;

/// 100 unit bins on [0, 100] with the given 1-based indices holding one
/// count each.
pub fn unit_dataset(ones: &[usize]) -> BinnedDataset {
    let mut counts = vec![0u64; 100];
    for &i in ones {
        counts[i - 1] = 1;
    }
    BinnedDataset::from_uniform_bins(0.0, 100.0, &counts).unwrap()
}

/// The worked example with non-uniform bins and a gap: three unit bins on
/// [0,3], a gap (3,6), six half-width bins on [6,9], every count 1.
pub fn gap_dataset() -> BinnedDataset {
    let mut bins: Vec<Bin> = (0..3)
        .map(|i| Bin::new(i as f64, i as f64 + 1.0, 1))
        .collect();
    bins.extend((0..6).map(|k| Bin::new(6.0 + 0.5 * k as f64, 6.0 + 0.5 * (k + 1) as f64, 1)));
    BinnedDataset::build(bins, GapSpec::Auto).unwrap()
}

/// CSV text for the gap example, in the CLI input format.
pub fn gap_dataset_csv() -> String {
    let mut text = String::from("# non-uniform bins with a gap\nx_lo,x_hi,count\n");
    for b in gap_dataset().bins() {
        text.push_str(&format!("{},{},{}\n", b.x_lo, b.x_hi, b.count));
    }
    text
}

/// Random dataset with up to `max_bins` non-uniform bins, up to `max_counts`
/// events, and optional gaps.
pub fn random_dataset(rng: &mut StdRng, max_bins: usize, max_counts: u64) -> BinnedDataset {
    let n_bins = rng.gen_range(1..=max_bins);
    let x0 = rng.gen_range(-10.0..10.0);
    let mut bins = Vec::with_capacity(n_bins);
    let mut edge = x0;
    for _ in 0..n_bins {
        // Occasionally leave a void for AUTO gap inference.
        if !bins.is_empty() && rng.gen_bool(0.15) {
            edge += rng.gen_range(0.5..4.0);
        }
        let width = rng.gen_range(0.2..3.0);
        bins.push(Bin::new(edge, edge + width, 0));
        edge += width;
    }
    let m = rng.gen_range(0..=max_counts);
    for _ in 0..m {
        let idx = rng.gen_range(0..n_bins);
        bins[idx].count += 1;
    }
    BinnedDataset::build(bins, GapSpec::Auto).unwrap()
}
