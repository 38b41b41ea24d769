//! Non-uniform bin widths and a data gap.
//!
//! Three unit bins on [0, 3], no data on (3, 6), six half-width bins on
//! [6, 9], one count everywhere. Gaps are excluded intervals, not zero
//! counts: they modify the normalization integrals rather than pulling the
//! fit down.
//!
//! ```bash
//! cargo run -p cashfit --example gapped_data
//! ```

use cashfit::{cash_from_means, fit_extended, Bin, BinnedDataset, ExtendedModel, GapSpec};

fn main() {
    let mut bins: Vec<Bin> = (0..3)
        .map(|i| Bin::new(i as f64, (i + 1) as f64, 1))
        .collect();
    bins.extend((0..6).map(|k| Bin::new(6.0 + 0.5 * k as f64, 6.0 + 0.5 * (k + 1) as f64, 1)));

    // The void between 3 and 6 is inferred automatically; an explicit
    // GapSpec::Explicit(vec![Gap::new(3.0, 6.0)]) is equivalent.
    let ds = BinnedDataset::build(bins, GapSpec::Auto).unwrap();
    println!(
        "range {:.0}..{:.0}, gap length {}, effective range {}",
        ds.x_a(),
        ds.x_b(),
        ds.gap_length(),
        ds.effective_range()
    );

    let fit = fit_extended(&ds).unwrap();
    println!(
        "selected: {} with C_min = {:.4}",
        fit.kind().name(),
        fit.c_min
    );
    if let ExtendedModel::Standard(sf) = &fit.model {
        println!("a = {:.4}, lambda = {:.4}", sf.a, sf.lambda);
    }

    // Per-bin contributions: wider bins weigh in with larger means.
    let (_, per_bin) = cash_from_means(&ds, &fit.model.means(&ds)).unwrap();
    println!("\n   bin        width  count  mean    C_i");
    let means = fit.model.means(&ds);
    for ((b, mu), c_i) in ds.bins().iter().zip(means.as_slice()).zip(&per_bin) {
        println!(
            "[{:4.1}, {:4.1}]  {:.1}    {}      {:.3}   {:.4}",
            b.x_lo,
            b.x_hi,
            b.width(),
            b.count,
            mu,
            c_i
        );
    }

    println!("\nfallbacks (closed forms, gap-aware):");
    for alt in &fit.alternatives {
        println!(
            "  {:<9} lambda = {:.4}  C = {:.3}",
            alt.kind.name(),
            alt.lambda,
            alt.c
        );
    }
}
