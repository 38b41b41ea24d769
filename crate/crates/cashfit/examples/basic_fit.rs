//! Fit the standard linear model to a small dataset and inspect the result.
//!
//! ```bash
//! cargo run -p cashfit --example basic_fit
//! ```

use cashfit::{fit_extended, BinnedDataset, ExtendedModel, ModelKind};

fn main() {
    // 100 unit bins on [0, 100], single counts in bins 13, 38 and 89.
    let mut counts = vec![0u64; 100];
    for i in [13, 38, 89] {
        counts[i - 1] = 1;
    }
    let ds = BinnedDataset::from_uniform_bins(0.0, 100.0, &counts).unwrap();

    let fit = fit_extended(&ds).unwrap();
    println!("selected model: {}", fit.kind().name());
    println!("C_min = {:.4}", fit.c_min);

    if let ExtendedModel::Standard(sf) = &fit.model {
        println!("a      = {:+.6}  (slope parameter, 1/x units)", sf.a);
        println!("lambda = {:+.6}  (counts per unit x)", sf.lambda);
        let d = &sf.diagnostics;
        println!("asymptote F_inf = {:+.4}", d.f_infinity);
        println!(
            "acceptable slopes: a < {:.4} or a >= {:.4}",
            d.acceptability_interval.0, d.acceptability_interval.1
        );
    }

    // The three one-parameter fallbacks are always evaluated for comparison;
    // an acceptable standard fit beats all of them.
    assert_eq!(fit.kind(), ModelKind::Standard);
    for alt in &fit.alternatives {
        println!(
            "fallback {:<9} lambda = {:.4}  C = {:.4}",
            alt.kind.name(),
            alt.lambda,
            alt.c
        );
        assert!(fit.c_min < alt.c);
    }

    // Best-fit density at a few points.
    for x in [0.0, 50.0, 100.0] {
        println!(
            "f({x:5.1}) = {:.5} counts per unit x",
            fit.model.density(&ds, x)
        );
    }
}
