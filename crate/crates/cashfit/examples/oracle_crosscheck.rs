//! Cross-check a fit against the brute-force oracle.
//!
//! The oracle recomputes everything from first principles: a dense grid
//! search over model parameters using only the definitional statistic, and
//! sign-change scans that count the zeros of the solver functions without
//! the solver's bracketing logic. Useful as a template for validating fits
//! on your own data.
//!
//! ```bash
//! cargo run --release -p cashfit --example oracle_crosscheck
//! ```

use cashfit::{fit_standard, oracle, BinnedDataset, StandardOutcome};

fn main() {
    let mut counts = vec![0u64; 100];
    for i in [13, 38, 89] {
        counts[i - 1] = 1;
    }
    let ds = BinnedDataset::from_uniform_bins(0.0, 100.0, &counts).unwrap();

    let fit = match fit_standard(&ds).unwrap() {
        StandardOutcome::Acceptable(f) => f,
        other => panic!("expected an acceptable fit, got {other:?}"),
    };
    println!("solver:  a = {:+.6}, C_min = {:.4}", fit.a, fit.c_min);

    // Zero counts from an independent scan. Both functions must have
    // exactly n-1 zeros.
    let n = ds.num_nonzero();
    let g_count = oracle::count_g_zeros_by_scan(&ds, 4000);
    let f_count = oracle::count_f_zeros_by_scan(&ds, 4000);
    println!(
        "scan oracle: {g_count} zeros of g, {f_count} of the slope equation (expect {})",
        n - 1
    );
    assert_eq!(g_count, n - 1);
    assert_eq!(f_count, n - 1);

    // Dense grid argmin around the optimum, pure definitional statistic.
    let a_grid = oracle::GridSpec::new(-0.05, 0.05, 2000);
    let l_grid = oracle::GridSpec::new(1e-4, 0.1, 2000);
    let best = oracle::grid_minimize_cash(&ds, &a_grid, &l_grid);
    println!(
        "grid oracle: {:?} a = {:+.6}, C = {:.4} (pitch {:.1e})",
        best.family,
        best.a.unwrap_or(f64::NAN),
        best.c,
        a_grid.pitch()
    );
    assert!(best.c >= fit.c_min - 1e-6);
    assert!((best.a.unwrap() - fit.a).abs() <= 2.0 * a_grid.pitch());
    println!("agreement within two grid pitches; oracle never beats the fit");
}
