//! A dataset whose maximum-likelihood line goes negative, and what the
//! extended model does about it.
//!
//! Two single counts at x = 37.5 and x = 88.5 over [0, 100]: the slope
//! equation has exactly one zero, but the line it describes dips below zero
//! in the early bins, so it cannot serve as a Poisson mean. The extended
//! family falls back to the best of three one-parameter models.
//!
//! ```bash
//! cargo run -p cashfit --example no_acceptable_solution
//! ```

use cashfit::{
    fit_extended, fit_standard, poisson_means_standard, solver, BinnedDataset, StandardOutcome,
};

fn main() {
    let mut counts = vec![0u64; 100];
    counts[37] = 1;
    counts[88] = 1;
    let ds = BinnedDataset::from_uniform_bins(0.0, 100.0, &counts).unwrap();

    match fit_standard(&ds).unwrap() {
        StandardOutcome::Acceptable(fit) => {
            println!("unexpected acceptable fit: a={}", fit.a)
        }
        StandardOutcome::NoAcceptableSolution {
            reason,
            diagnostics,
        } => {
            println!("standard model rejected: {reason:?}");
            let d = diagnostics.expect("diagnostics for two counts");
            let z = &d.f_zeros[0];
            println!(
                "external zero a = {:+.4}, inside the unacceptable interval ({:+.4}, {:+.4})",
                z.a, d.acceptability_interval.0, d.acceptability_interval.1
            );
            let lambda = solver::lambda_of_a(&ds, z.a).unwrap();
            let means = poisson_means_standard(&ds, z.a, lambda);
            println!(
                "its normalization lambda = {lambda:+.4} puts the first bin mean at {:+.4}",
                means.as_slice()[0]
            );
        }
    }

    let fit = fit_extended(&ds).unwrap();
    println!();
    println!("extended fit selects: {}", fit.kind().name());
    for alt in &fit.alternatives {
        let marker = if alt.kind == fit.kind() {
            "  <- chosen"
        } else {
            ""
        };
        println!(
            "  {:<9} lambda = {:.4}  C = {:.3}{marker}",
            alt.kind.name(),
            alt.lambda,
            alt.c
        );
    }
}
