//! Tabulate the solver functions over a slope grid, the data behind the
//! usual diagnostic plots: g(a) with its poles, the slope equation with its
//! zeros, and the normalization profile lambda(a).
//!
//! ```bash
//! cargo run -p cashfit --example scan_functions > scan.csv
//! ```
//!
//! The same table is available from the CLI:
//! `cashfit eval data.csv --grid "-0.12:0.02:200"`.

use cashfit::{solver, BinnedDataset, DiagnosticsLevel};

fn main() {
    let mut counts = vec![0u64; 100];
    counts[37] = 1;
    counts[88] = 1;
    let ds = BinnedDataset::from_uniform_bins(0.0, 100.0, &counts).unwrap();

    let d = solver::diagnostics(&ds, DiagnosticsLevel::Full).unwrap();
    eprintln!("poles of g:       {:?}", d.g_singularities);
    eprintln!("poles of F:       {:?}", d.f_singularities);
    eprintln!("asymptote F_inf:  {:.6}", d.f_infinity);
    for z in &d.f_zeros {
        eprintln!(
            "zero a = {:+.6} external={} acceptable={}",
            z.a, z.external, z.acceptable
        );
    }

    println!("a,F,g,lambda");
    let (lo, hi, steps) = (-0.12, 0.02, 400);
    for k in 0..=steps {
        let a = lo + (hi - lo) * k as f64 / steps as f64;
        let cell = |v: Result<f64, cashfit::Error>| {
            v.ok()
                .filter(|x| x.is_finite())
                .map(|x| format!("{x:.6e}"))
                .unwrap_or_default()
        };
        println!(
            "{a:.6e},{},{},{}",
            cell(solver::f_value(&ds, a)),
            cell(solver::g_value(&ds, a)),
            cell(solver::lambda_of_a(&ds, a)),
        );
    }
}
