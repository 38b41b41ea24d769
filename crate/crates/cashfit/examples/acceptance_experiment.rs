//! Monte Carlo acceptance-fraction experiment: how often does a dataset of
//! M events admit an acceptable standard linear fit, and how often is the
//! asymptote of the slope equation negative?
//!
//! Uniformly distributed counts converge to full acceptance by M ~ 50;
//! rising-density data keep a positive asymptote (and a sizable rejected
//! fraction) even at large M.
//!
//! ```bash
//! cargo run --release -p cashfit --example acceptance_experiment
//! ```

use cashfit::{run_acceptance_experiment, sim, CountShape, SimConfig};

fn main() {
    println!("shape       M    trials  frac_acceptable  frac_Finf_negative");
    for shape in [
        CountShape::Uniform,
        CountShape::Increasing,
        CountShape::Decreasing,
    ] {
        for &m in &sim::DEFAULT_COUNT_GRID {
            let cfg = SimConfig {
                shape,
                counts: m,
                bins: 100,
                trials: 100,
                seed: 1,
                range: (0.0, 100.0),
            };
            let r = run_acceptance_experiment(&cfg).unwrap();
            println!(
                "{:<10} {m:>4}  {:>6}  {:>15.2}  {:>18.2}",
                shape.name(),
                cfg.trials,
                r.fraction_acceptable,
                r.fraction_f_infinity_negative
            );
        }
        println!();
    }
    println!("generator: {}", sim::GENERATOR);
}
