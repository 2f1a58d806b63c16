//! Monte Carlo sweep over n with noiseless labels: median risk per cell, the
//! predicted rate and the fitted log-log slope.
//!
//! Usage: cargo run --release --example noiseless_sweep [key=value ...]
//!
//! Arguments override the bundled config, e.g. `trials=4 'n=[50,100,200]'`.

use l1margin::experiment::{run_experiment, ExperimentConfig};

fn main() -> l1margin::Result<()> {
    let overrides: Vec<String> = std::env::args().skip(1).collect();
    let cfg = ExperimentConfig::from_toml_str(include_str!("configs/noiseless_rate.toml"), &overrides)?;
    let result = run_experiment(&cfg)?;

    println!("{:>6} {:>7} {:>9} {:>9} {:>9} {:>9}", "n", "d", "median", "iqr", "theory", "l1/M");
    for c in &result.cells {
        let risk = c.aggregates.risk_exact.expect("noiseless data is separable");
        let theory = c.theory.as_ref();
        println!(
            "{:>6} {:>7} {:>9.4} {:>9.4} {:>9.4} {:>9.3}",
            c.n,
            c.d,
            risk.median,
            risk.iqr(),
            theory.map_or(f64::NAN, |t| t.predicted_risk),
            c.median_l1().unwrap_or(f64::NAN) / theory.map_or(f64::NAN, |t| t.m)
        );
    }
    for (label, fit) in &result.slopes {
        println!("{label}: slope {:.3} +- {:.3} (rate exponent -1/3)", fit.slope, fit.stderr);
    }
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
