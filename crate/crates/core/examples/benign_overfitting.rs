//! Noisy labels: the max l1-margin classifier interpolates every corrupted
//! label, yet its risk keeps falling as the dimension grows.
//!
//! Usage: cargo run --release --example benign_overfitting [key=value ...]

use l1margin::experiment::{run_experiment, ExperimentConfig};

fn main() -> l1margin::Result<()> {
    let overrides: Vec<String> = std::env::args().skip(1).collect();
    let cfg = ExperimentConfig::from_toml_str(include_str!("configs/benign_overfitting.toml"), &overrides)?;
    let result = run_experiment(&cfg)?;
    if let Some(c) = &result.noise {
        println!(
            "{}({}): nu_bar={:.4} f*={:.4} zeta_eta={:.4} kappa_sigma={:.4}",
            c.model.name(),
            c.model.sigma(),
            c.nu_bar,
            c.f_star,
            c.zeta_eta,
            c.kappa_sigma()
        );
    }
    println!(
        "{:>6} {:>7} {:>9} {:>9} {:>9} {:>8} {:>8}",
        "n", "d", "median", "mc risk", "theory", "l1", "M"
    );
    for c in &result.cells {
        let a = &c.aggregates;
        let theory = c.theory.as_ref();
        println!(
            "{:>6} {:>7} {:>9.4} {:>9.4} {:>9.4} {:>8.3} {:>8.3}",
            c.n,
            c.d,
            a.risk_exact.map_or(f64::NAN, |s| s.median),
            a.risk_empirical.map_or(f64::NAN, |s| s.median),
            theory.map_or(f64::NAN, |t| t.predicted_risk),
            c.median_l1().unwrap_or(f64::NAN),
            theory.map_or(f64::NAN, |t| t.m)
        );
        if a.infeasible > 0 {
            println!("        {} of {} samples were not separable", a.infeasible, cfg.trials);
        }
    }
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
