//! Predicted risk and l1 localization bound for both label regimes at one
//! (n, d) cell.
//!
//! Usage: cargo run --release --example theory_report [n] [d]

use l1margin::datagen::NoiseModel;
use l1margin::numerics::QuadratureSpec;
use l1margin::theory::{characterize_noise, predicted_risk, Regime};

fn main() -> l1margin::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = args.first().copied().unwrap_or(200);
    let d = args.get(1).copied().unwrap_or(20_000);

    let noiseless = predicted_risk(Regime::Noiseless, n, d, 1, 1.0, None)?;
    println!(
        "noiseless  n={n} d={d}: s_dagger={:.2} t={:.4} M={:.4} risk={:.4}",
        noiseless.m_star, noiseless.t_star, noiseless.m, noiseless.predicted_risk
    );

    let quad = QuadratureSpec::precise();
    for model in [
        NoiseModel::random_flip(0.2)?,
        NoiseModel::logistic(1.0)?,
        NoiseModel::pre_quant_gaussian(1.0)?,
    ] {
        let chars = characterize_noise(&model, &quad)?;
        print!(
            "{:<20} nu_bar={:.5} f*={:.5} zeta_eta={:.5} zeta_nu={:.5} kappa_sigma={:.5}",
            format!("{}({})", model.name(), model.sigma()),
            chars.nu_bar,
            chars.f_star,
            chars.zeta_eta,
            chars.zeta_nu,
            chars.kappa_sigma()
        );
        match predicted_risk(Regime::Noisy, n, d, 1, 1.0, Some(&chars)) {
            Ok(r) => println!("  s*={:.1} t={:.4} M={:.4} risk={:.4}", r.m_star, r.t_star, r.m, r.predicted_risk),
            Err(e) => println!("  ({e})"),
        }
        for w in predicted_risk(Regime::Noisy, n, d, 1, 1.0, Some(&chars)).map(|r| r.warnings).unwrap_or_default() {
            eprintln!("  warning: {w}");
        }
    }
    Ok(())
}
