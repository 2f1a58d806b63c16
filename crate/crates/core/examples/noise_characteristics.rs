//! Scale minimiser, minimum value and curvature of the population objective
//! f(nu, eta) for each label-noise law over a range of noise levels.
//!
//! Usage: cargo run --release --example noise_characteristics

use l1margin::datagen::NoiseModel;
use l1margin::numerics::QuadratureSpec;
use l1margin::theory::{characterize_noise, f_expectation};

fn main() -> l1margin::Result<()> {
    let quad = QuadratureSpec::precise();
    println!(
        "{:<20} {:>6} {:>9} {:>9} {:>9} {:>9} {:>11}",
        "model", "sigma", "nu_bar", "f*", "zeta_eta", "zeta_nu", "kappa_sigma"
    );
    let families: [(&str, &[f64]); 3] = [
        ("flip", &[0.05, 0.1, 0.2, 0.3, 0.4]),
        ("logistic", &[0.5, 1.0, 2.0, 4.0]),
        ("prequant", &[0.25, 0.5, 1.0, 2.0]),
    ];
    for (name, sigmas) in families {
        for &sigma in sigmas {
            let model = NoiseModel::from_name(name, Some(sigma))?;
            let c = characterize_noise(&model, &quad)?;
            println!(
                "{:<20} {sigma:>6} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>11.5}",
                model.name(),
                c.nu_bar,
                c.f_star,
                c.zeta_eta,
                c.zeta_nu,
                c.kappa_sigma()
            );
        }
    }

    let model = NoiseModel::random_flip(0.2)?;
    println!("\nf(nu, 0) for random_flip(0.2):");
    for nu in [0.1, 0.25, 0.4, 0.5, 0.6, 0.8, 1.0, 2.0] {
        println!("  nu={nu:<5} f={:.6}", f_expectation(&model, nu, 0.0, &quad)?);
    }
    Ok(())
}
