//! Fit the maximum l1-margin classifier on synthetic data and report its
//! norm, margin, support and risk.
//!
//! Usage: cargo run --release --example margin_classifier [n] [d] [flip_prob]

use std::time::Instant;

use l1margin::classifier::{exact_risk, solve_exact};
use l1margin::datagen::{empirical_risk, generate, make_ground_truth, NoiseModel, TruthShape};
use l1margin::numerics::Rng;

fn main() -> l1margin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|a| a.parse().ok()).unwrap_or(200);
    let d: usize = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    let flip: f64 = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(0.0);
    let noise = if flip > 0.0 { NoiseModel::random_flip(flip)? } else { NoiseModel::Noiseless };

    let mut rng = Rng::new(7, 0);
    let truth = make_ground_truth(d, 1, TruthShape::UnitCoordinate, &mut rng)?;
    let ds = generate(n, &truth, &noise, &mut rng)?;
    println!("n={n} d={d} noise={} corrupted={:.3}", noise.name(), ds.corruption_rate());

    let start = Instant::now();
    let sol = solve_exact(&ds)?;
    let elapsed = start.elapsed();
    if !sol.feasible {
        println!("data not linearly separable");
        return Ok(());
    }
    println!("simplex iterations  {}", sol.iterations);
    println!("solve time          {:.2?}", elapsed);
    println!("||w||_1             {:.6}", sol.l1_norm);
    println!("margin              {:.6}", sol.margin);
    println!("margin * ||w||_1    {:.12}", sol.margin * sol.l1_norm);
    println!("support size        {}", sol.support_size(1e-9));
    println!("risk (closed form)  {:.5}", exact_risk(&sol.w, &truth)?);
    let mut test_rng = rng.substream(1);
    println!("risk (1e6 samples)  {:.5}", empirical_risk(&sol.w, &truth, 1_000_000, &mut test_rng)?);
    Ok(())
}
