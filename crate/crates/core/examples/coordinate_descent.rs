//! Boosting-style coordinate descent versus the exact max-margin LP.
//!
//! Usage: cargo run --release --example coordinate_descent [n] [d] [iters]

use l1margin::classifier::{solve_coordinate_descent, solve_exact, StepSchedule};
use l1margin::datagen::{generate, make_ground_truth, NoiseModel, TruthShape};
use l1margin::numerics::Rng;

fn main() -> l1margin::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(50);
    let d = args.get(1).copied().unwrap_or(200);
    let iters = args.get(2).copied().unwrap_or(20_000);

    let schedules = [
        StepSchedule::ExactLineSearch,
        StepSchedule::Shrunk { factor: 0.1 },
        StepSchedule::Constant { step: 0.01 },
    ];
    println!("instance  exact_margin  {:>14}  {:>14}  {:>14}", "line_search", "shrunk_0.1", "step_0.01");
    for k in 0..5 {
        let mut rng = Rng::new(2024, k);
        let truth = make_ground_truth(d, 1, TruthShape::UnitCoordinate, &mut rng)?;
        let ds = generate(n, &truth, &NoiseModel::Noiseless, &mut rng)?;
        let exact = solve_exact(&ds)?;
        print!("{k:>8}  {:>12.5}", exact.margin);
        for schedule in schedules {
            let cd = solve_coordinate_descent(&ds, iters, schedule)?;
            print!("  {:>8.5} ({:.2})", cd.margin, cd.margin / exact.margin);
        }
        println!();
    }
    Ok(())
}
