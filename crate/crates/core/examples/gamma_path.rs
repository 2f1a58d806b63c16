//! Walk the least-norm nonnegative path gamma(alpha) on |Gaussian| magnitudes
//! and compare its norms at a breakpoint with the predicted centres.
//!
//! Usage: cargo run --release --example gamma_path [d] [m] [draws]

use l1margin::numerics::Rng;
use l1margin::theory::{check_gamma_concentration, gamma_norms, t_of_m, GammaPath};

fn main() -> l1margin::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let d = args.first().copied().unwrap_or(100_000);
    let m = args.get(1).copied().unwrap_or(200);
    let draws = args.get(2).copied().unwrap_or(5);

    let path = GammaPath::sample(d, &mut Rng::new(1, 0))?;
    println!("d={d}  h_1={:.4}  alpha_max={:.3}", path.h_max(), path.alpha_max());
    println!("{:>7} {:>10} {:>12} {:>14}", "m", "alpha_m", "l1/h_1", "l2^2/h_1^2");
    for k in [2, 10, 50, m, 5 * m, d / 10, d] {
        if (2..=d).contains(&k) {
            let alpha = path.breakpoints[k - 2].1;
            let (l1, l2sq) = gamma_norms(&path, k)?;
            let h1 = path.h_max();
            println!("{k:>7} {alpha:>10.4} {:>12.6} {:>14.6e}", l1 / h1, l2sq / (h1 * h1));
        }
    }

    let t = t_of_m(m as f64, d)?;
    println!("\nt_m = {t:.4} at m={m}");
    let report = check_gamma_concentration(d, m, draws, &Rng::new(2, 0))?;
    println!("centres: l1 {:.6}, l2^2 {:.6e}", report.l1_center, report.l2sq_center);
    for r in &report.draws {
        println!(
            "draw {}: l1 {:.6} ({:+.3}), l2^2 {:.6e} ({:+.3})",
            r.draw, r.l1_ratio, r.l1_rel_dev, r.l2sq_ratio, r.l2sq_rel_dev
        );
    }
    Ok(())
}
