//! Solve a small hand-written linear program with mixed row senses and
//! variable bounds, then print the solution and the row multipliers.
//!
//! Usage: cargo run --release --example linear_program

use l1margin::optim::{solve_lp, LinearProgram, RowSense};

fn main() -> l1margin::Result<()> {
    // minimise  -x0 - 2 x1 + x2
    // s.t.      x0 +   x1 + x2 <= 4
    //           x0 -   x1      >= -1
    //                  x1 + x2  = 2
    //           0 <= x0 <= 3, 0 <= x1, -1 <= x2 <= 1
    let lp = LinearProgram::from_rows(
        vec![-1.0, -2.0, 1.0],
        &[
            (vec![1.0, 1.0, 1.0], RowSense::Le, 4.0),
            (vec![1.0, -1.0, 0.0], RowSense::Ge, -1.0),
            (vec![0.0, 1.0, 1.0], RowSense::Eq, 2.0),
        ],
    )?
    .with_bounds(vec![0.0, 0.0, -1.0], vec![3.0, f64::INFINITY, 1.0])?;

    let sol = solve_lp(&lp, 1e-9, 1e-9)?;
    println!("status      {:?}", sol.status);
    println!("x           {:?}", sol.x);
    println!("objective   {}", sol.objective_value);
    println!("pivots      {}", sol.iterations);
    println!("duals       {:?}", sol.duals);
    println!("violation   {:e}", lp.max_violation(&sol.x));
    Ok(())
}
