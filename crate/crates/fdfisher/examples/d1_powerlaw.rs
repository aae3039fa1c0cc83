//! The sign change behind the counterexample: D₁ splits into a positive
//! component scaling like α^{-d/2} and a negative one like α^{1-d/2}, so for
//! any ε > 0 a steep enough profile flips its sign.
//!
//! cargo run -p fdfisher --example d1_powerlaw

use fdfisher::oracles::{counterexample_integrals, d1_components};
use fdfisher::report::fit_loglog_slope;

fn main() {
    let eps = 0.2;
    for d in [2usize, 3] {
        println!("d = {d}, epsilon = {eps}");
        println!(
            "{:>12} {:>14} {:>14} {:>14}",
            "alpha", "D1", "C0 a^(-d/2)", "C1 a^(1-d/2)"
        );
        let alphas: Vec<f64> = (0..9).map(|k| 1e3 * 10f64.powf(k as f64 / 4.0)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for &alpha in &alphas {
            let (_, d1) = counterexample_integrals(eps, alpha, d).unwrap();
            let (p, n) = d1_components(eps, alpha, d).unwrap();
            println!("{alpha:12.3e} {d1:14.6e} {p:14.6e} {n:14.6e}");
            pos.push(p);
            neg.push(n);
        }
        println!(
            "fitted log-log slopes: {:+.4} (expected {:+.1}), {:+.4} (expected {:+.1})\n",
            fit_loglog_slope(&alphas, &pos).unwrap(),
            -(d as f64) / 2.0,
            fit_loglog_slope(&alphas, &neg).unwrap(),
            1.0 - d as f64 / 2.0,
        );
    }

    // where the sign actually flips at desk-scale alpha
    println!("sign scan at epsilon = {eps}, d = 2:");
    let mut alpha = 1.0;
    while alpha <= 64.0 {
        let (d0, d1) = counterexample_integrals(eps, alpha, 2).unwrap();
        println!("  alpha = {alpha:5.1}: D0 = {d0:11.4e}, D1 = {d1:+11.4e}");
        alpha *= 2.0;
    }
}
