//! Linear-type Landau flow with Maxwell molecules: rotational diffusion at
//! rate ν̃ plus (d-1)ν times the Fokker-Planck operator. Bounded data with
//! 6ε ≤ β relax with J(t) ≤ J(0) exp(-2(d-1)ν(1-6ε/β)t).
//!
//! cargo run -p fdfisher --example landau_relaxation

use fdfisher::grid::Grid;
use fdfisher::oracles::landau_coefficients;
use fdfisher::profiles::{fd_equilibrium, QuantumParams};
use fdfisher::report::fit_decay_rate;
use fdfisher::solvers::{run_flow, Flow};
use fdfisher::Field;

fn main() {
    let (eps, beta) = (0.05, 1.0);
    let coeffs = landau_coefficients(eps, beta, 2).unwrap();
    println!("landau coefficients at epsilon = {eps}, beta = {beta}:");
    println!("  nu       = {:.8}", coeffs.nu);
    println!("  nu_tilde = {:.8}  (nu_tilde <= nu)", coeffs.nu_tilde);

    let grid = Grid::polar(8.0, 96, 64).unwrap();
    let params = QuantumParams::new(eps, beta).unwrap();
    let mu = fd_equilibrium(&params, &grid);
    let f0 = Field::new(grid.clone(), mu.values().iter().map(|&v| 0.9 * v).collect()).unwrap();

    let rate = 2.0 * coeffs.nu * (1.0 - 6.0 * eps / beta);
    let (snaps, diag) = run_flow(Flow::Landau, f0, eps, beta, 0.25, 10, None).unwrap();
    println!(
        "\nf0 = 0.9 mu on a 96 x 64 polar grid, dt = {:.2e}, {} steps",
        diag.dt, diag.steps
    );
    println!("guaranteed rate 2 nu (1 - 6 eps/beta) = {rate:.4}\n");
    println!(
        "{:>7} {:>14} {:>14} {:>12}",
        "t", "J(t)", "envelope", "mass drift"
    );
    let j0 = snaps[0].fisher_j;
    for s in &snaps {
        println!(
            "{:7.3} {:14.6e} {:14.6e} {:12.2e}",
            s.t,
            s.fisher_j,
            j0 * (-rate * s.t).exp(),
            s.mass_drift
        );
    }
    let times: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let js: Vec<f64> = snaps.iter().map(|s| s.fisher_j).collect();
    println!(
        "\nfitted rate {:.3} vs guaranteed {:.3}",
        fit_decay_rate(&times, &js).unwrap(),
        rate
    );
}
