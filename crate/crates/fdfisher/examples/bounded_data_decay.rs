//! Quantum regime with a pointwise bound: data below the Fermi-Dirac
//! equilibrium with 4ε ≤ β relax with J(t) ≤ J(0) e^{-2(1-4ε/β)t}.
//!
//! cargo run -p fdfisher --example bounded_data_decay

use fdfisher::grid::Grid;
use fdfisher::profiles::{fd_equilibrium, QuantumParams};
use fdfisher::report::fit_decay_rate;
use fdfisher::solvers::{run_flow, Flow};
use fdfisher::Field;

fn main() {
    let (eps, beta) = (0.05, 1.0);
    let params = QuantumParams::new(eps, beta).unwrap();
    assert!(params.fp_decay_hypothesis(), "needs 4 eps <= beta");

    let grid = Grid::tensor(8.0, 96).unwrap();
    let mu = fd_equilibrium(&params, &grid);
    let f0 = Field::new(grid.clone(), mu.values().iter().map(|&v| 0.9 * v).collect()).unwrap();

    let (snaps, _) = run_flow(Flow::Fdfp, f0, eps, beta, 1.0, 20, None).unwrap();
    let rate = 2.0 * (1.0 - 4.0 * eps / beta);
    let j0 = snaps[0].fisher_j;

    println!("2-D Fokker-Planck, epsilon = {eps}, beta = {beta}, f0 = 0.9 mu");
    println!("guaranteed rate 2(1 - 4 eps/beta) = {rate}\n");
    println!(
        "{:>6} {:>13} {:>13} {:>13} {:>12}",
        "t", "J(t)", "envelope", "H(t)", "inf F"
    );
    for s in &snaps {
        println!(
            "{:6.2} {:13.6e} {:13.6e} {:13.6} {:12.6}",
            s.t,
            s.fisher_j,
            j0 * (-rate * s.t).exp(),
            s.free_energy,
            s.f_inf
        );
    }
    let times: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let js: Vec<f64> = snaps.iter().map(|s| s.fisher_j).collect();
    println!(
        "\nfitted rate {:.4} vs guaranteed {:.4}",
        fit_decay_rate(&times, &js).unwrap(),
        rate
    );
}
