//! Classical limit ε = 0: along the 1-D Fokker-Planck flow a Gaussian
//! translate keeps its shape while the shift decays like e^{-t}, so the
//! relative Fisher information obeys J(t) = |u|² e^{-2t} · mass.
//!
//! cargo run -p fdfisher --example mckean_decay

use fdfisher::grid::Grid;
use fdfisher::report::fit_decay_rate;
use fdfisher::solvers::{run_flow, Flow};
use fdfisher::Field;

fn main() {
    let grid = Grid::line(8.0, 512).unwrap();
    let shift = 2.0;
    let f0 = Field::from_fn(&grid, |v| (-0.5 * (v[0] - shift) * (v[0] - shift)).exp()).unwrap();
    let mass = f0.mass();

    let (snaps, diag) = run_flow(Flow::Fdfp, f0, 0.0, 1.0, 1.5, 15, None).unwrap();
    println!("1-D Fokker-Planck, epsilon = 0, Gaussian translate |u| = {shift}");
    println!("dt = {:.3e}, {} steps\n", diag.dt, diag.steps);
    println!(
        "{:>8} {:>14} {:>14} {:>10}",
        "t", "J(t)", "u^2 e^(-2t) M", "rel err"
    );
    for s in &snaps {
        let exact = shift * shift * (-2.0 * s.t).exp() * mass;
        println!(
            "{:8.3} {:14.6e} {:14.6e} {:9.2e}",
            s.t,
            s.fisher_j,
            exact,
            (s.fisher_j - exact).abs() / exact
        );
    }
    let times: Vec<f64> = snaps.iter().map(|s| s.t).collect();
    let js: Vec<f64> = snaps.iter().map(|s| s.fisher_j).collect();
    println!(
        "\nfitted decay rate: {:.5} (classical value 2)",
        fit_decay_rate(&times, &js).unwrap()
    );
}
