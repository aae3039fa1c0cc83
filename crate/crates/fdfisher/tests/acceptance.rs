//! Acceptance gate: one test per criterion, each printing a pass/fail line.
//!
//! Heavy trajectory runs are shared between criteria through lazy fixtures,
//! so the suite performs each reference simulation once.

use std::sync::OnceLock;
use std::time::Instant;

use fdfisher::functionals::FunctionalSnapshot;
use fdfisher::grid::Grid;
use fdfisher::oracles;
use fdfisher::profiles::{fd_equilibrium, fd_profile, FdProfile, QuantumParams};
use fdfisher::report::{self, fit_decay_rate, fit_loglog_slope, TheoremId, VerifyOverrides};
use fdfisher::solvers::{self, Flow, SolverDiagnostics};
use fdfisher::Field;

struct Run {
    snapshots: Vec<FunctionalSnapshot>,
    diagnostics: SolverDiagnostics,
    mass0: f64,
}

fn run_fixture(
    cell: &'static OnceLock<Run>,
    build: impl FnOnce() -> (Flow, Field, f64, f64, f64, usize),
) -> &'static Run {
    cell.get_or_init(|| {
        let (flow, f0, eps, beta, t_end, samples) = build();
        let mass0 = f0.mass();
        let (snapshots, diagnostics) =
            solvers::run_flow(flow, f0, eps, beta, t_end, samples, None).expect("fixture run");
        Run {
            snapshots,
            diagnostics,
            mass0,
        }
    })
}

/// Criterion 1 reference: classical 1-D Fokker-Planck from a Gaussian translate.
fn mckean_run() -> &'static Run {
    static CELL: OnceLock<Run> = OnceLock::new();
    run_fixture(&CELL, || {
        let grid = Grid::line(8.0, 512).unwrap();
        let f0 = Field::from_fn(&grid, |v| (-0.5 * (v[0] - 2.0) * (v[0] - 2.0)).exp()).unwrap();
        (Flow::Fdfp, f0, 0.0, 1.0, 1.5, 30)
    })
}

/// Criterion 2/9 reference: bounded-data 2-D Fokker-Planck decay at 192².
fn fp_decay_run() -> &'static Run {
    static CELL: OnceLock<Run> = OnceLock::new();
    run_fixture(&CELL, || {
        let (eps, beta) = (0.05, 1.0);
        let grid = Grid::tensor(8.0, 192).unwrap();
        let params = QuantumParams::new(eps, beta).unwrap();
        let mu = fd_equilibrium(&params, &grid);
        let f0 = Field::new(grid.clone(), mu.values().iter().map(|&v| 0.9 * v).collect()).unwrap();
        (Flow::Fdfp, f0, eps, beta, 1.0, 50)
    })
}

/// Criterion 4/9 reference: heat flow on the flat torus at 128².
fn heat_run() -> &'static Run {
    static CELL: OnceLock<Run> = OnceLock::new();
    run_fixture(&CELL, || {
        let eps = 0.3;
        let grid = Grid::torus_2d(std::f64::consts::PI, 128).unwrap();
        let f0 = Field::from_fn(&grid, |v| {
            0.9 / eps * (0.5 + 0.25 * v[0].cos() + 0.2 * v[1].sin())
        })
        .unwrap();
        (Flow::Heat, f0, eps, 1.0, 0.5, 50)
    })
}

/// Criterion 8/9 reference: Landau relaxation of bounded data at 192 × 128.
fn landau_decay_run() -> &'static Run {
    static CELL: OnceLock<Run> = OnceLock::new();
    run_fixture(&CELL, || {
        let (eps, beta) = (0.05, 1.0);
        let grid = Grid::polar(8.0, 192, 128).unwrap();
        let params = QuantumParams::new(eps, beta).unwrap();
        let mu = fd_equilibrium(&params, &grid);
        let f0 = Field::new(grid.clone(), mu.values().iter().map(|&v| 0.9 * v).collect()).unwrap();
        (Flow::Landau, f0, eps, beta, 0.3, 30)
    })
}

/// Criterion 9 reference: rotational-model flow from the counterexample datum.
fn model_run() -> &'static Run {
    static CELL: OnceLock<Run> = OnceLock::new();
    run_fixture(&CELL, || {
        let eps = 0.3;
        let cert = oracles::model_counterexample_search(eps, 1.0, 2).unwrap();
        let extent = (cert.u_norm + 6.0).ceil();
        let grid = Grid::polar(extent, 192, 128).unwrap();
        let spec = FdProfile::new(1.0, [cert.u_norm, 0.0], eps).unwrap();
        let f0 = fd_profile(&spec, &grid).unwrap();
        (Flow::Model, f0, eps, 1.0, 0.5, 25)
    })
}

fn verdict(criterion: &str, ok: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "{criterion} failed: {detail}");
}

#[test]
fn criterion_01_classical_mckean_rate() {
    let started = Instant::now();
    let run = mckean_run();
    let times: Vec<f64> = run.snapshots.iter().map(|s| s.t).collect();
    let js: Vec<f64> = run.snapshots.iter().map(|s| s.fisher_j).collect();
    let rate = fit_decay_rate(&times, &js).expect("rate fit");
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 01 (classical Fokker-Planck rate)",
        (1.96..=2.04).contains(&rate) && elapsed < 30.0,
        &format!("fitted J decay rate {rate:.5} in [1.96, 2.04], {elapsed:.1} s"),
    );
}

#[test]
fn criterion_02_bounded_data_fp_decay() {
    let started = Instant::now();
    let run = fp_decay_run();
    let j0 = run.snapshots[0].fisher_j;
    let rate = 2.0 * (1.0 - 4.0 * 0.05 / 1.0); // 1.6
    let mut monotone = true;
    let mut enveloped = true;
    let mut h_monotone = true;
    for pair in run.snapshots.windows(2) {
        monotone &= pair[1].fisher_j <= pair[0].fisher_j;
        h_monotone &= pair[1].free_energy <= pair[0].free_energy + 1e-12;
    }
    for s in &run.snapshots {
        enveloped &= s.fisher_j <= 1.02 * j0 * (-rate * s.t).exp();
    }
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 02 (bounded-data Fokker-Planck decay)",
        monotone && enveloped && h_monotone && elapsed < 180.0,
        &format!(
            "J nonincreasing: {monotone}, J within 1.02 J0 e^(-1.6 t): {enveloped}, \
             free energy nonincreasing: {h_monotone}, {elapsed:.1} s"
        ),
    );
}

#[test]
fn criterion_03_fp_counterexample_certified() {
    let started = Instant::now();
    let report = report::verify_theorem(TheoremId::ThmFpI, &VerifyOverrides::default())
        .expect("thm-fp-i experiment");
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 03 (Fokker-Planck counterexample)",
        report.pass && elapsed < 60.0,
        &format!(
            "quadrature and grid oracle both positive, magnitudes within 25% \
             ({} checks), {elapsed:.1} s",
            report.snapshots.len()
        ),
    );
}

#[test]
fn criterion_04_heat_fisher_monotone() {
    let started = Instant::now();
    let run = heat_run();
    assert_eq!(run.snapshots.len(), 51);
    let mut decreasing = true;
    let mut oracle_nonpositive = true;
    let mut entropy_monotone = true;
    for pair in run.snapshots.windows(2) {
        decreasing &= pair[1].fisher_i < pair[0].fisher_i;
        entropy_monotone &= pair[1].entropy <= pair[0].entropy + 1e-12;
    }
    for s in &run.snapshots {
        oracle_nonpositive &= s.djdt_oracle <= 0.0;
    }
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 04 (heat-flow Fisher monotonicity)",
        decreasing && oracle_nonpositive && entropy_monotone && elapsed < 60.0,
        &format!(
            "I strictly decreasing over 50 snapshots: {decreasing}, oracle dI/dt <= 0: \
             {oracle_nonpositive}, entropy nonincreasing: {entropy_monotone}, {elapsed:.1} s"
        ),
    );
}

#[test]
fn criterion_05_model_counterexample_and_estimate() {
    let started = Instant::now();
    let report = report::verify_theorem(TheoremId::PropModelII, &VerifyOverrides::default())
        .expect("prop-model-ii experiment");
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 05 (rotational model: counterexample + estimate)",
        report.pass && elapsed < 60.0,
        &format!(
            "search succeeded and the sup-weighted rate bound held at every snapshot \
             ({} checks), {elapsed:.1} s",
            report.snapshots.len()
        ),
    );
}

#[test]
fn criterion_06_two_forms_of_the_dissipation_identity() {
    use rand::{Rng, SeedableRng};
    let started = Instant::now();
    let grid = Grid::tensor(8.0, 128).unwrap();
    let (eps, beta) = (0.2, 1.0);
    let params = QuantumParams::new(eps, beta).unwrap();
    let mu = fd_equilibrium(&params, &grid);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let coeffs: Vec<(f64, f64, f64)> = (0..3)
            .map(|_| {
                (
                    rng.gen_range(-0.25..0.25),
                    rng.gen_range(1.0..4.0f64).round(),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let vals: Vec<f64> = (0..grid.len())
            .map(|i| {
                let v = grid.position(i);
                let mut factor = 1.0;
                for &(a, k, ph) in &coeffs {
                    factor += a
                        * (k * std::f64::consts::PI * v[0] / 8.0 + ph).cos()
                        * (k * std::f64::consts::PI * v[1] / 8.0).cos();
                }
                mu.values()[i] * factor
            })
            .collect();
        let f = Field::new(grid.clone(), vals).unwrap();
        let a = oracles::djdt_fdfp(&f, eps).unwrap();
        let b = oracles::djdt_fdfp_altform(&f, eps).unwrap();
        worst = worst.max((a - b).abs() / a.abs().max(1e-300));
    }
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 06 (two forms of the dissipation identity)",
        worst <= 1e-6 && elapsed < 30.0,
        &format!("worst relative gap {worst:.3e} <= 1e-6 over 10 random fields, {elapsed:.1} s"),
    );
}

#[test]
fn criterion_07_oracle_matches_trajectory_derivatives() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut probes_total = 0usize;

    let mut check_flow =
        |name: &str, snaps: &[FunctionalSnapshot], value: fn(&FunctionalSnapshot) -> f64| {
            let mut probes = 0;
            for k in 1..snaps.len() - 1 {
                let fd = (value(&snaps[k + 1]) - value(&snaps[k - 1]))
                    / (snaps[k + 1].t - snaps[k - 1].t);
                let gap = (snaps[k].djdt_oracle - fd).abs();
                let tol = (0.02 * fd.abs()).max(1e-3);
                if gap > tol {
                    failures.push(format!(
                        "{name} at t = {:.4}: |oracle - fd| = {gap:.3e} > {tol:.3e}",
                        snaps[k].t
                    ));
                }
                probes += 1;
            }
            assert!(probes >= 10, "{name}: only {probes} probe times");
            probes_total += probes;
        };

    // Fokker-Planck, 1-D reference grid
    {
        let grid = Grid::line(8.0, 256).unwrap();
        let spec = FdProfile::new(1.5, [1.5, 0.0], 0.15).unwrap();
        let f0 = fd_profile(&spec, &grid).unwrap();
        let (snaps, _) = solvers::run_flow(Flow::Fdfp, f0, 0.15, 1.0, 0.5, 12, None).unwrap();
        check_flow("fdfp", &snaps, |s| s.fisher_j);
    }
    // heat on the torus; the oracle is dI/dt
    {
        let eps = 0.3;
        let grid = Grid::torus_2d(std::f64::consts::PI, 128).unwrap();
        let f0 = Field::from_fn(&grid, |v| {
            0.9 / eps * (0.5 + 0.25 * v[0].cos() + 0.2 * v[1].sin())
        })
        .unwrap();
        let (snaps, _) = solvers::run_flow(Flow::Heat, f0, eps, 1.0, 0.1, 12, None).unwrap();
        check_flow("heat", &snaps, |s| s.fisher_i);
    }
    // rotational model from the counterexample datum; a short exact burn-in
    // damps the stiff high angular modes that a centered difference cannot
    // track, then the probes sit on the resolvable stretch
    {
        let eps = 0.3;
        let cert = oracles::model_counterexample_search(eps, 1.0, 2).unwrap();
        let extent = (cert.u_norm + 6.0).ceil();
        let grid = Grid::polar(extent, 192, 128).unwrap();
        let spec = FdProfile::new(1.0, [cert.u_norm, 0.0], eps).unwrap();
        let f0 = fd_profile(&spec, &grid).unwrap();
        let smoothed = solvers::step_model(&f0, eps, 0.005).unwrap();
        let (snaps, _) =
            solvers::run_flow(Flow::Model, smoothed, eps, 1.0, 0.015, 12, None).unwrap();
        check_flow("model", &snaps, |s| s.fisher_j);
    }
    // linear-type Landau with a non-radial datum
    {
        let (eps, beta) = (0.1, 1.0);
        let grid = Grid::polar(8.0, 192, 128).unwrap();
        let spec = FdProfile::new(1.3, [1.2, 0.0], eps).unwrap();
        let f0 = fd_profile(&spec, &grid).unwrap();
        let (snaps, _) = solvers::run_flow(Flow::Landau, f0, eps, beta, 0.012, 12, None).unwrap();
        check_flow("landau", &snaps, |s| s.fisher_j);
    }

    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 07 (oracle/trajectory equivalence, all four flows)",
        failures.is_empty() && elapsed < 300.0,
        &format!(
            "{probes_total} probes within max(1e-3, 2%), {elapsed:.1} s{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    );
}

#[test]
fn criterion_08_landau_decay_bound() {
    let started = Instant::now();
    let run = landau_decay_run();
    let (eps, beta) = (0.05, 1.0);
    let coeffs = oracles::landau_coefficients(eps, beta, 2).unwrap();
    let rate = 2.0 * coeffs.nu * (1.0 - 6.0 * eps / beta);
    let j0 = run.snapshots[0].fisher_j;
    let mut enveloped = true;
    for s in &run.snapshots {
        enveloped &= s.fisher_j <= 1.02 * j0 * (-rate * s.t).exp();
    }
    let times: Vec<f64> = run.snapshots.iter().map(|s| s.t).collect();
    let js: Vec<f64> = run.snapshots.iter().map(|s| s.fisher_j).collect();
    let fitted = fit_decay_rate(&times, &js).unwrap_or(f64::NAN);
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 08 (Landau decay bound)",
        enveloped && fitted >= rate * 0.98 && elapsed < 180.0,
        &format!(
            "J within 1.02 J0 exp(-2 nu (1 - 6 eps/beta) t): {enveloped}; \
             fitted rate {fitted:.3} >= bound {rate:.3}, {elapsed:.1} s"
        ),
    );
}

#[test]
fn criterion_09_structure_preservation() {
    let started = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;

    for (name, run) in [
        ("mckean", mckean_run()),
        ("fp-decay", fp_decay_run()),
        ("heat", heat_run()),
        ("landau-decay", landau_decay_run()),
        ("model", model_run()),
    ] {
        let worst_drift = run
            .snapshots
            .iter()
            .fold(0.0f64, |m, s| m.max(s.mass_drift));
        let clip_rel = run.diagnostics.clipped_mass / run.mass0;
        if worst_drift > 1e-10 {
            ok = false;
            notes.push(format!("{name}: mass drift {worst_drift:.3e}"));
        }
        if clip_rel > 1e-8 {
            ok = false;
            notes.push(format!("{name}: clip mass {clip_rel:.3e}"));
        }
    }

    // equilibrium stationarity over unit time, one run per dissipative solver
    {
        let (eps, beta) = (0.1, 1.0);
        let grid = Grid::line(8.0, 512).unwrap();
        let params = QuantumParams::new(eps, beta).unwrap();
        let mu = fd_equilibrium(&params, &grid);
        let dt = solvers::fdfp_dt_bound(&grid);
        let steps = (1.0 / dt).ceil() as u64;
        let (f1, _) =
            solvers::run_steps(Flow::Fdfp, &mu, eps, beta, 1.0 / steps as f64, steps).unwrap();
        let drift = f1.sup_distance(&mu).unwrap();
        if drift > 1e-6 {
            ok = false;
            notes.push(format!("fdfp equilibrium drift {drift:.3e}"));
        }
    }
    {
        let (eps, beta) = (0.2, 1.0);
        let grid = Grid::polar(8.0, 192, 128).unwrap();
        let params = QuantumParams::new(eps, beta).unwrap();
        let mu = fd_equilibrium(&params, &grid);
        let (f1, _) = solvers::run_steps(Flow::Model, &mu, eps, beta, 0.1, 10).unwrap();
        let drift = f1.sup_distance(&mu).unwrap();
        if drift > 1e-6 {
            ok = false;
            notes.push(format!("model equilibrium drift {drift:.3e}"));
        }
    }
    {
        let (eps, beta) = (0.05, 1.0);
        let grid = Grid::polar(8.0, 96, 64).unwrap();
        let params = QuantumParams::new(eps, beta).unwrap();
        let mu = fd_equilibrium(&params, &grid);
        let coeffs = oracles::landau_coefficients(eps, beta, 2).unwrap();
        let dt = solvers::landau_dt_bound(&grid, coeffs.nu);
        let steps = (1.0 / dt).ceil() as u64;
        let (f1, _) =
            solvers::run_steps(Flow::Landau, &mu, eps, beta, 1.0 / steps as f64, steps).unwrap();
        let drift = f1.sup_distance(&mu).unwrap();
        if drift > 1e-6 {
            ok = false;
            notes.push(format!("landau equilibrium drift {drift:.3e}"));
        }
    }

    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 09 (structure preservation)",
        ok,
        &format!(
            "mass drift <= 1e-10, clip mass <= 1e-8, equilibrium drift <= 1e-6 over unit time; \
             {elapsed:.1} s{}",
            if notes.is_empty() {
                String::new()
            } else {
                format!("; violations: {notes:?}")
            }
        ),
    );
}

#[test]
fn criterion_10_d1_power_law_asymptotics() {
    let started = Instant::now();
    let eps = 0.2;
    let mut ok = true;
    let mut detail = Vec::new();
    for d in [2usize, 3] {
        let alphas: Vec<f64> = (0..9).map(|k| 1e3 * 10f64.powf(k as f64 / 4.0)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for &a in &alphas {
            let (p, n) = oracles::d1_components(eps, a, d).unwrap();
            pos.push(p);
            neg.push(n);
        }
        let slope_pos = fit_loglog_slope(&alphas, &pos).unwrap();
        let slope_neg = fit_loglog_slope(&alphas, &neg).unwrap();
        let expect_pos = -(d as f64) / 2.0;
        let expect_neg = 1.0 - d as f64 / 2.0;
        let tol = |e: f64| 0.05 * e.abs().max(1.0);
        if (slope_pos - expect_pos).abs() > tol(expect_pos)
            || (slope_neg - expect_neg).abs() > tol(expect_neg)
        {
            ok = false;
        }
        detail.push(format!(
            "d={d}: slopes ({slope_pos:.4}, {slope_neg:.4}) vs ({expect_pos}, {expect_neg})"
        ));
    }
    let elapsed = started.elapsed().as_secs_f64();
    verdict(
        "criterion 10 (D1 power-law exponents)",
        ok && elapsed < 10.0,
        &format!("{}, {elapsed:.1} s", detail.join("; ")),
    );
}
