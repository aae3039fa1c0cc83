//! Command-line driver: simulate | oracle | counterexample | verify.
//!
//! Exit codes: 0 success, 2 config/usage error, 3 numerical failure
//! (NaN, stability rejection, output I/O), 4 failed counterexample search
//! or certification, 5 theorem verification FAIL.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::oracles;
use crate::output;
use crate::report::{self, TheoremId, VerifyOverrides};
use crate::solvers::{self, Flow};

#[derive(Parser)]
#[command(
    name = "fdfisher",
    version,
    about = "Fermi-Dirac kinetic equations: solvers, Fisher functionals, dissipation oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a flow from a config file and write the trajectory CSV/JSON.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate all functionals and the matching dissipation oracle on the
    /// initial datum only (no time stepping); prints one CSV row.
    Oracle {
        #[arg(long)]
        config: PathBuf,
    },
    /// Search for a shifted profile whose Fisher information increases, then
    /// re-verify the rate sign with the grid-stencil oracle.
    Counterexample {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value = "fdfp")]
        equation: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Profile steepness for the rotational model (ignored elsewhere).
        #[arg(long)]
        alpha: Option<f64>,
        /// Linearization parameter for the Landau flow (default 1).
        #[arg(long)]
        beta: Option<f64>,
        /// Write the certificate as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Directory for default-named outputs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the canned verification experiment for one theorem and write the
    /// report as JSON.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse and dispatch; always returns a code in {0, 2, 3, 4, 5}.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message (also handles --help/--version)
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Simulate { config } => cmd_simulate(&config),
        Command::Oracle { config } => cmd_oracle(&config),
        Command::Counterexample {
            epsilon,
            equation,
            dim,
            alpha,
            beta,
            json,
            out,
        } => cmd_counterexample(epsilon, &equation, dim, alpha, beta, json, out),
        Command::Verify {
            theorem,
            epsilon,
            beta,
            mass,
            alpha,
            dim,
            json,
            out,
        } => cmd_verify(
            &theorem,
            VerifyOverrides {
                epsilon,
                beta,
                mass,
                alpha,
                dim,
            },
            json,
            out,
        ),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::SearchFailed { trace, .. } = &e {
                for (param, disc) in trace {
                    eprintln!("  scanned {param:e} -> discriminant {disc:e}");
                }
            }
            e.exit_code()
        }
    }
}

fn cmd_simulate(config_path: &Path) -> Result<i32> {
    let config = RunConfig::from_file(config_path)?;
    let log = solvers::simulate(&config)?;
    match &config.output_csv {
        Some(path) => {
            let mut file = File::create(path)?;
            output::write_csv(&mut file, &log.snapshots)?;
            eprintln!(
                "wrote {} rows to {} (dt = {:e}, {} steps)",
                log.snapshots.len(),
                path,
                log.diagnostics.dt,
                log.diagnostics.steps
            );
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            output::write_csv(&mut stdout, &log.snapshots)?;
        }
    }
    if let Some(path) = &config.output_json {
        let mut file = File::create(path)?;
        output::write_trajectory_json(&mut file, &log)?;
    }
    Ok(0)
}

fn cmd_oracle(config_path: &Path) -> Result<i32> {
    let config = RunConfig::from_file(config_path)?;
    let grid = config.build_grid()?;
    let beta = config.resolved_beta()?;
    let f0 = config.build_initial(&grid, beta)?;
    let snap = solvers::make_snapshot(&f0, config.equation, config.epsilon, beta, 0.0, 0.0, None)?;
    let mut stdout = std::io::stdout().lock();
    output::write_csv(&mut stdout, &[snap])?;
    Ok(0)
}

fn cmd_counterexample(
    epsilon: f64,
    equation: &str,
    dim: usize,
    alpha: Option<f64>,
    beta: Option<f64>,
    json: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<i32> {
    let flow = Flow::parse(equation)?;
    let beta = beta.unwrap_or(1.0);
    let cert = match flow {
        Flow::Fdfp => oracles::counterexample_search(epsilon, dim)?,
        Flow::Model => oracles::model_counterexample_search(epsilon, alpha.unwrap_or(1.0), dim)?,
        Flow::Landau => oracles::landau_counterexample_search(epsilon, beta, dim)?,
        Flow::Heat => {
            return Err(Error::Config(
                "equation: the heat flow has no counterexample search (its dissipation is signed)"
                    .into(),
            ))
        }
    };
    let grid_val = report::counterexample_grid_value(&cert, epsilon, beta, dim)?;

    println!("equation          : {}", cert.equation);
    println!("alpha             : {}", cert.alpha);
    println!(
        "|u|               : {:.6} (threshold {:.6})",
        cert.u_norm, cert.u_threshold
    );
    if let Some(d0) = cert.d0 {
        println!("D0                : {d0:.6e}");
    }
    if let Some(d1) = cert.d1 {
        println!("D1                : {d1:.6e}");
    }
    if let (Some(m), Some(f)) = (cert.model_rate, cert.fdfp_rate) {
        println!("model part        : {m:.6e}");
        println!("fokker-planck part: {f:.6e}");
    }
    println!("dJ/dt|0 quadrature: {:.6e}", cert.djdt0);
    println!("dJ/dt|0 grid      : {grid_val:.6e}");
    let verified = cert.djdt0 > 0.0 && grid_val > 0.0;
    println!(
        "certificate       : {}",
        if verified { "POSITIVE" } else { "NOT POSITIVE" }
    );

    if let Some(path) =
        resolve_json_path(json, out, &format!("counterexample_{}.json", cert.equation))
    {
        let payload = serde_json::json!({
            "certificate": cert,
            "grid_djdt0": grid_val,
            "verified": verified,
        });
        write_json_file(&path, &payload)?;
    }
    if verified {
        Ok(0)
    } else {
        Err(Error::SearchFailed {
            reason: format!(
                "grid oracle disagrees with the quadrature certificate \
                 (quadrature {:.3e}, grid {:.3e})",
                cert.djdt0, grid_val
            ),
            trace: vec![(cert.alpha, cert.djdt0), (cert.alpha, grid_val)],
        })
    }
}

fn cmd_verify(
    theorem: &str,
    overrides: VerifyOverrides,
    json: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<i32> {
    let id = TheoremId::parse(theorem)?;
    let report = report::verify_theorem(id, &overrides)?;
    println!("theorem   : {}", report.theorem);
    println!("checks    : {}", report.snapshots.len());
    if let Some(rate) = report.fitted_rate {
        println!("fitted rate: {rate:.6}");
    }
    if let Some(rate) = report.bound_rate {
        println!(
            "bound rate : {rate:.6} (slack {:.0}%)",
            report.slack * 100.0
        );
    }
    println!("runtime   : {:.2} s", report.runtime_s);
    println!("result    : {}", if report.pass { "PASS" } else { "FAIL" });

    let path = resolve_json_path(json, out, &format!("{}.json", report.theorem))
        .unwrap_or_else(|| PathBuf::from(format!("{}.json", report.theorem)));
    write_json_file(&path, &report)?;
    eprintln!("report written to {}", path.display());

    if report.pass {
        Ok(0)
    } else {
        if let Some(violation) = report.first_violation() {
            eprintln!(
                "FAIL: first violated check at t = {}: {} = {:.6e} > bound {:.6e}",
                violation.t, violation.label, violation.value, violation.bound
            );
        } else {
            eprintln!("FAIL: fitted rate below the bound");
        }
        Ok(5)
    }
}

fn resolve_json_path(
    json: Option<PathBuf>,
    out: Option<PathBuf>,
    default_name: &str,
) -> Option<PathBuf> {
    json.or_else(|| out.map(|dir| dir.join(default_name)))
}

fn write_json_file<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut file = File::create(path)?;
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Numerical(format!("json serialization failed: {e}")))?;
    writeln!(file, "{text}")?;
    Ok(())
}
