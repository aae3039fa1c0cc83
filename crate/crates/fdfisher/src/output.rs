//! CSV and JSON serialization of trajectory logs.

use std::io::Write;

use crate::error::Result;
use crate::functionals::FunctionalSnapshot;
use crate::solvers::TrajectoryLog;

pub const CSV_HEADER: &str =
    "t,mass,entropy_E,free_energy_H,fisher_I,fisher_J,djdt_oracle,F_inf,clamp_count,clip_mass";

/// 17 significant digits, enough to reproduce the f64 bit pattern.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_row(s: &FunctionalSnapshot) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        fmt(s.t),
        fmt(s.mass),
        fmt(s.entropy),
        fmt(s.free_energy),
        fmt(s.fisher_i),
        fmt(s.fisher_j),
        fmt(s.djdt_oracle),
        fmt(s.f_inf),
        s.clamp_count,
        fmt(s.clip_mass),
    )
}

pub fn write_csv<W: Write>(out: &mut W, snapshots: &[FunctionalSnapshot]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in snapshots {
        writeln!(out, "{}", csv_row(s))?;
    }
    Ok(())
}

pub fn write_trajectory_json<W: Write>(out: &mut W, log: &TrajectoryLog) -> Result<()> {
    let text = serde_json::to_string_pretty(log)
        .map_err(|e| crate::error::Error::Numerical(format!("json serialization failed: {e}")))?;
    writeln!(out, "{text}")?;
    Ok(())
}
