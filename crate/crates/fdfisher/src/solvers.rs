//! Time integration of the four flows with mass, bounds, and equilibria
//! preserved by construction.
//!
//! The Fokker-Planck update is a conservative vertex-centered finite-volume
//! step on the gradient-flow flux m_ε ∇Φ_ε: face fluxes use the arithmetic
//! mean of the node mobilities times the face difference of Φ_ε = ψ_ε +
//! |v|²/2. Since Φ_ε is constant at every node of μ_{ε,β}, the discrete
//! equilibrium is the sampled Fermi-Dirac distribution itself, the free
//! energy decreases step by step (summation by parts gives
//! -Σ m̄ (ΔΦ)²/h ≤ 0), and telescoping fluxes conserve the quadrature mass to
//! rounding.
//!
//! On the polar grid the angular component of the Fokker-Planck operator
//! collapses to (1/r²) ∂²_θ f exactly (m_ε ∂_θ Φ_ε = ∂_θ f because m_ε ψ_ε' = 1
//! and the potential is radial), so the Landau step integrates the whole
//! angular generator ν̃ ∂²_θ + (d-1)ν (1/r²) ∂²_θ spectrally and exactly in the
//! Strang halves; only the radial flux is stepped explicitly, which keeps the
//! stability restriction on dr instead of the inner-shell arc length.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::{self, FunctionalSnapshot};
use crate::grid::{Grid, GridKind};
use crate::oracles;
use crate::profiles::{mob, psi};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flow {
    Fdfp,
    Heat,
    Model,
    Landau,
}

impl Flow {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fdfp" => Ok(Flow::Fdfp),
            "heat" => Ok(Flow::Heat),
            "model" => Ok(Flow::Model),
            "landau" => Ok(Flow::Landau),
            other => Err(Error::Config(format!(
                "equation: unknown flow `{other}` (expected fdfp | heat | model | landau)"
            ))),
        }
    }
}

impl fmt::Display for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flow::Fdfp => "fdfp",
            Flow::Heat => "heat",
            Flow::Model => "model",
            Flow::Landau => "landau",
        };
        f.write_str(s)
    }
}

/// Ledger of mass moved by projecting values back into [0, 1/ε].
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct ClipStats {
    pub clip_count: u64,
    pub clipped_mass: f64,
    pub max_violation: f64,
}

impl ClipStats {
    fn absorb(&mut self, other: ClipStats) {
        self.clip_count += other.clip_count;
        self.clipped_mass += other.clipped_mass;
        self.max_violation = self.max_violation.max(other.max_violation);
    }
}

/// Explicit-step stability bound for the Fokker-Planck flux,
/// dt = 0.45 h² / (d (1 + sup|v| · sup|m'_ε|)) with sup|m'_ε| = 1.
pub fn fdfp_dt_bound(grid: &Grid) -> f64 {
    let h = grid.spacing()[0];
    let d = grid.dim() as f64;
    let sup_v = match grid.kind() {
        GridKind::Tensor2d | GridKind::Torus2d => grid.extent() * 2.0f64.sqrt(),
        _ => grid.extent(),
    };
    0.45 * h * h / (d * (1.0 + sup_v))
}

/// Monotonicity threshold for the explicit heat step: 0.9 · h²/(2d).
pub fn heat_dt_bound(grid: &Grid) -> f64 {
    let h = grid.spacing()[0];
    0.9 * h * h / (2.0 * grid.dim() as f64)
}

/// Landau step bound: the Fokker-Planck bound scaled by (d-1)ν.
pub fn landau_dt_bound(grid: &Grid, nu: f64) -> f64 {
    fdfp_dt_bound(grid) / ((grid.dim() as f64 - 1.0) * nu)
}

fn clip_into_bounds(grid: &Grid, eps: f64, values: &mut [f64]) -> ClipStats {
    let hi = if eps > 0.0 { 1.0 / eps } else { f64::INFINITY };
    let mut stats = ClipStats::default();
    for (i, v) in values.iter_mut().enumerate() {
        if *v < 0.0 {
            let excess = -*v;
            stats.clip_count += 1;
            stats.clipped_mass += grid.weight(i) * excess;
            stats.max_violation = stats.max_violation.max(excess);
            *v = 0.0;
        } else if *v > hi {
            let excess = *v - hi;
            stats.clip_count += 1;
            stats.clipped_mass += grid.weight(i) * excess;
            stats.max_violation = stats.max_violation.max(excess);
            *v = hi;
        }
    }
    stats
}

/// Conservative explicit Fokker-Planck stepper on truncated cartesian grids.
struct FdfpStepper {
    grid: Grid,
    eps: f64,
    dt: f64,
    phi: Vec<f64>,
    out: Vec<f64>,
    /// Per-axis cell widths: h/2 on the truncation boundary, h inside.
    cw0: Vec<f64>,
    cw1: Vec<f64>,
    pub clip: ClipStats,
}

impl FdfpStepper {
    fn new(grid: Grid, eps: f64, dt: f64) -> Result<Self> {
        if !grid.kind().is_truncated_cartesian() {
            return Err(Error::UnsupportedGrid {
                op: "step_fdfp",
                kind: grid.kind().to_string(),
            });
        }
        let bound = fdfp_dt_bound(&grid);
        if dt > bound * (1.0 + 1e-12) {
            return Err(Error::TimeStepTooLarge { dt, bound });
        }
        let [n1, n2] = grid.shape();
        let cell_widths = |n: usize, h: f64| {
            let mut cw = vec![h; n];
            cw[0] = 0.5 * h;
            cw[n - 1] = 0.5 * h;
            cw
        };
        let cw0 = cell_widths(n1, grid.spacing()[0]);
        let cw1 = if grid.dim() == 2 {
            cell_widths(n2, grid.spacing()[1])
        } else {
            vec![1.0]
        };
        Ok(FdfpStepper {
            eps,
            dt,
            phi: vec![0.0; grid.len()],
            out: vec![0.0; grid.len()],
            cw0,
            cw1,
            clip: ClipStats::default(),
            grid,
        })
    }

    fn step(&mut self, f: &mut Vec<f64>) {
        let grid = &self.grid;
        let [n1, n2] = grid.shape();
        let h = grid.spacing()[0];
        for (i, phi) in self.phi.iter_mut().enumerate() {
            *phi = psi(f[i], self.eps).0 + 0.5 * grid.speed_sq(i);
        }
        self.out.copy_from_slice(f);
        // axis-0 faces
        for i1 in 0..n1 - 1 {
            for i2 in 0..n2 {
                let a = i1 * n2 + i2;
                let b = (i1 + 1) * n2 + i2;
                let m_face = 0.5 * (mob(f[a], self.eps) + mob(f[b], self.eps));
                let flux = m_face * (self.phi[b] - self.phi[a]) / h;
                self.out[a] += self.dt * flux / self.cw0[i1];
                self.out[b] -= self.dt * flux / self.cw0[i1 + 1];
            }
        }
        // axis-1 faces
        if grid.dim() == 2 {
            let hy = grid.spacing()[1];
            for i1 in 0..n1 {
                for i2 in 0..n2 - 1 {
                    let a = i1 * n2 + i2;
                    let b = i1 * n2 + i2 + 1;
                    let m_face = 0.5 * (mob(f[a], self.eps) + mob(f[b], self.eps));
                    let flux = m_face * (self.phi[b] - self.phi[a]) / hy;
                    self.out[a] += self.dt * flux / self.cw1[i2];
                    self.out[b] -= self.dt * flux / self.cw1[i2 + 1];
                }
            }
        }
        std::mem::swap(f, &mut self.out);
        self.clip.absorb(clip_into_bounds(grid, self.eps, f));
    }
}

/// One conservative Fokker-Planck step with bound clipping.
pub fn step_fdfp(field: &Field, epsilon: f64, dt: f64) -> Result<(Field, ClipStats)> {
    field.check_bounds(epsilon)?;
    let mut stepper = FdfpStepper::new(field.grid().clone(), epsilon, dt)?;
    let mut values = field.values().to_vec();
    stepper.step(&mut values);
    Ok((Field::new(field.grid().clone(), values)?, stepper.clip))
}

/// Explicit centered heat step with periodic wraparound. The time step is
/// kept under the monotonicity threshold, so the maximum principle preserves
/// bounds without clipping.
pub fn step_heat_torus(field: &Field, dt: f64) -> Result<Field> {
    let grid = field.grid();
    if !grid.kind().is_torus() {
        return Err(Error::UnsupportedGrid {
            op: "step_heat_torus",
            kind: grid.kind().to_string(),
        });
    }
    let bound = heat_dt_bound(grid);
    if dt > bound * (1.0 + 1e-12) {
        return Err(Error::TimeStepTooLarge { dt, bound });
    }
    let mut values = field.values().to_vec();
    heat_step_in_place(grid, &mut values, dt);
    Field::new(grid.clone(), values)
}

fn heat_step_in_place(grid: &Grid, f: &mut Vec<f64>, dt: f64) {
    let [n1, n2] = grid.shape();
    let h0 = grid.spacing()[0];
    let mut out = vec![0.0; f.len()];
    for i1 in 0..n1 {
        let up = if i1 + 1 == n1 { 0 } else { i1 + 1 };
        let dn = if i1 == 0 { n1 - 1 } else { i1 - 1 };
        for i2 in 0..n2 {
            let c = f[i1 * n2 + i2];
            let mut lap = (f[up * n2 + i2] - 2.0 * c + f[dn * n2 + i2]) / (h0 * h0);
            if grid.dim() == 2 {
                let h1 = grid.spacing()[1];
                let rt = if i2 + 1 == n2 { 0 } else { i2 + 1 };
                let lf = if i2 == 0 { n2 - 1 } else { i2 - 1 };
                lap += (f[i1 * n2 + rt] - 2.0 * c + f[i1 * n2 + lf]) / (h1 * h1);
            }
            out[i1 * n2 + i2] = c + dt * lap;
        }
    }
    *f = out;
}

/// Exact spectral integrator of per-shell angular diffusion.
struct AngularDiffusion {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    ksq: Vec<f64>,
}

impl AngularDiffusion {
    fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        let ksq = (0..m)
            .map(|k| {
                let sk = if k <= m / 2 {
                    k as f64
                } else {
                    k as f64 - m as f64
                };
                sk * sk
            })
            .collect();
        AngularDiffusion {
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
            buf: vec![Complex64::default(); m],
            ksq,
        }
    }

    /// Multiply mode k of one shell row by exp(-k² · rate · dt).
    ///
    /// Exact angular diffusion preserves positivity (the discrete heat kernel
    /// on the circle is positive), so negatives at transform round-off scale
    /// are snapped back to zero; anything larger is left for the bound checks.
    fn diffuse_row(&mut self, row: &mut [f64], rate_dt: f64) {
        let m = row.len();
        let mut peak = 0.0f64;
        for (b, &v) in self.buf.iter_mut().zip(row.iter()) {
            *b = Complex64::new(v, 0.0);
            peak = peak.max(v.abs());
        }
        self.fwd.process(&mut self.buf);
        for (b, &ksq) in self.buf.iter_mut().zip(&self.ksq) {
            *b *= (-ksq * rate_dt).exp();
        }
        self.inv.process(&mut self.buf);
        let scale = 1.0 / m as f64;
        let noise_floor = -1e-11 * peak;
        for (v, b) in row.iter_mut().zip(&self.buf) {
            let val = b.re * scale;
            *v = if val < 0.0 && val >= noise_floor {
                0.0
            } else {
                val
            };
        }
    }
}

/// One exact rotational-diffusion step (angular Fourier multiplier e^{-k²dt}).
pub fn step_model(field: &Field, epsilon: f64, dt: f64) -> Result<Field> {
    field.check_bounds(epsilon)?;
    let grid = field.grid();
    if grid.kind() != GridKind::Polar2d {
        return Err(Error::UnsupportedGrid {
            op: "step_model",
            kind: grid.kind().to_string(),
        });
    }
    let [n, m] = grid.shape();
    let mut ang = AngularDiffusion::new(m);
    let mut values = field.values().to_vec();
    for i in 0..n {
        ang.diffuse_row(&mut values[i * m..(i + 1) * m], dt);
    }
    Field::new(grid.clone(), values)
}

/// Strang-split linear-type Landau stepper on the polar grid: exact angular
/// halves (rotational diffusion at rate ν̃ plus the Fokker-Planck angular part
/// at rate (d-1)ν/r² per shell) around an explicit conservative radial flux
/// scaled by (d-1)ν.
struct LandauStepper {
    grid: Grid,
    eps: f64,
    dt: f64,
    nu: f64,
    ang: AngularDiffusion,
    /// Per-shell angular rate ν̃ + (d-1)ν/r².
    shell_rate: Vec<f64>,
    phi: Vec<f64>,
    out: Vec<f64>,
    pub clip: ClipStats,
}

impl LandauStepper {
    fn new(grid: Grid, eps: f64, beta: f64, dt: f64) -> Result<Self> {
        if grid.kind() != GridKind::Polar2d {
            return Err(Error::UnsupportedGrid {
                op: "step_landau",
                kind: grid.kind().to_string(),
            });
        }
        let coeffs = oracles::landau_coefficients(eps, beta, 2)?;
        let bound = landau_dt_bound(&grid, coeffs.nu);
        if dt > bound * (1.0 + 1e-12) {
            return Err(Error::TimeStepTooLarge { dt, bound });
        }
        let [n, m] = grid.shape();
        let dr = grid.spacing()[0];
        let shell_rate = (0..n)
            .map(|i| {
                let r = (i as f64 + 0.5) * dr;
                coeffs.nu_tilde + coeffs.nu / (r * r)
            })
            .collect();
        Ok(LandauStepper {
            eps,
            dt,
            nu: coeffs.nu,
            ang: AngularDiffusion::new(m),
            shell_rate,
            phi: vec![0.0; grid.len()],
            out: vec![0.0; grid.len()],
            clip: ClipStats::default(),
            grid,
        })
    }

    fn angular_half(&mut self, f: &mut [f64]) {
        let [n, m] = self.grid.shape();
        for i in 0..n {
            let rate_dt = self.shell_rate[i] * 0.5 * self.dt;
            self.ang.diffuse_row(&mut f[i * m..(i + 1) * m], rate_dt);
        }
    }

    fn radial_explicit(&mut self, f: &mut Vec<f64>) {
        let grid = &self.grid;
        let [n, m] = grid.shape();
        let dr = grid.spacing()[0];
        for (i, phi) in self.phi.iter_mut().enumerate() {
            *phi = psi(f[i], self.eps).0 + 0.5 * grid.speed_sq(i);
        }
        self.out.copy_from_slice(f);
        for i in 0..n - 1 {
            let r_face = (i as f64 + 1.0) * dr;
            let r_lo = (i as f64 + 0.5) * dr;
            let r_hi = (i as f64 + 1.5) * dr;
            for j in 0..m {
                let a = i * m + j;
                let b = (i + 1) * m + j;
                let m_face = 0.5 * (mob(f[a], self.eps) + mob(f[b], self.eps));
                let flux = self.nu * m_face * (self.phi[b] - self.phi[a]) / dr;
                self.out[a] += self.dt * r_face * flux / (r_lo * dr);
                self.out[b] -= self.dt * r_face * flux / (r_hi * dr);
            }
        }
        std::mem::swap(f, &mut self.out);
    }

    fn step(&mut self, f: &mut Vec<f64>) {
        self.angular_half(f);
        self.radial_explicit(f);
        self.angular_half(f);
        self.clip.absorb(clip_into_bounds(&self.grid, self.eps, f));
    }
}

/// One Strang-split Landau step with bound clipping.
pub fn step_landau(field: &Field, epsilon: f64, beta: f64, dt: f64) -> Result<(Field, ClipStats)> {
    field.check_bounds(epsilon)?;
    let mut stepper = LandauStepper::new(field.grid().clone(), epsilon, beta, dt)?;
    let mut values = field.values().to_vec();
    stepper.step(&mut values);
    Ok((Field::new(field.grid().clone(), values)?, stepper.clip))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub dt: f64,
    pub steps: u64,
    pub clip_count: u64,
    pub clipped_mass: f64,
    pub max_bound_violation: f64,
}

/// Full trajectory record: config echo, functional snapshots at the sample
/// times, and the solver ledger.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryLog {
    pub config: RunConfig,
    pub snapshots: Vec<FunctionalSnapshot>,
    pub diagnostics: SolverDiagnostics,
}

fn oracle_for(flow: Flow, field: &Field, eps: f64, beta: f64) -> Result<f64> {
    match flow {
        Flow::Fdfp => oracles::djdt_fdfp(field, eps),
        Flow::Heat => oracles::didt_heat_flat(field, eps),
        Flow::Model => oracles::djdt_model(field, eps),
        Flow::Landau => oracles::djdt_landau(field, eps, beta),
    }
}

pub(crate) fn make_snapshot(
    field: &Field,
    flow: Flow,
    eps: f64,
    beta: f64,
    t: f64,
    clip_mass: f64,
    mass0: Option<f64>,
) -> Result<FunctionalSnapshot> {
    let mass = field.mass();
    let (fisher_i, floored) = functionals::fisher_i(field, eps)?;
    let (fisher_j, clamped) = functionals::fisher_j(field, eps)?;
    let snap = FunctionalSnapshot {
        t,
        mass,
        entropy: functionals::entropy(field, eps),
        free_energy: functionals::free_energy(field, eps),
        fisher_i,
        fisher_j,
        djdt_oracle: oracle_for(flow, field, eps, beta)?,
        f_inf: oracles::f_criterion(field, eps),
        clamp_count: (clamped + floored) as u64,
        clip_mass,
        mass_drift: mass0.map_or(0.0, |m0| ((mass - m0) / m0).abs()),
    };
    if !snap.is_finite() {
        return Err(Error::Numerical(format!(
            "non-finite functional value at t = {t}"
        )));
    }
    Ok(snap)
}

/// Integrate `flow` from `f0` to `t_end`, sampling functionals (and the
/// matching dissipation oracle) at `samples + 1` evenly spaced times.
pub fn run_flow(
    flow: Flow,
    f0: Field,
    eps: f64,
    beta: f64,
    t_end: f64,
    samples: usize,
    dt_override: Option<f64>,
) -> Result<(Vec<FunctionalSnapshot>, SolverDiagnostics)> {
    if t_end.is_nan() || t_end <= 0.0 || samples == 0 {
        return Err(Error::Config(
            "time.t_end must be positive and time.samples at least 1".into(),
        ));
    }
    f0.check_bounds(eps)?;
    let grid = f0.grid().clone();
    let interval = t_end / samples as f64;

    enum Stepper {
        Fdfp(FdfpStepper),
        Heat,
        Model(AngularDiffusion),
        Landau(LandauStepper),
    }

    let bound = match flow {
        Flow::Fdfp => Some(fdfp_dt_bound(&grid)),
        Flow::Heat => Some(heat_dt_bound(&grid)),
        Flow::Model => None,
        Flow::Landau => {
            let coeffs = oracles::landau_coefficients(eps, beta, 2)?;
            Some(landau_dt_bound(&grid, coeffs.nu))
        }
    };
    let dt_target = match (dt_override, bound) {
        (Some(dt), Some(b)) => {
            if dt > b * (1.0 + 1e-12) {
                return Err(Error::TimeStepTooLarge { dt, bound: b });
            }
            dt
        }
        (Some(dt), None) => dt,
        (None, Some(b)) => b,
        (None, None) => interval,
    };
    let substeps = (interval / dt_target).ceil().max(1.0) as u64;
    let dt = interval / substeps as f64;

    let mut stepper = match flow {
        Flow::Fdfp => Stepper::Fdfp(FdfpStepper::new(grid.clone(), eps, dt)?),
        Flow::Heat => {
            if !grid.kind().is_torus() {
                return Err(Error::UnsupportedGrid {
                    op: "heat flow",
                    kind: grid.kind().to_string(),
                });
            }
            Stepper::Heat
        }
        Flow::Model => {
            if grid.kind() != GridKind::Polar2d {
                return Err(Error::UnsupportedGrid {
                    op: "model flow",
                    kind: grid.kind().to_string(),
                });
            }
            Stepper::Model(AngularDiffusion::new(grid.shape()[1]))
        }
        Flow::Landau => Stepper::Landau(LandauStepper::new(grid.clone(), eps, beta, dt)?),
    };

    let mut values = f0.into_values();
    let mut snapshots = Vec::with_capacity(samples + 1);
    let field0 = Field::new(grid.clone(), values.clone())?;
    let first = make_snapshot(&field0, flow, eps, beta, 0.0, 0.0, None)?;
    let mass0 = first.mass;
    snapshots.push(first);

    let mut steps_done = 0u64;
    for k in 1..=samples {
        for _ in 0..substeps {
            match &mut stepper {
                Stepper::Fdfp(s) => s.step(&mut values),
                Stepper::Heat => heat_step_in_place(&grid, &mut values, dt),
                Stepper::Model(ang) => {
                    let [n, m] = grid.shape();
                    for i in 0..n {
                        ang.diffuse_row(&mut values[i * m..(i + 1) * m], dt);
                    }
                }
                Stepper::Landau(s) => s.step(&mut values),
            }
            steps_done += 1;
        }
        let t = k as f64 * interval;
        let clip_mass = match &stepper {
            Stepper::Fdfp(s) => s.clip.clipped_mass,
            Stepper::Landau(s) => s.clip.clipped_mass,
            _ => 0.0,
        };
        let field = Field::new(grid.clone(), values.clone())?;
        snapshots.push(make_snapshot(
            &field,
            flow,
            eps,
            beta,
            t,
            clip_mass,
            Some(mass0),
        )?);
    }

    let clip = match &stepper {
        Stepper::Fdfp(s) => s.clip,
        Stepper::Landau(s) => s.clip,
        _ => ClipStats::default(),
    };
    Ok((
        snapshots,
        SolverDiagnostics {
            dt,
            steps: steps_done,
            clip_count: clip.clip_count,
            clipped_mass: clip.clipped_mass,
            max_bound_violation: clip.max_violation,
        },
    ))
}

/// Advance `n_steps` of `flow` at a fixed `dt`, reusing one stepper (and one
/// FFT plan) across the whole run. No snapshots are taken.
pub fn run_steps(
    flow: Flow,
    f0: &Field,
    eps: f64,
    beta: f64,
    dt: f64,
    n_steps: u64,
) -> Result<(Field, ClipStats)> {
    f0.check_bounds(eps)?;
    let grid = f0.grid().clone();
    let mut values = f0.values().to_vec();
    let mut clip = ClipStats::default();
    match flow {
        Flow::Fdfp => {
            let mut stepper = FdfpStepper::new(grid.clone(), eps, dt)?;
            for _ in 0..n_steps {
                stepper.step(&mut values);
            }
            clip = stepper.clip;
        }
        Flow::Heat => {
            let bound = heat_dt_bound(&grid);
            if dt > bound * (1.0 + 1e-12) {
                return Err(Error::TimeStepTooLarge { dt, bound });
            }
            for _ in 0..n_steps {
                heat_step_in_place(&grid, &mut values, dt);
            }
        }
        Flow::Model => {
            if grid.kind() != GridKind::Polar2d {
                return Err(Error::UnsupportedGrid {
                    op: "model flow",
                    kind: grid.kind().to_string(),
                });
            }
            let [n, m] = grid.shape();
            let mut ang = AngularDiffusion::new(m);
            for _ in 0..n_steps {
                for i in 0..n {
                    ang.diffuse_row(&mut values[i * m..(i + 1) * m], dt);
                }
            }
        }
        Flow::Landau => {
            let mut stepper = LandauStepper::new(grid.clone(), eps, beta, dt)?;
            for _ in 0..n_steps {
                stepper.step(&mut values);
            }
            clip = stepper.clip;
        }
    }
    Ok((Field::new(grid, values)?, clip))
}

/// Build everything from a parsed config and run it.
pub fn simulate(config: &RunConfig) -> Result<TrajectoryLog> {
    config.validate()?;
    let grid = config.build_grid()?;
    let beta = config.resolved_beta()?;
    let f0 = config.build_initial(&grid, beta)?;
    let (snapshots, diagnostics) = run_flow(
        config.equation,
        f0,
        config.epsilon,
        beta,
        config.time.t_end,
        config.time.samples,
        config.time.dt,
    )?;
    Ok(TrajectoryLog {
        config: config.clone(),
        snapshots,
        diagnostics,
    })
}
