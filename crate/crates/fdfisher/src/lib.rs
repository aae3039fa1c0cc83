//! fdfisher — a numerical laboratory for Fermi-Dirac kinetic equations.
//!
//! The crate covers one coherent circle of objects built around the mobility
//! m_ε(f) = f(1-εf) and the exclusion bound 0 ≤ f ≤ 1/ε:
//!
//! - **grids**: truncated line/plane, periodic tori, and a polar disk, with
//!   second-order stencils and matching quadrature ([`grid`]);
//! - **profiles**: Fermi-Dirac equilibria μ_{ε,β} = 1/(ε + β e^{|v|²/2}),
//!   shifted steepened profiles, the pointwise maps ψ_ε/Φ_ε/U_ε, and the
//!   β-from-mass solver ([`profiles`]);
//! - **functionals**: quantum entropy, free energy, both Fisher informations
//!   (relative J_ε and non-relative I_ε), and the Bregman divergence
//!   ([`functionals`]);
//! - **oracles**: closed-form time-derivative identities for every flow,
//!   evaluated by quadrature independently of any time stepping, plus the
//!   counterexample constructions that certify a Fisher-information increase
//!   ([`oracles`]);
//! - **solvers**: structure-preserving explicit/spectral stepping for the
//!   Fermi-Dirac-Fokker-Planck flow, the heat flow on flat tori, rotational
//!   diffusion, and the linear-type Landau flow ([`solvers`]);
//! - **reports**: canned per-theorem verification experiments with
//!   machine-checkable pass/fail records ([`report`]), and a thin CLI
//!   ([`cli`]) around configs, CSV trajectories, and JSON reports.
//!
//! The runnable `examples/` directory demonstrates each capability; see the
//! README for the tour.

pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod oracles;
pub mod output;
pub mod profiles;
pub mod quad;
pub mod report;
pub mod solvers;

pub use error::{Error, Result};
pub use field::Field;
pub use functionals::FunctionalSnapshot;
pub use grid::{Grid, GridKind};
pub use profiles::{FdProfile, QuantumParams};
pub use solvers::{Flow, TrajectoryLog};
