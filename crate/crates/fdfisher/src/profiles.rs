//! Fermi-Dirac equilibria, shifted profiles, and the pointwise nonlinear maps.
//!
//! The mobility m_ε(f) = f(1-εf) vanishes at both saturation endpoints, which
//! makes ψ_ε = log f - log(1-εf) diverge there. Evaluations clamp both
//! logarithm arguments at a floor of 1e-300 and report the clamp so that
//! under-resolved tails are visible rather than silent; clamped nodes carry
//! mobility weight of the same magnitude as the floor, so they contribute
//! nothing to any m_ε-weighted integral.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::quad;

/// Floor applied to f and to 1 - εf before taking logarithms.
pub const LOG_CLAMP_FLOOR: f64 = 1e-300;

/// Quantum parameter ε and equilibrium parameter β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumParams {
    epsilon: f64,
    beta: f64,
}

impl QuantumParams {
    pub fn new(epsilon: f64, beta: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::Param(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::Param(format!(
                "beta must be finite and > 0, got {beta}"
            )));
        }
        Ok(QuantumParams { epsilon, beta })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Hypothesis 4ε ≤ β of the Fokker-Planck decay estimate.
    pub fn fp_decay_hypothesis(&self) -> bool {
        4.0 * self.epsilon <= self.beta
    }

    /// Hypothesis 6ε ≤ β of the Landau decay estimate.
    pub fn landau_decay_hypothesis(&self) -> bool {
        6.0 * self.epsilon <= self.beta
    }
}

/// Shifted steepened Fermi-Dirac profile f(v) = 1/(ε + e^{α|v-u|²/2}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdProfile {
    pub alpha: f64,
    pub shift: [f64; 2],
    pub epsilon: f64,
}

impl FdProfile {
    pub fn new(alpha: f64, shift: [f64; 2], epsilon: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Param(format!(
                "alpha must be finite and > 0, got {alpha}"
            )));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::Param(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        if !shift[0].is_finite() || !shift[1].is_finite() {
            return Err(Error::Param("profile shift must be finite".into()));
        }
        Ok(FdProfile {
            alpha,
            shift,
            epsilon,
        })
    }

    pub fn shift_norm(&self) -> f64 {
        (self.shift[0] * self.shift[0] + self.shift[1] * self.shift[1]).sqrt()
    }

    pub fn eval(&self, v: [f64; 2]) -> f64 {
        let w0 = v[0] - self.shift[0];
        let w1 = v[1] - self.shift[1];
        let wsq = w0 * w0 + w1 * w1;
        1.0 / (self.epsilon + (0.5 * self.alpha * wsq).exp())
    }
}

/// Mobility m_ε(f) = f(1-εf), with the exclusion-range check.
pub fn mobility(f: f64, epsilon: f64) -> Result<f64> {
    let hi = if epsilon > 0.0 {
        1.0 / epsilon
    } else {
        f64::INFINITY
    };
    if !f.is_finite() || f < 0.0 || f > hi {
        return Err(Error::OutOfRange {
            index: 0,
            value: f,
            lo: 0.0,
            hi,
        });
    }
    Ok(mob(f, epsilon))
}

#[inline]
pub(crate) fn mob(f: f64, epsilon: f64) -> f64 {
    f * (1.0 - epsilon * f)
}

/// m_ε'(f) = 1 - 2εf.
#[inline]
pub fn mobility_prime(f: f64, epsilon: f64) -> f64 {
    1.0 - 2.0 * epsilon * f
}

/// ψ_ε(f) = log f - log(1-εf) with clamped arguments. Returns the value and
/// whether a clamp fired.
#[inline]
pub fn psi(f: f64, epsilon: f64) -> (f64, bool) {
    let mut clamped = false;
    let mut fc = f;
    if fc < LOG_CLAMP_FLOOR {
        fc = LOG_CLAMP_FLOOR;
        clamped = true;
    }
    if epsilon == 0.0 {
        return (fc.ln(), clamped);
    }
    let mut om = 1.0 - epsilon * fc;
    if om < LOG_CLAMP_FLOOR {
        om = LOG_CLAMP_FLOOR;
        clamped = true;
    }
    (fc.ln() - om.ln(), clamped)
}

/// Φ_ε(f, v) = ψ_ε(f) + |v|²/2, the free-energy functional derivative.
#[inline]
pub fn phi(f: f64, epsilon: f64, v: [f64; 2]) -> (f64, bool) {
    let (p, clamped) = psi(f, epsilon);
    (p + 0.5 * (v[0] * v[0] + v[1] * v[1]), clamped)
}

/// Entropy integrand U_ε(f) = (1/ε)[εf log(εf) + (1-εf)log(1-εf)], with the
/// limit value 0 at both saturation endpoints; f log f when ε = 0.
pub fn entropy_density(f: f64, epsilon: f64) -> f64 {
    if epsilon == 0.0 {
        if f <= 0.0 {
            return 0.0;
        }
        return f * f.ln();
    }
    let x = epsilon * f;
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    (x * x.ln() + (1.0 - x) * (1.0 - x).ln()) / epsilon
}

/// Node-wise Fermi-Dirac equilibrium μ_{ε,β}(v) = 1/(ε + β e^{|v|²/2}).
pub fn fd_equilibrium(params: &QuantumParams, grid: &Grid) -> Field {
    let values: Vec<f64> = (0..grid.len())
        .map(|i| 1.0 / (params.epsilon + params.beta * (0.5 * grid.speed_sq(i)).exp()))
        .collect();
    Field::new(grid.clone(), values).expect("equilibrium values are finite by construction")
}

/// Node-wise shifted profile. Rejects profiles whose support margin
/// |u| + 6/√α exceeds the truncation radius.
pub fn fd_profile(spec: &FdProfile, grid: &Grid) -> Result<Field> {
    let required = spec.shift_norm() + 6.0 / spec.alpha.sqrt();
    if required > grid.extent() * (1.0 + 1e-12) {
        return Err(Error::Param(format!(
            "profile support margin |u| + 6/sqrt(alpha) = {required:.3} exceeds the grid extent {}; \
             enlarge the domain to at least R = {required:.3}",
            grid.extent()
        )));
    }
    let values: Vec<f64> = (0..grid.len())
        .map(|i| spec.eval(grid.position(i)))
        .collect();
    Field::new(grid.clone(), values)
}

/// Mass of μ_{ε,β} over R^d by high-order radial quadrature.
pub fn equilibrium_mass(epsilon: f64, beta: f64, d: usize) -> f64 {
    quad::radial_integral(d, |r| 1.0 / (epsilon + beta * (0.5 * r * r).exp()))
}

/// Mass of the α-steepened profile (centered; the mass is shift-invariant).
pub fn profile_mass(epsilon: f64, alpha: f64, d: usize) -> f64 {
    quad::radial_integral(d, |r| 1.0 / (epsilon + (0.5 * alpha * r * r).exp()))
}

/// Solve for β such that the mass of μ_{ε,β} over R^d equals `target_mass`.
///
/// The mass is strictly decreasing in β, so bisection on log β over
/// [1e-12, 1e12] is unconditionally safe; 80 iterations pin β far below the
/// 1e-10 relative mass tolerance.
pub fn beta_from_mass(epsilon: f64, target_mass: f64, d: usize) -> Result<f64> {
    if !(1..=3).contains(&d) {
        return Err(Error::Param(format!(
            "beta_from_mass supports d = 1, 2, 3, got {d}"
        )));
    }
    if !target_mass.is_finite() || target_mass <= 0.0 {
        return Err(Error::Param(format!(
            "target mass must be > 0, got {target_mass}"
        )));
    }
    let (mut lo, mut hi) = (1e-12f64, 1e12f64);
    let mass_hi = equilibrium_mass(epsilon, lo, d);
    let mass_lo = equilibrium_mass(epsilon, hi, d);
    if target_mass > mass_hi || target_mass < mass_lo {
        return Err(Error::Bracket(format!(
            "target mass {target_mass:e} outside the reachable range [{mass_lo:e}, {mass_hi:e}] \
             for beta in [1e-12, 1e12]"
        )));
    }
    let mut beta = ((lo.ln() + hi.ln()) / 2.0).exp();
    for _ in 0..80 {
        beta = ((lo.ln() + hi.ln()) / 2.0).exp();
        let mass = equilibrium_mass(epsilon, beta, d);
        if (mass - target_mass).abs() <= 1e-12 * target_mass {
            return Ok(beta);
        }
        if mass > target_mass {
            lo = beta;
        } else {
            hi = beta;
        }
    }
    Ok(beta)
}
