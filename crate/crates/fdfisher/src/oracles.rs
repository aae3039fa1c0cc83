//! Closed-form dissipation identities evaluated by direct quadrature,
//! independent of any time stepping, plus the counterexample machinery.
//!
//! Field oracles share one canonical derivative route: ψ_ε (clamped logs) and
//! Φ_ε = ψ_ε + |v|²/2 are tabulated, their gradients/Hessians come from the
//! grid stencils, and ∇f is reconstructed as m_ε ∇ψ_ε. With that choice the
//! two algebraic forms of the Fokker-Planck dissipation identity agree to
//! rounding, so their comparison tests the identity itself rather than
//! stencil noise.
//!
//! The u-independent counterexample integrals are reduced to radial
//! Gauss-Legendre quadrature after the substitution z = √α (v - u); the
//! z-integrands no longer depend on α, which keeps the quadrature accurate
//! through the whole geometric α scan (α reaches 2^60 before the search gives
//! up). Angular moment identities such as ∫ (v·u)² over spheres = |v|²|u|²/d
//! are applied analytically inside the reduction; they are exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::functionals::psi_field;
use crate::grid::GridKind;
use crate::profiles::{equilibrium_mass, mob, mobility_prime};
use crate::quad;

/// Certificate of an instantaneous Fisher-information increase.
///
/// `d0`/`d1` are the shift-independent integrals of the quadratic form
/// (1/2) dJ/dt|₀ = -(1-α)² D₀ - |u|² D₁ and are present for the Fokker-Planck
/// and Landau cases; `model_rate`/`fdfp_rate` carry the per-part rates of the
/// Landau combination. `u_threshold` is the smallest shift magnitude that
/// makes the rate positive; the certified `u_norm` doubles it for sign
/// robustness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleResult {
    pub equation: String,
    pub alpha: f64,
    pub u_norm: f64,
    pub u_threshold: f64,
    pub d0: Option<f64>,
    pub d1: Option<f64>,
    pub model_rate: Option<f64>,
    pub fdfp_rate: Option<f64>,
    pub djdt0: f64,
    pub positive: bool,
}

/// Masses ν, ν̃ of μ_{ε,β} and μ̃_{ε,β} = μ(1-εμ); the coefficients of the
/// Landau splitting into rotational diffusion and a Fokker-Planck part.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LandauCoefficients {
    pub nu: f64,
    pub nu_tilde: f64,
}

#[inline]
fn hs_norm_sq(h: [f64; 3]) -> f64 {
    // plain sum of squares of all d² entries; the off-diagonal appears twice
    h[0] * h[0] + 2.0 * h[1] * h[1] + h[2] * h[2]
}

fn phi_table(field: &Field, epsilon: f64) -> Vec<f64> {
    let grid = field.grid();
    field
        .values()
        .iter()
        .enumerate()
        .map(|(i, &f)| crate::profiles::psi(f, epsilon).0 + 0.5 * grid.speed_sq(i))
        .collect()
}

fn require_kind(field: &Field, op: &'static str, allowed: &[GridKind]) -> Result<()> {
    let kind = field.grid().kind();
    if allowed.contains(&kind) {
        Ok(())
    } else {
        Err(Error::UnsupportedGrid {
            op,
            kind: kind.to_string(),
        })
    }
}

/// dJ_ε/dt along the Fokker-Planck flow, three-term form:
/// -2 ∫ m|D²Φ|² + m(m' - ε ∇f·∇Φ)|∇Φ|² + 2ε(∇f·∇Φ)².
pub fn djdt_fdfp(field: &Field, epsilon: f64) -> Result<f64> {
    require_kind(
        field,
        "djdt_fdfp",
        &[GridKind::Line1d, GridKind::Tensor2d, GridKind::Polar2d],
    )?;
    field.check_bounds(epsilon)?;
    let grid = field.grid();
    grid.check_min_axis("hessian", 5)?;
    let phi = phi_table(field, epsilon);
    let vals = field.values();
    let sum = grid.integrate_with(|i| {
        let f = vals[i];
        let m = mob(f, epsilon);
        let mp = mobility_prime(f, epsilon);
        let gphi = grid.grad_at(&phi, i);
        let h = grid.hess_at(&phi, i);
        let v = grid.frame_v(i);
        let gf = [m * (gphi[0] - v[0]), m * (gphi[1] - v[1])];
        let dot = gf[0] * gphi[0] + gf[1] * gphi[1];
        let gphi_sq = gphi[0] * gphi[0] + gphi[1] * gphi[1];
        m * hs_norm_sq(h) + m * (mp - epsilon * dot) * gphi_sq + 2.0 * epsilon * dot * dot
    });
    Ok(-2.0 * sum)
}

/// dJ_ε/dt along the Fokker-Planck flow, five-term form:
/// -∫ 2m|D²Φ|² + 2mm'|∇Φ|² - m''|∇f|²|∇Φ|² + 2m''m(v·∇Φ)(∇f·∇Φ) - m''m(v·∇f)|∇Φ|²
/// with m'' = -2ε, so the last three terms vanish identically when ε = 0.
pub fn djdt_fdfp_altform(field: &Field, epsilon: f64) -> Result<f64> {
    require_kind(
        field,
        "djdt_fdfp_altform",
        &[GridKind::Line1d, GridKind::Tensor2d, GridKind::Polar2d],
    )?;
    field.check_bounds(epsilon)?;
    let grid = field.grid();
    grid.check_min_axis("hessian", 5)?;
    let phi = phi_table(field, epsilon);
    let vals = field.values();
    let mpp = -2.0 * epsilon;
    let sum = grid.integrate_with(|i| {
        let f = vals[i];
        let m = mob(f, epsilon);
        let mp = mobility_prime(f, epsilon);
        let gphi = grid.grad_at(&phi, i);
        let h = grid.hess_at(&phi, i);
        let v = grid.frame_v(i);
        let gf = [m * (gphi[0] - v[0]), m * (gphi[1] - v[1])];
        let gphi_sq = gphi[0] * gphi[0] + gphi[1] * gphi[1];
        let gf_sq = gf[0] * gf[0] + gf[1] * gf[1];
        let v_dot_gphi = v[0] * gphi[0] + v[1] * gphi[1];
        let v_dot_gf = v[0] * gf[0] + v[1] * gf[1];
        let gf_dot_gphi = gf[0] * gphi[0] + gf[1] * gphi[1];
        2.0 * m * hs_norm_sq(h) + 2.0 * m * mp * gphi_sq - mpp * gf_sq * gphi_sq
            + 2.0 * mpp * m * v_dot_gphi * gf_dot_gphi
            - mpp * m * v_dot_gf * gphi_sq
    });
    Ok(-sum)
}

/// dI_ε/dt along the heat flow on a flat torus:
/// -2 ∫ m|D²ψ|² + ε|∇f|²|∇ψ|². Nonpositive term by term.
pub fn didt_heat_flat(field: &Field, epsilon: f64) -> Result<f64> {
    require_kind(
        field,
        "didt_heat_flat",
        &[GridKind::Torus1d, GridKind::Torus2d],
    )?;
    field.check_bounds(epsilon)?;
    let grid = field.grid();
    grid.check_min_axis("hessian", 5)?;
    let psi = psi_field(field, epsilon).values;
    let vals = field.values();
    let sum = grid.integrate_with(|i| {
        let m = mob(vals[i], epsilon);
        let g = grid.grad_at(&psi, i);
        let h = grid.hess_at(&psi, i);
        let g_sq = g[0] * g[0] + g[1] * g[1];
        let gf_sq = m * m * g_sq;
        m * hs_norm_sq(h) + epsilon * gf_sq * g_sq
    });
    Ok(-2.0 * sum)
}

/// dJ_ε/dt along the rotational diffusion model in d = 2:
/// -2 ∫ m|∇Ωψ|² + ε(|∇ψ|² - |v|²)|Ωf|², with the single generator
/// Ω = v₁∂₂ - v₂∂₁ on cartesian grids and Ω = ∂_θ on the polar grid.
pub fn djdt_model(field: &Field, epsilon: f64) -> Result<f64> {
    require_kind(
        field,
        "djdt_model",
        &[GridKind::Tensor2d, GridKind::Polar2d],
    )?;
    field.check_bounds(epsilon)?;
    let grid = field.grid();
    grid.check_min_axis("hessian", 5)?;
    let psi = psi_field(field, epsilon).values;
    let vals = field.values();
    let polar = grid.kind() == GridKind::Polar2d;
    let omega_psi: Vec<f64> = (0..grid.len())
        .map(|i| {
            if polar {
                grid.d1_raw(&psi, i, 1)
            } else {
                let p = grid.position(i);
                p[0] * grid.d1_raw(&psi, i, 1) - p[1] * grid.d1_raw(&psi, i, 0)
            }
        })
        .collect();
    let sum = grid.integrate_with(|i| {
        let m = mob(vals[i], epsilon);
        let gw = grid.grad_at(&omega_psi, i);
        let gpsi = grid.grad_at(&psi, i);
        let omega_f = m * omega_psi[i];
        let gpsi_sq = gpsi[0] * gpsi[0] + gpsi[1] * gpsi[1];
        m * (gw[0] * gw[0] + gw[1] * gw[1])
            + epsilon * (gpsi_sq - grid.speed_sq(i)) * omega_f * omega_f
    });
    Ok(-2.0 * sum)
}

/// inf over nodes of F = 1 - 2εf - (9ε/4)|v|² m_ε, the pointwise
/// monotonicity criterion.
pub fn f_criterion(field: &Field, epsilon: f64) -> f64 {
    let grid = field.grid();
    field
        .values()
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            1.0 - 2.0 * epsilon * f - 2.25 * epsilon * grid.speed_sq(i) * mob(f, epsilon)
        })
        .fold(f64::INFINITY, f64::min)
}

/// sup over nodes of |v|⁴ m_ε(f); the prefactor in the rotational-model
/// dissipation estimate.
pub fn sup_v4_mobility(field: &Field, epsilon: f64) -> f64 {
    let grid = field.grid();
    field
        .values()
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let s = grid.speed_sq(i);
            s * s * mob(f, epsilon)
        })
        .fold(0.0, f64::max)
}

/// Radial moments of the centered α-profile after the rescaling z = √α w.
/// They depend on ε and d only, so one evaluation serves a whole α scan.
#[derive(Debug, Clone, Copy)]
struct ProfileMoments {
    /// ∫ m̂ dz
    g_m: f64,
    /// ∫ m̂ m̂' dz
    g_mmp: f64,
    /// ∫ |z|² m̂ m̂' dz
    g2_mmp: f64,
    /// ∫ |z|² m̂² dz
    g2_m2: f64,
    /// ∫ |z|⁴ m̂² dz
    g4_m2: f64,
}

fn profile_moments(epsilon: f64, d: usize) -> Result<ProfileMoments> {
    if !(1..=3).contains(&d) {
        return Err(Error::Param(format!(
            "counterexample integrals support d = 1, 2, 3, got {d}"
        )));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::Param(format!(
            "epsilon must be finite and >= 0, got {epsilon}"
        )));
    }
    let mhat = |z: f64| {
        let e = (0.5 * z * z).exp();
        e / ((epsilon + e) * (epsilon + e))
    };
    let mhat_prime = |z: f64| {
        let e = (0.5 * z * z).exp();
        (e - epsilon) / (epsilon + e)
    };
    Ok(ProfileMoments {
        g_m: quad::radial_integral(d, mhat),
        g_mmp: quad::radial_integral(d, |z| mhat(z) * mhat_prime(z)),
        g2_mmp: quad::radial_integral(d, |z| z * z * mhat(z) * mhat_prime(z)),
        g2_m2: quad::radial_integral(d, |z| z * z * mhat(z) * mhat(z)),
        g4_m2: quad::radial_integral(d, |z| z.powi(4) * mhat(z) * mhat(z)),
    })
}

fn d0_d1_from(m: &ProfileMoments, epsilon: f64, alpha: f64, d: usize) -> (f64, f64) {
    let scale = alpha.powf(-(d as f64) / 2.0);
    let d0 =
        scale * (d as f64 * m.g_m + m.g2_mmp / alpha + epsilon * (1.0 + alpha) / alpha * m.g4_m2);
    let d1 = scale * (m.g_mmp + epsilon * (1.0 - alpha + 2.0 / d as f64) * m.g2_m2);
    (d0, d1)
}

/// The shift-independent integrals D₀, D₁ of the Fokker-Planck
/// counterexample rate at the α-steepened profile.
pub fn counterexample_integrals(epsilon: f64, alpha: f64, d: usize) -> Result<(f64, f64)> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Param(format!(
            "alpha must be finite and > 0, got {alpha}"
        )));
    }
    let m = profile_moments(epsilon, d)?;
    Ok(d0_d1_from(&m, epsilon, alpha, d))
}

/// D₁ split into its two power-law components (positive part C₀ α^{-d/2},
/// negative part C₁ α^{1-d/2}); D₁ is their difference.
pub fn d1_components(epsilon: f64, alpha: f64, d: usize) -> Result<(f64, f64)> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Param(format!(
            "alpha must be finite and > 0, got {alpha}"
        )));
    }
    let m = profile_moments(epsilon, d)?;
    let scale = alpha.powf(-(d as f64) / 2.0);
    let pos = scale * (m.g_mmp + epsilon * (1.0 + 2.0 / d as f64) * m.g2_m2);
    let neg = scale * epsilon * alpha * m.g2_m2;
    Ok((pos, neg))
}

const ALPHA_SCAN_LIMIT: f64 = 1.15e18; // 2^60

/// Scan α = 1, 2, 4, … until D₁ < 0, then pick |u| at twice the sign
/// threshold. Fails (with the D₁ trace) when no sign change occurs, which is
/// the classical regime ε = 0.
pub fn counterexample_search(epsilon: f64, d: usize) -> Result<CounterexampleResult> {
    let moments = profile_moments(epsilon, d)?;
    let mut trace = Vec::new();
    let mut alpha = 1.0f64;
    while alpha <= ALPHA_SCAN_LIMIT {
        let (d0, d1) = d0_d1_from(&moments, epsilon, alpha, d);
        trace.push((alpha, d1));
        if d1 < 0.0 {
            let shift_sq = (1.0 - alpha) * (1.0 - alpha) * d0 / (-d1);
            let threshold = shift_sq.sqrt();
            let u = 2.0 * threshold;
            let djdt0 = 2.0 * (-(1.0 - alpha) * (1.0 - alpha) * d0 - u * u * d1);
            return Ok(CounterexampleResult {
                equation: "fdfp".into(),
                alpha,
                u_norm: u,
                u_threshold: threshold,
                d0: Some(d0),
                d1: Some(d1),
                model_rate: None,
                fdfp_rate: None,
                positive: djdt0 > 0.0,
                djdt0,
            });
        }
        alpha *= 2.0;
    }
    Err(Error::SearchFailed {
        reason: format!(
            "D_1 stayed positive for every alpha up to 2^60 at epsilon = {epsilon} \
             (no Fisher-information increase in this regime)"
        ),
        trace,
    })
}

/// Closed-form rotational-model rate at the shifted profile:
/// dJ/dt|₀ = -2α²(d-1)|u|² [ A + (ε/d)((α²-1)B₄ - |u|²B₂) ]
/// with A = ∫m̃, B₂ = ∫|w|²m̃², B₄ = ∫|w|⁴m̃².
pub fn model_djdt0(epsilon: f64, alpha: f64, d: usize, u_norm: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Param(format!(
            "alpha must be finite and > 0, got {alpha}"
        )));
    }
    let m = profile_moments(epsilon, d)?;
    let scale = alpha.powf(-(d as f64) / 2.0);
    let a = scale * m.g_m;
    let b2 = scale / alpha * m.g2_m2;
    let b4 = scale / (alpha * alpha) * m.g4_m2;
    let usq = u_norm * u_norm;
    let bracket = a + epsilon / d as f64 * ((alpha * alpha - 1.0) * b4 - usq * b2);
    Ok(-2.0 * alpha * alpha * (d as f64 - 1.0) * usq * bracket)
}

/// Double |u| from 1 until the closed-form model rate turns positive.
pub fn model_counterexample_search(
    epsilon: f64,
    alpha: f64,
    d: usize,
) -> Result<CounterexampleResult> {
    if d != 2 {
        return Err(Error::Param(format!(
            "the rotational model is realized with the single d = 2 generator, got d = {d}"
        )));
    }
    if epsilon <= 0.0 {
        return Err(Error::SearchFailed {
            reason: "the model rate is nonpositive for every shift when epsilon = 0".into(),
            trace: vec![],
        });
    }
    let m = profile_moments(epsilon, d)?;
    let scale = alpha.powf(-(d as f64) / 2.0);
    let a = scale * m.g_m;
    let b2 = scale / alpha * m.g2_m2;
    let b4 = scale / (alpha * alpha) * m.g4_m2;
    let threshold = ((d as f64 * a / epsilon + (alpha * alpha - 1.0) * b4) / b2)
        .max(0.0)
        .sqrt();
    let mut trace = Vec::new();
    let mut u = 1.0f64;
    while u <= 1e3 {
        let rate = model_djdt0(epsilon, alpha, d, u)?;
        trace.push((u, rate));
        if rate > 0.0 {
            return Ok(CounterexampleResult {
                equation: "model".into(),
                alpha,
                u_norm: u,
                u_threshold: threshold,
                d0: None,
                d1: None,
                model_rate: Some(rate),
                fdfp_rate: None,
                djdt0: rate,
                positive: true,
            });
        }
        u *= 2.0;
    }
    Err(Error::SearchFailed {
        reason: format!("model rate stayed nonpositive for |u| up to 1e3 (epsilon = {epsilon}, alpha = {alpha})"),
        trace,
    })
}

/// ν and ν̃ by radial quadrature, with the order check ν̃ ≤ ν.
pub fn landau_coefficients(epsilon: f64, beta: f64, d: usize) -> Result<LandauCoefficients> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::Param(format!(
            "beta must be finite and > 0, got {beta}"
        )));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::Param(format!(
            "epsilon must be finite and >= 0, got {epsilon}"
        )));
    }
    let nu = equilibrium_mass(epsilon, beta, d);
    let nu_tilde = quad::radial_integral(d, |r| {
        let mu = 1.0 / (epsilon + beta * (0.5 * r * r).exp());
        mu * (1.0 - epsilon * mu)
    });
    if nu_tilde.is_nan() || nu_tilde <= 0.0 || nu_tilde > nu * (1.0 + 1e-12) {
        return Err(Error::Numerical(format!(
            "landau coefficients violate 0 < nu_tilde <= nu: nu = {nu:e}, nu_tilde = {nu_tilde:e}"
        )));
    }
    Ok(LandauCoefficients { nu, nu_tilde })
}

/// dJ_ε/dt along the linear-type Landau flow via the splitting
/// ν̃ · (rotational part) + (d-1) ν · (Fokker-Planck part), d = 2.
pub fn djdt_landau(field: &Field, epsilon: f64, beta: f64) -> Result<f64> {
    require_kind(
        field,
        "djdt_landau",
        &[GridKind::Tensor2d, GridKind::Polar2d],
    )?;
    let coeffs = landau_coefficients(epsilon, beta, 2)?;
    let model = djdt_model(field, epsilon)?;
    let fdfp = djdt_fdfp(field, epsilon)?;
    Ok(coeffs.nu_tilde * model + coeffs.nu * fdfp)
}

/// Counterexample for the Landau flow: find α with D₁ < 0, then push |u| far
/// enough that the rotational and Fokker-Planck parts are both positive.
pub fn landau_counterexample_search(
    epsilon: f64,
    beta: f64,
    d: usize,
) -> Result<CounterexampleResult> {
    if d != 2 {
        return Err(Error::Param(format!(
            "the Landau counterexample is realized in d = 2, got d = {d}"
        )));
    }
    let coeffs = landau_coefficients(epsilon, beta, d)?;
    let moments = profile_moments(epsilon, d)?;
    let mut trace = Vec::new();
    let mut alpha = 1.0f64;
    while alpha <= ALPHA_SCAN_LIMIT {
        let (d0, d1) = d0_d1_from(&moments, epsilon, alpha, d);
        trace.push((alpha, d1));
        if d1 < 0.0 {
            let scale = alpha.powf(-(d as f64) / 2.0);
            let a = scale * moments.g_m;
            let b2 = scale / alpha * moments.g2_m2;
            let b4 = scale / (alpha * alpha) * moments.g4_m2;
            let thr_fdfp_sq = (1.0 - alpha) * (1.0 - alpha) * d0 / (-d1);
            let thr_model_sq = (d as f64 * a / epsilon + (alpha * alpha - 1.0) * b4) / b2;
            let threshold = thr_fdfp_sq.max(thr_model_sq).sqrt();
            let u = 2.0 * threshold;
            let fdfp_rate = 2.0 * (-(1.0 - alpha) * (1.0 - alpha) * d0 - u * u * d1);
            let model_rate = model_djdt0(epsilon, alpha, d, u)?;
            let djdt0 = coeffs.nu_tilde * model_rate + (d as f64 - 1.0) * coeffs.nu * fdfp_rate;
            return Ok(CounterexampleResult {
                equation: "landau".into(),
                alpha,
                u_norm: u,
                u_threshold: threshold,
                d0: Some(d0),
                d1: Some(d1),
                model_rate: Some(model_rate),
                fdfp_rate: Some(fdfp_rate),
                positive: djdt0 > 0.0 && model_rate > 0.0 && fdfp_rate > 0.0,
                djdt0,
            });
        }
        alpha *= 2.0;
    }
    Err(Error::SearchFailed {
        reason: format!(
            "D_1 stayed positive for every alpha up to 2^60 at epsilon = {epsilon} \
             (no Landau Fisher-information increase in this regime)"
        ),
        trace,
    })
}
