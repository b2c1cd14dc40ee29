//! Angular integrals of the Green function of the image domain and the
//! identities they satisfy.
//!
//! With `w₀ = ψ(0)`, conformal invariance gives `g_D(w₀, w) = log(1/|ψ⁻¹(w)|)`
//! on `D` (zero outside). Integrating `|w|^{p-2} g_D(w₀, w)` over `D` in polar
//! coordinates turns the area integral into `∫₀^∞ α^{p-1} G(α) dα` with
//! `G(α) = ∫ g_D(w₀, αe^{iθ}) dθ`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

use super::norms::{yamashita_integral, yamashita_partial};
use super::{check_p, AlphaGrid};
use crate::error::{Error, Result};
use crate::hypgeo::bound_constant;
use crate::levelset::{dist_to_levelset, min_modulus, DEFAULT_RAYS};
use crate::maps::ConformalMap;
use crate::quad::{integrate, with_breaks, QuadOptions};

/// Upper cut-off of the `α` integral before tail extrapolation.
pub const ALPHA_MAX_DEFAULT: f64 = 1e6;
/// Lower cut-off of the `α` integral; the head below it is integrated in
/// closed form from the behaviour of `G` near 0.
const ALPHA_HEAD: f64 = 1e-12;
const ANGULAR_TOL: f64 = 1e-11;
const RADIAL_TOL: f64 = 1e-8;

fn green_at(m: &ConformalMap, w: Complex64) -> f64 {
    if !m.in_image(w) {
        return 0.0;
    }
    match m.inverse(w) {
        Ok(z) => -z.norm().ln(),
        Err(_) => 0.0,
    }
}

/// `G(α) = ∫₀^{2π} g_D(ψ(0), αe^{iθ}) dθ`.
pub fn green_angular(m: &ConformalMap, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument { name: "alpha", value: alpha });
    }
    if !m.has_inverse() {
        return Err(Error::MissingInverse(m.name()));
    }
    let mut breaks = m.circle_breakpoints(alpha);
    let w0 = m.base_value();
    if w0.norm() > 0.0 {
        breaks.push(w0.arg());
    }
    integrate(
        |t| green_at(m, Complex64::from_polar(alpha, t)),
        &with_breaks(-PI, PI, &breaks),
        QuadOptions { abs_tol: 1e-15, ..QuadOptions::rel(ANGULAR_TOL) },
    )
    .into_result()
}

/// Both sides of `∬ |ψ|^{p-2}|ψ'|² log(1/|z|) dA = ∫₀^∞ α^{p-1} G(α) dα`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChangeOfVariables {
    pub p: f64,
    pub alpha_max: f64,
    /// Area integral, extrapolated to `r → 1`.
    pub lhs: f64,
    /// `α` integral including the closed-form head and the power-law tail.
    pub rhs: f64,
    pub rhs_truncated: f64,
    pub rhs_tail: f64,
    /// Decay exponent of `G` near `α_max`.
    pub tail_exponent: f64,
    /// `|lhs - rhs| / lhs`.
    pub relative_difference: f64,
    /// `min |z|` over `F_{α_max}`: the disk `|z| < r_cut` lies inside `{|ψ| < α_max}`.
    pub r_cut: f64,
    /// Area integral over `|z| < r_cut`.
    pub lhs_truncated: f64,
    /// `|rhs_truncated - lhs_truncated| / lhs`.
    pub truncation_mismatch: f64,
}

fn alpha_integral(m: &ConformalMap, p: f64, alpha_max: f64) -> Result<(f64, f64, f64)> {
    let g = |a: f64| green_angular(m, a);
    // G(α) ≈ a + b log(1/α) near 0, with b = 2π when ψ(0) = 0
    let (g0, g1) = (g(ALPHA_HEAD)?, g(ALPHA_HEAD / 10.0)?);
    let b = (g1 - g0) / 10f64.ln();
    let l = (1.0 / ALPHA_HEAD).ln();
    let a = g0 - b * l;
    let dp = ALPHA_HEAD.powf(p);
    let head = a * dp / p + b * dp * (p * l + 1.0) / (p * p);

    let mut breaks: Vec<f64> = m.critical_radii().iter().map(|r| r.ln()).collect();
    let w0 = m.base_value().norm();
    if w0 > 0.0 {
        breaks.push(w0.ln());
    }
    let mut failed = None;
    let body = integrate(
        |t| match g(t.exp()) {
            Ok(v) => (p * t).exp() * v,
            Err(e) => {
                failed.get_or_insert(e);
                0.0
            }
        },
        &with_breaks(ALPHA_HEAD.ln(), alpha_max.ln(), &breaks),
        QuadOptions { rel_tol: RADIAL_TOL, abs_tol: 0.0, max_intervals: 1000 },
    );
    if let Some(e) = failed {
        return Err(e);
    }
    let body = body.into_result()?;

    let (g_hi, g_lo) = (g(alpha_max)?, g(alpha_max / 10.0)?);
    let s = (g_lo / g_hi).log10();
    let tail = if s > p { alpha_max.powf(p) * g_hi / (s - p) } else { f64::INFINITY };
    Ok((head + body, tail, s))
}

/// Compare the area integral with the `α` integral of `G`. Both sides are
/// extrapolated to their full ranges; the truncated comparison at
/// `r_cut = min_modulus(α_max)` is reported alongside.
pub fn change_of_variables_check(m: &ConformalMap, p: f64) -> Result<ChangeOfVariables> {
    change_of_variables_check_at(m, p, ALPHA_MAX_DEFAULT)
}

pub fn change_of_variables_check_at(m: &ConformalMap, p: f64, alpha_max: f64) -> Result<ChangeOfVariables> {
    check_p(p)?;
    let lhs = yamashita_integral(m, p)?.value;
    let (rhs_truncated, rhs_tail, tail_exponent) = alpha_integral(m, p, alpha_max)?;
    let rhs = rhs_truncated + rhs_tail;
    let r_cut = min_modulus(m, alpha_max, DEFAULT_RAYS)?.radius();
    let lhs_truncated = yamashita_partial(m, p, r_cut)?;
    Ok(ChangeOfVariables {
        p,
        alpha_max,
        lhs,
        rhs,
        rhs_truncated,
        rhs_tail,
        tail_exponent,
        relative_difference: (lhs - rhs).abs() / lhs,
        r_cut,
        lhs_truncated,
        truncation_mismatch: (rhs_truncated - lhs_truncated).abs() / lhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePoint {
    pub alpha: f64,
    pub distance: f64,
    pub g: f64,
    /// `2π C(x₀) e^{-d}`.
    pub bound: f64,
    /// `G ≤ 1.01 · bound`.
    pub holds: bool,
}

/// `G(α) ≤ 2π C(x₀) e^{-d_𝔻(0, F_α)}` at every grid point with `d ≥ x₀`.
pub fn envelope_check(m: &ConformalMap, grid: &AlphaGrid, x0: f64) -> Result<Vec<EnvelopePoint>> {
    grid.validate()?;
    let c = bound_constant(x0)?;
    let mut out = Vec::new();
    for alpha in grid.values() {
        let d = match dist_to_levelset(m, alpha) {
            Ok((d, _)) => d,
            Err(Error::EmptyLevelSet { .. }) => continue,
            Err(e) => return Err(e),
        };
        if d.value() < x0 {
            continue;
        }
        let g = green_angular(m, alpha)?;
        let bound = TAU * c * d.exp_neg();
        out.push(EnvelopePoint { alpha, distance: d.value(), g, bound, holds: g <= 1.01 * bound });
    }
    Ok(out)
}
