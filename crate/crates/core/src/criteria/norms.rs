//! Integral means `∫ |ψ(re^{iθ})|^p dθ` and the area integral
//! `∬ |ψ|^{p-2} |ψ'|² log(1/|z|) dA`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use num_traits::Float;

use super::{check_p, DEFAULT_MARGIN};
use crate::error::{Error, Result};
use crate::fit::{classify, growth_fit, Convergence, GrowthFit};
use crate::maps::ConformalMap;
use crate::quad::{graded_breaks, integrate, with_breaks, QuadOptions};

/// Number of dyadic radii `1 - 2^{-k}` in the default grid.
pub const DYADIC_LEVELS: usize = 24;
/// Increments entering the growth fit.
pub const GROWTH_TAIL: usize = 8;
/// `2^{-INNER_LEVELS}` is the radius below which the area integrand is
/// replaced by its leading term at the origin.
const INNER_LEVELS: i32 = 60;
/// Below `2^-HOLE_LEVELS` times the hole radius, `ψ` near its zero cancels
/// too many digits and the linear model takes over.
const HOLE_LEVELS: i32 = 24;
const ANGULAR_TOL: f64 = 1e-9;
const RADIAL_TOL: f64 = 1e-8;
/// Relative slack allowed when checking that the means increase.
const MONOTONE_SLACK: f64 = 1e-7;

/// `1 - 2^{-k}` for `k = 1..=24`.
pub fn default_radius_grid() -> Vec<f64> {
    (1..=DYADIC_LEVELS as i32).map(|k| 1.0 - 0.5f64.powi(k)).collect()
}


/// `∫₀^{2π} |ψ(r e^{iθ})|^p dθ`.
pub fn hardy_mean(m: &ConformalMap, p: f64, r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument { name: "r", value: r });
    }
    hardy_mean_gap(m, p, 1.0 - r)
}

/// [`hardy_mean`] at `r = 1 - gap`, for gaps below the spacing of doubles near 1.
pub fn hardy_mean_gap(m: &ConformalMap, p: f64, gap: f64) -> Result<f64> {
    check_p(p)?;
    if !(gap > 0.0 && gap <= 1.0) {
        return Err(Error::InvalidArgument { name: "gap", value: gap });
    }
    let breaks = graded_breaks(-PI, PI, &m.boundary_singularities(), gap);
    let opts = QuadOptions { abs_tol: 1e-15, ..QuadOptions::rel(1e-8) };
    integrate(|t| m.eval_polar(gap, t).norm().powf(p), &breaks, opts).into_result()
}

/// Behaviour of the integral means along a sequence of radii.
#[derive(Debug, Clone, PartialEq)]
pub struct NormGrowth {
    pub p: f64,
    pub radii: Vec<f64>,
    pub means: Vec<f64>,
    pub nondecreasing: bool,
    pub growth: Option<GrowthFit>,
    /// `p / (1 + e)` for increments growing like `2^{e k}`: the exponent at
    /// which the growth would turn into a plateau.
    pub threshold_exponent: f64,
    pub verdict: Convergence,
}

fn nondecreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0] * (1.0 - MONOTONE_SLACK))
}

fn growth_verdict(p: f64, values: &[f64]) -> (Option<GrowthFit>, f64, Convergence) {
    let fit = growth_fit(values, GROWTH_TAIL.min(values.len().saturating_sub(1)));
    let threshold = fit.as_ref().map_or(f64::NAN, |g| g.threshold_exponent(p));
    let verdict = classify(p, fit.as_ref().map(|g| g.threshold_exponent(p)), DEFAULT_MARGIN);
    (fit, threshold, verdict)
}

/// Integral means on `r_grid` (increasing radii, dyadic by default) with
/// bounded growth read as membership evidence.
pub fn hardy_norm_direct(m: &ConformalMap, p: f64, r_grid: &[f64]) -> Result<NormGrowth> {
    check_p(p)?;
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument { name: "r_grid", value: f64::NAN });
    }
    let means = r_grid.iter().map(|&r| hardy_mean(m, p, r)).collect::<Result<Vec<_>>>()?;
    let (growth, threshold_exponent, verdict) = growth_verdict(p, &means);
    Ok(NormGrowth {
        p,
        radii: r_grid.to_vec(),
        nondecreasing: nondecreasing(&means),
        means,
        growth,
        threshold_exponent,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct YamashitaResult {
    pub p: f64,
    /// `(r, ∬_{|z| < r})` for `r = 1 - 2^{-k}`.
    pub partials: Vec<(f64, f64)>,
    /// Last partial plus the geometric extrapolation of the increments when
    /// they decay; `+∞` when the partials diverge.
    pub value: f64,
    pub diverges: bool,
    pub growth: Option<GrowthFit>,
    pub threshold_exponent: f64,
    pub verdict: Convergence,
    /// `ψ(0) = 0` and `p < 2`: the integrand is unbounded (but integrable)
    /// at the origin.
    pub singular_origin: bool,
}

/// Disk `|z - center| < radius` around a zero of `ψ` off the origin. The
/// polar integral around 0 skips it and it is integrated in polar
/// coordinates around the zero instead.
#[derive(Debug, Clone, Copy)]
struct Hole {
    center: Complex64,
    radius: f64,
}

impl Hole {
    fn of(m: &ConformalMap) -> Option<Hole> {
        let z0 = m.interior_zero()?;
        let r0 = z0.norm();
        (r0 > 0.0).then(|| Hole { center: z0, radius: (0.1f64).min(0.5 * r0).min(0.25 * (1.0 - r0)) })
    }

    /// Radii of the circles around 0 tangent to the hole.
    fn radial_breaks(&self) -> [f64; 2] {
        let r0 = self.center.norm();
        [r0 - self.radius, r0 + self.radius]
    }

    /// Angles where the circle `|z| = ρ` enters and leaves the hole.
    fn angular_breaks(&self, rho: f64) -> Option<(f64, f64)> {
        let r0 = self.center.norm();
        let c = (rho * rho + r0 * r0 - self.radius * self.radius) / (2.0 * rho * r0);
        (c.abs() < 1.0).then(|| {
            let half = c.acos();
            (self.center.arg() - half, self.center.arg() + half)
        })
    }
}

struct AreaIntegrand<'a> {
    map: &'a ConformalMap,
    p: f64,
    /// Boundary singularities plus the direction of the hole.
    centres: Vec<f64>,
    hole: Option<Hole>,
}

/// Radius of the circle `|z| = ρ`, kept as the gap `1 - ρ` near the boundary.
#[derive(Debug, Clone, Copy)]
enum Circle {
    Radius(f64),
    Gap(f64),
}

impl Circle {
    fn radius(self) -> f64 {
        match self {
            Circle::Radius(r) => r,
            Circle::Gap(g) => 1.0 - g,
        }
    }

    fn gap(self) -> f64 {
        match self {
            Circle::Radius(r) => 1.0 - r,
            Circle::Gap(g) => g,
        }
    }
}

/// `2π ∫₀^δ s^{p-1} (a log(1/s) + b) ds`.
fn power_head(p: f64, delta: f64, a: f64, b: f64) -> f64 {
    let l = (1.0 / delta).ln();
    TAU * delta.powf(p) * (a * (p * l + 1.0) / (p * p) + b / p)
}

impl<'a> AreaIntegrand<'a> {
    fn new(map: &'a ConformalMap, p: f64) -> Self {
        let hole = Hole::of(map);
        let mut b = map.boundary_singularities();
        if let Some(h) = &hole {
            b.push(h.center.arg());
        }
        AreaIntegrand { map, p, centres: b, hole }
    }

    /// `|ψ|^{p-2} |ψ'|²`.
    fn density(&self, w: Complex64, dw: Complex64) -> f64 {
        ((self.p - 2.0) * w.norm().ln() + 2.0 * dw.norm().ln()).exp()
    }

    /// `∫ |ψ|^{p-2} |ψ'|² dθ` on a circle around the origin, outside the hole.
    fn angular(&self, c: Circle) -> Result<f64> {
        let f = |t: f64| {
            let (w, dw) = match c {
                Circle::Radius(r) => {
                    let z = Complex64::from_polar(r, t);
                    (self.map.eval_unchecked(z), self.map.deriv_unchecked(z))
                }
                Circle::Gap(g) => (self.map.eval_polar(g, t), self.map.deriv_polar(g, t)),
            };
            self.density(w, dw)
        };
        let cut = self.hole.as_ref().and_then(|h| h.angular_breaks(c.radius()));
        match cut {
            None => {
                let b = graded_breaks(-PI, PI, &self.centres, c.gap());
                integrate(f, &b, QuadOptions::rel(ANGULAR_TOL)).into_result()
            }
            Some((t0, t1)) => {
                // integrate over the complementary arc [t1, t0 + 2π]
                let centres: Vec<f64> = self.centres.iter().flat_map(|&x| [x - TAU, x, x + TAU]).collect();
                let b = graded_breaks(t1, t0 + TAU, &centres, c.gap());
                integrate(f, &b, QuadOptions::rel(ANGULAR_TOL)).into_result()
            }
        }
    }

    /// Radial integrand `ρ log(1/ρ) ∫ … dθ`.
    fn radial(&self, c: Circle, failed: &mut Option<Error>) -> f64 {
        let weight = match c {
            Circle::Radius(r) => -r * r.ln(),
            Circle::Gap(g) => -(1.0 - g) * (-g).ln_1p(),
        };
        match self.angular(c) {
            Ok(a) => weight * a,
            Err(e) => {
                failed.get_or_insert(e);
                0.0
            }
        }
    }

    fn adaptive<F: FnMut(f64) -> f64>(f: F, points: &[f64], failed: Option<Error>) -> Result<f64> {
        let res = integrate(f, points, QuadOptions { rel_tol: RADIAL_TOL, abs_tol: 0.0, max_intervals: 400 });
        if let Some(e) = failed {
            return Err(e);
        }
        res.into_result()
    }

    /// Integral over `lo < |z| < hi`, for radii up to 1/2.
    fn inner(&self, lo: f64, hi: f64) -> Result<f64> {
        let extra: Vec<f64> = self.hole.iter().flat_map(|h| h.radial_breaks()).collect();
        let mut failed = None;
        let v = Self::adaptive(|r| self.radial(Circle::Radius(r), &mut failed), &with_breaks(lo, hi, &extra), None)?;
        failed.map_or(Ok(v), Err)
    }

    /// Integral over `1 - gap_hi < |z| < 1 - gap_lo`.
    fn outer(&self, gap_lo: f64, gap_hi: f64) -> Result<f64> {
        let extra: Vec<f64> = self.hole.iter().flat_map(|h| h.radial_breaks()).map(|r| 1.0 - r).collect();
        let mut failed = None;
        let v = Self::adaptive(|g| self.radial(Circle::Gap(g), &mut failed), &with_breaks(gap_lo, gap_hi, &extra), None)?;
        failed.map_or(Ok(v), Err)
    }

    /// Integral over `|z| < δ` from the leading behaviour of `ψ` at 0.
    fn head(&self, delta: f64) -> f64 {
        let (w0, a) = (self.map.base_value(), self.map.deriv_polar(1.0, 0.0));
        let p = self.p;
        if w0.norm() == 0.0 {
            // |ψ|^{p-2}|ψ'|² ≈ |a|^p ρ^{p-2}, against the weight ρ log(1/ρ)
            power_head(p, delta, a.norm().powf(p), 0.0)
        } else {
            let l = (1.0 / delta).ln();
            TAU * self.density(w0, a) * delta * delta * (2.0 * l + 1.0) / 4.0
        }
    }

    /// Integral over the hole, in polar coordinates `z = z₀ + s e^{iτ}`.
    fn hole_integral(&self, h: &Hole) -> Result<f64> {
        let p = self.p;
        let weight = |z: Complex64| -z.norm().ln();
        let ring = |s: f64, failed: &mut Option<Error>| -> f64 {
            let f = |t: f64| {
                let z = h.center + Complex64::from_polar(s, t);
                self.density(self.map.eval_unchecked(z), self.map.deriv_unchecked(z)) * weight(z)
            };
            match integrate(f, &[-PI, PI], QuadOptions::rel(ANGULAR_TOL)).into_result() {
                Ok(v) => s * v,
                Err(e) => {
                    failed.get_or_insert(e);
                    0.0
                }
            }
        };
        let delta = h.radius * 0.5f64.powi(HOLE_LEVELS);
        // |ψ|^{p-2}|ψ'|² ≈ |ψ'(z₀)|^p s^{p-2} near the zero
        let a = self.map.deriv_unchecked(h.center).norm().powf(p);
        let mut total = power_head(p, delta, 0.0, a * weight(h.center));
        for j in 0..HOLE_LEVELS {
            let (lo, hi) = (h.radius * 0.5f64.powi(j + 1), h.radius * 0.5f64.powi(j));
            let mut failed = None;
            total += Self::adaptive(|s| ring(s, &mut failed), &[lo, hi], None)?;
            if let Some(e) = failed {
                return Err(e);
            }
        }
        Ok(total)
    }

    /// Hole contribution to the disk `|z| < r`: all of it once `r` passes the
    /// zero itself.
    fn hole_part(&self, r: f64) -> Result<f64> {
        match &self.hole {
            Some(h) if r > h.center.norm() => self.hole_integral(h),
            _ => Ok(0.0),
        }
    }
}

/// Yamashita's area integral, with partial integrals over the disks
/// `|z| < 1 - 2^{-k}` classified by their growth.
pub fn yamashita_integral(m: &ConformalMap, p: f64) -> Result<YamashitaResult> {
    check_p(p)?;
    let area = AreaIntegrand::new(m, p);
    let hole = match &area.hole {
        Some(h) => area.hole_integral(h)?,
        None => 0.0,
    };
    let hole_at = |r: f64| if area.hole.is_some_and(|h| r > h.center.norm()) { hole } else { 0.0 };

    let delta = 0.5f64.powi(INNER_LEVELS);
    let mut total = area.head(delta);
    for j in (1..INNER_LEVELS).rev() {
        // ρ ∈ [2^{-j-1}, 2^{-j}]
        total += area.inner(0.5f64.powi(j + 1), 0.5f64.powi(j))?;
    }
    let mut partials = Vec::with_capacity(DYADIC_LEVELS);
    partials.push((0.5, total + hole_at(0.5)));
    for k in 2..=DYADIC_LEVELS as i32 {
        total += area.outer(0.5f64.powi(k), 0.5f64.powi(k - 1))?;
        let r = 1.0 - 0.5f64.powi(k);
        partials.push((r, total + hole_at(r)));
    }
    let total = partials[partials.len() - 1].1;
    let values: Vec<f64> = partials.iter().map(|x| x.1).collect();
    let (growth, threshold_exponent, verdict) = growth_verdict(p, &values);
    let diverges = verdict == Convergence::Diverges;
    let value = match &growth {
        _ if diverges => f64::INFINITY,
        Some(g) if g.increment_exponent < 0.0 => {
            let q = 2f64.powf(g.increment_exponent);
            let last = values[values.len() - 1] - values[values.len() - 2];
            total + last * q / (1.0 - q)
        }
        _ => total,
    };
    Ok(YamashitaResult {
        p,
        partials,
        value,
        diverges,
        growth,
        threshold_exponent,
        verdict,
        singular_origin: m.base_value().norm() == 0.0 && p < 2.0,
    })
}

/// Area integral over `|z| < r` for a single radius. When `ψ` vanishes at
/// some `z₀ ≠ 0`, the small disk around `z₀` counts in full once `r > |z₀|`.
pub fn yamashita_partial(m: &ConformalMap, p: f64, r: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument { name: "r", value: r });
    }
    let area = AreaIntegrand::new(m, p);
    let delta = 0.5f64.powi(INNER_LEVELS);
    if r <= delta {
        return Ok(area.head(r.max(f64::MIN_POSITIVE)));
    }
    let mut total = area.head(delta);
    let mut lo = delta;
    while lo < r.min(0.5) {
        let hi = (2.0 * lo).min(r).min(0.5);
        total += area.inner(lo, hi)?;
        lo = hi;
    }
    // dyadic gaps towards the boundary, matching the panels of the full integral
    let mut gap = 0.5;
    while 1.0 - gap < r {
        let next = (0.5 * gap).max(1.0 - r);
        total += area.outer(next, gap)?;
        gap = next;
    }
    Ok(total + area.hole_part(r)?)
}
