//! Level sets `F_α = {z ∈ 𝔻 : |ψ(z)| = α}` and the distance `d_𝔻(0, F_α)`.
//!
//! `d_𝔻(0, z) = log((1 + |z|)/(1 - |z|))` grows with `|z|`, so the distance
//! from the origin to `F_α` is the distance to its point of smallest modulus.
//! That point is located by scanning rays from the origin for sign changes of
//! `log|ψ| - log α` and refining the best ray in angle.
//!
//! Positions along a ray are carried as `log(1 - r)`, the logarithm of the
//! gap to the unit circle. The catalog maps evaluate `log|ψ|` directly from
//! it, so level sets hugging the circle far below double precision in `r`
//! (the strip at `α = 10⁶` sits at `1 - r ≈ e^{-10⁶}`) are still resolved.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hypgeo::{DiskPoint, HypDistance};
use crate::maps::ConformalMap;

/// Smallest `log(1 - r)` examined by ray searches.
pub const LOG_GAP_FLOOR: f64 = -1e7;
/// Smallest `log(1 - r)` stored by [`sample_levelset`]; closer points round
/// onto the circle in double precision.
pub const SAMPLE_LOG_GAP_FLOOR: f64 = -34.5;
/// Accepted relative residual `||ψ(z)| - α| / α` of a level-set point.
pub const LEVEL_TOL: f64 = 1e-9;
pub const DEFAULT_RAYS: usize = 256;
/// Angular tolerance of the golden-section refinement.
pub const THETA_TOL: f64 = 1e-10;

const INNER_STEPS: usize = 32;
const HALVINGS: usize = 64;
const FAR_GROWTH: f64 = 1.1;
const MAX_BISECTIONS: usize = 400;

/// A point of `F_α` on the ray of angle `theta`, at distance
/// `s = e^{log_gap}` from the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPoint {
    pub theta: f64,
    pub log_gap: f64,
    /// `||ψ(z)| - α| / α`.
    pub residual: f64,
}

impl LevelPoint {
    /// `1 - r`; underflows to zero for the far tail of some maps.
    pub fn gap(&self) -> f64 {
        self.log_gap.exp()
    }

    pub fn radius(&self) -> f64 {
        1.0 - self.gap()
    }

    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(self.radius(), self.theta)
    }

    pub fn disk_point(&self) -> Result<DiskPoint> {
        DiskPoint::new(self.point())
    }

    /// `d_𝔻(0, z)`.
    pub fn distance_from_origin(&self) -> HypDistance {
        HypDistance::from_log_boundary_gap(self.log_gap)
    }

    /// `e^{-d_𝔻(0, z)} = (1 - r)/(1 + r)`; may underflow, see
    /// [`LevelPoint::distance_from_origin`] for the logarithm.
    pub fn exp_neg_distance(&self) -> f64 {
        let gap = self.gap();
        gap / (2.0 - gap)
    }
}

/// `log(1 - r)` grid of a ray: uniform in `r` on `[0, 1/2)`, halving the gap
/// down to `2^{-64}`, then geometric in `log(1 - r)`.
fn log_gap_grid(floor: f64) -> impl Iterator<Item = f64> {
    let inner = (0..INNER_STEPS).map(|i| (-(i as f64) / (2 * INNER_STEPS) as f64).ln_1p());
    let halving = (1..=HALVINGS).map(|j| -(j as f64) * core::f64::consts::LN_2);
    let start = -(HALVINGS as f64) * core::f64::consts::LN_2;
    let far = (1..).map(move |k| start * FAR_GROWTH.powi(k));
    inner.chain(halving).chain(far).take_while(move |&lg| lg >= floor)
}

struct Ray<'a> {
    map: &'a ConformalMap,
    log_alpha: f64,
    theta: f64,
}

impl Ray<'_> {
    fn level(&self, log_gap: f64) -> f64 {
        self.map.log_modulus_at_log_gap(log_gap, self.theta) - self.log_alpha
    }

    fn hit(&self, log_gap: f64, f: f64) -> LevelPoint {
        LevelPoint { theta: self.theta, log_gap, residual: f.exp_m1().abs() }
    }

    /// Refine a sign change between `hi > lo` (in `log(1 - r)`).
    fn bisect(&self, mut hi: f64, mut f_hi: f64, mut lo: f64) -> Result<LevelPoint> {
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (hi + lo);
            if !(mid < hi && mid > lo) || (hi - lo) <= 1e-15 * hi.abs().max(1.0) {
                let f_lo = self.level(lo);
                return Ok(if f_hi.abs() <= f_lo.abs() { self.hit(hi, f_hi) } else { self.hit(lo, f_lo) });
            }
            let f_mid = self.level(mid);
            if f_mid == 0.0 {
                return Ok(self.hit(mid, 0.0));
            }
            if (f_mid > 0.0) == (f_hi > 0.0) {
                hi = mid;
                f_hi = f_mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NoConvergence("level-set bisection"))
    }

    /// Walk the grid outward from the origin, reporting each crossing to
    /// `visit` until it returns `false` or the grid passes `stop_below`.
    fn scan<V>(&self, floor: f64, stop_below: f64, mut visit: V) -> Result<()>
    where
        V: FnMut(LevelPoint) -> bool,
    {
        let mut prev: Option<(f64, f64)> = None;
        for lg in log_gap_grid(floor) {
            let f = self.level(lg);
            if f.is_nan() {
                prev = None;
                continue;
            }
            // grid points already on F_α, e.g. rays lying inside the level set
            if f.abs() <= LEVEL_TOL {
                if !visit(self.hit(lg, f)) {
                    return Ok(());
                }
            } else if let Some((lg0, f0)) = prev {
                if f0.abs() > LEVEL_TOL && (f0 > 0.0) != (f > 0.0) && !visit(self.bisect(lg0, f0, lg)?) {
                    return Ok(());
                }
            }
            if lg < stop_below {
                return Ok(());
            }
            prev = Some((lg, f));
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument { name: "alpha", value: alpha })
    }
}

fn first_crossing(m: &ConformalMap, alpha: f64, theta: f64, stop_below: f64) -> Result<Option<LevelPoint>> {
    let ray = Ray { map: m, log_alpha: alpha.ln(), theta };
    let mut found = None;
    ray.scan(LOG_GAP_FLOOR, stop_below, |hit| {
        found = Some(hit);
        false
    })?;
    Ok(found)
}

/// Smallest `r` with `|ψ(r e^{iθ})| = α`, or `None` if the ray meets no
/// point of `F_α` before the gap floor.
pub fn level_radius_on_ray(m: &ConformalMap, alpha: f64, theta: f64) -> Result<Option<LevelPoint>> {
    check_alpha(alpha)?;
    first_crossing(m, alpha, theta, f64::NEG_INFINITY)
}

/// Point of `F_α` of minimal modulus.
pub fn min_modulus(m: &ConformalMap, alpha: f64, n_rays: usize) -> Result<LevelPoint> {
    check_alpha(alpha)?;
    if n_rays < 64 {
        return Err(Error::InvalidArgument { name: "n_rays", value: n_rays as f64 });
    }
    let step = TAU / n_rays as f64;
    let mut best: Option<LevelPoint> = None;
    for theta in ray_angles(m, n_rays) {
        // later rays can only improve on the best gap found so far
        let stop = best.map_or(f64::NEG_INFINITY, |b| b.log_gap);
        if let Some(hit) = first_crossing(m, alpha, theta, stop)? {
            if best.map_or(true, |b| hit.log_gap > b.log_gap) {
                best = Some(hit);
            }
        }
    }
    let best = best.ok_or(Error::EmptyLevelSet { alpha })?;
    if best.log_gap >= 0.0 {
        return Ok(best);
    }
    let refined = golden_refine(m, alpha, best.theta - step, best.theta + step)?;
    Ok(match refined {
        Some(r) if r.log_gap > best.log_gap => r,
        _ => best,
    })
}

/// `n` equally spaced angles followed by the singular boundary angles of
/// `ψ`, around which level sets can be far smaller than the ray spacing.
fn ray_angles(m: &ConformalMap, n: usize) -> impl Iterator<Item = f64> {
    let step = TAU / n as f64;
    (0..n).map(move |i| -PI + i as f64 * step).chain(m.boundary_singularities())
}

/// Golden-section maximisation of the first-crossing gap over `[a, b]`.
fn golden_refine(m: &ConformalMap, alpha: f64, mut a: f64, mut b: f64) -> Result<Option<LevelPoint>> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let eval = |t: f64| -> Result<(f64, Option<LevelPoint>)> {
        let hit = first_crossing(m, alpha, t, f64::NEG_INFINITY)?;
        Ok((hit.map_or(f64::NEG_INFINITY, |h| h.log_gap), hit))
    };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    while b - a > THETA_TOL {
        if fc.0 == f64::NEG_INFINITY && fd.0 == f64::NEG_INFINITY {
            // both probes miss a level curve narrower than the bracket; the
            // seed ray sits in the middle
            let (c0, d0) = (c, d);
            a = c0;
            b = d0;
            c = b - inv_phi * (b - a);
            d = a + inv_phi * (b - a);
            fc = eval(c)?;
            fd = eval(d)?;
        } else if fc.0 >= fd.0 {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d)?;
        }
    }
    Ok(if fc.0 >= fd.0 { fc.1 } else { fd.1 })
}

/// `d_𝔻(0, F_α)` together with the minimising point.
pub fn dist_to_levelset(m: &ConformalMap, alpha: f64) -> Result<(HypDistance, LevelPoint)> {
    dist_to_levelset_with(m, alpha, DEFAULT_RAYS)
}

pub fn dist_to_levelset_with(m: &ConformalMap, alpha: f64, n_rays: usize) -> Result<(HypDistance, LevelPoint)> {
    let p = min_modulus(m, alpha, n_rays)?;
    Ok((p.distance_from_origin(), p))
}

/// Ray samples of `F_α`: every crossing on each of `n` rays.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetSample {
    pub alpha: f64,
    pub points: Vec<LevelPoint>,
    /// Minimum modulus over the stored points.
    pub r_min: f64,
}

impl LevelSetSample {
    /// Largest residual over the stored points.
    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    pub fn min_point(&self) -> Option<&LevelPoint> {
        self.points.iter().max_by(|a, b| a.log_gap.total_cmp(&b.log_gap))
    }
}

pub fn sample_levelset(m: &ConformalMap, alpha: f64, n: usize) -> Result<LevelSetSample> {
    check_alpha(alpha)?;
    if n < 256 {
        return Err(Error::InvalidArgument { name: "n", value: n as f64 });
    }
    let mut points = Vec::new();
    for theta in ray_angles(m, n) {
        let ray = Ray { map: m, log_alpha: alpha.ln(), theta };
        ray.scan(SAMPLE_LOG_GAP_FLOOR, f64::NEG_INFINITY, |hit| {
            if hit.residual <= LEVEL_TOL {
                points.push(hit);
            }
            true
        })?;
    }
    if points.is_empty() {
        return Err(Error::EmptyLevelSet { alpha });
    }
    let r_min = points.iter().map(|p| p.radius()).fold(f64::INFINITY, f64::min);
    Ok(LevelSetSample { alpha, points, r_min })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::hyp_dist;
    use crate::maps::catalog_get;
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    fn map(s: &str) -> ConformalMap {
        s.parse().unwrap()
    }

    /// Brute-force minimum of |z| over F_α, sweeping the image circle
    /// `|w| = α` and pulling it back with the closed-form inverse.
    fn inverse_sweep_min_modulus(m: &ConformalMap, alpha: f64, n: usize) -> f64 {
        (0..n)
            .filter_map(|i| {
                let phi = -PI + (i as f64 + 0.5) * TAU / n as f64;
                m.inverse(Complex64::from_polar(alpha, phi)).ok().map(|z| z.norm())
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn ray_examples() {
        let h = map("halfplane");
        let hit = level_radius_on_ray(&h, 3.0, 0.0).unwrap().unwrap();
        assert!((hit.radius() - 0.5).abs() < 1e-12);
        // (1+it)/(1-it) has modulus 1: the whole ray lies in F_1
        let hit = level_radius_on_ray(&h, 1.0, FRAC_PI_2).unwrap().unwrap();
        assert_eq!(hit.radius(), 0.0);
        let k = map("koebe");
        let hit = level_radius_on_ray(&k, 2.0, 0.0).unwrap().unwrap();
        assert!((hit.radius() - 0.5).abs() < 1e-12);
        // no crossing on the ray pointing away from the singularity
        assert!(level_radius_on_ray(&h, 3.0, PI).unwrap().is_none());
        assert!(level_radius_on_ray(&h, 0.0, 0.0).is_err());
    }

    #[test]
    fn min_modulus_matches_inverse_sweep() {
        let cases = [("halfplane", 3.0), ("sector:0.5", 5.0), ("sector:2", 5.0), ("koebe", 2.0), ("strip", 4.0)];
        for (name, alpha) in cases {
            let m = map(name);
            let r = min_modulus(&m, alpha, 256).unwrap().radius();
            let oracle = inverse_sweep_min_modulus(&m, alpha, 1_000_000);
            assert!(r <= oracle + 1e-12 && oracle - r < 1e-9, "{name}: {r} vs {oracle}");
        }
        let r = min_modulus(&map("halfplane"), 3.0, 256).unwrap().radius();
        assert!((r - 0.5).abs() < 1e-12);
        let r = min_modulus(&map("koebe"), 2.0, 256).unwrap().radius();
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sector_closed_form() {
        for beta in [0.5, 2.0] {
            let m = catalog_get("sector", &[beta]).unwrap();
            for alpha in [2.0, 10.0, 100.0] {
                let a = f64::powf(alpha, 1.0 / beta);
                let expected = (a - 1.0) / (a + 1.0);
                let r = min_modulus(&m, alpha, 256).unwrap().radius();
                assert!((r - expected).abs() < 1e-12, "beta {beta} alpha {alpha}");
                let oracle = inverse_sweep_min_modulus(&m, alpha, 1_000_000);
                assert!((oracle - expected).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn distance_examples() {
        let h = map("halfplane");
        let (d, _) = dist_to_levelset(&h, 3.0).unwrap();
        assert!((d.value() - 3f64.ln()).abs() < 1e-11);
        let (d, _) = dist_to_levelset(&h, 1.0).unwrap();
        assert_eq!(d.value(), 0.0);
        let (_, p) = dist_to_levelset(&map("sector:0.5"), 100.0).unwrap();
        assert!((p.exp_neg_distance() / 1e-4 - 1.0).abs() < 1e-9);
        assert!(min_modulus(&h, 3.0, 32).is_err());
    }

    #[test]
    fn halfplane_law_and_sector_scaling() {
        let h = map("halfplane");
        for alpha in [2.0, 5.0, 10.0, 100.0, 1e4] {
            let (d, _) = dist_to_levelset(&h, alpha).unwrap();
            assert!((d.exp_neg() * alpha - 1.0).abs() < 1e-6, "alpha {alpha}");
        }
        for beta in [0.5, 1.0, 2.0] {
            let m = catalog_get("sector", &[beta]).unwrap();
            for alpha in [10.0, 100.0] {
                let (_, p) = dist_to_levelset(&m, alpha).unwrap();
                let expected = f64::powf(alpha, -1.0 / beta);
                assert!((p.exp_neg_distance() / expected - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn reaches_far_below_double_resolution_of_r() {
        // e^{-d} = α^{-2} = 1e-24: r = 1 - 2e-24 is not representable
        let (_, p) = dist_to_levelset(&map("sector:0.5"), 1e12).unwrap();
        assert!((p.exp_neg_distance() / 1e-24 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn reduction_identity() {
        for name in ["halfplane", "koebe", "sector:2", "strip"] {
            let m = map(name);
            // keep 1 - r well above double resolution
            for alpha in [2.0, 7.0, 20.0] {
                let (d, p) = dist_to_levelset(&m, alpha).unwrap();
                let direct = hyp_dist(DiskPoint::ORIGIN, p.disk_point().unwrap());
                // the stored point is rounded to double, costing ~ε/(1 - r) in d
                let tol = 1e-9 + 4.0 * f64::EPSILON / p.gap();
                assert!((d.value() - direct.value()).abs() < tol, "{name} {alpha}");
            }
        }
    }

    #[test]
    fn divergence_of_distance() {
        for m in crate::maps::standard_maps() {
            let (d3, _) = dist_to_levelset(&m, 1e3).unwrap();
            let (d6, _) = dist_to_levelset(&m, 1e6).unwrap();
            assert!(d6.value() > d3.value() + 1.0, "{m}");
        }
    }

    #[test]
    fn ray_count_independence() {
        for name in ["halfplane", "sector:0.5", "sector:2", "koebe"] {
            let m = map(name);
            for alpha in [2.0, 10.0, 100.0] {
                let a = min_modulus(&m, alpha, 256).unwrap().radius();
                let b = min_modulus(&m, alpha, 512).unwrap().radius();
                assert!((a - b).abs() <= 1e-8, "{name} {alpha}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn precomposed_map_has_same_distance_law() {
        let t = crate::hypgeo::Automorphism::new(0.9, Complex64::new(0.0, 0.0)).unwrap();
        let m = map("halfplane").precompose(t);
        let (d, _) = dist_to_levelset(&m, 10.0).unwrap();
        assert!((d.exp_neg() * 10.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sample_examples() {
        let h = map("halfplane");
        let s = sample_levelset(&h, 3.0, 512).unwrap();
        assert!(s.max_residual() <= 1e-9);
        for p in &s.points {
            let w = h.eval(p.point()).unwrap();
            assert!((w.norm() - 3.0).abs() <= 3e-9);
        }
        assert!((s.r_min - 0.5).abs() < 1e-9);

        let st = map("strip");
        let s = sample_levelset(&st, PI, 512).unwrap();
        assert!(!s.points.is_empty());
        for p in &s.points {
            let w = st.eval(p.point()).unwrap();
            assert!((w.norm() - PI).abs() <= PI * 1e-9);
        }
        assert!(sample_levelset(&h, 3.0, 100).is_err());
    }

    /// Sign changes of `|ψ| - α` along a ray, counted on a dense uniform grid.
    fn brute_force_crossings(m: &ConformalMap, alpha: f64, theta: f64) -> usize {
        let n = 100_000;
        let vals: Vec<f64> = (0..n)
            .map(|i| m.eval(Complex64::from_polar(i as f64 / n as f64 * (1.0 - 1e-9), theta)).unwrap().norm() - alpha)
            .collect();
        vals.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count()
    }

    #[test]
    fn sample_keeps_every_crossing() {
        // shifted Koebe map whose level curve folds back across rays from 0
        let m = map("koebe@0,0,0.7");
        let n = 256;
        let s = sample_levelset(&m, 0.3, n).unwrap();
        let mut per_ray = vec![0usize; n];
        for p in &s.points {
            let slot = (p.theta + PI) / (TAU / n as f64);
            // skip the extra rays through the singular boundary points
            if (slot - slot.round()).abs() < 1e-9 {
                per_ray[slot.round() as usize % n] += 1;
            }
        }
        let doubles: Vec<usize> = (0..n).filter(|&i| per_ray[i] >= 2).collect();
        assert!(!doubles.is_empty());
        for &i in &doubles {
            let theta = -PI + i as f64 * TAU / n as f64;
            assert_eq!(brute_force_crossings(&m, 0.3, theta), per_ray[i]);
        }
        // the first crossing is the one reported for the ray
        let i = doubles[0];
        let first = level_radius_on_ray(&m, 0.3, -PI + i as f64 * TAU / n as f64).unwrap().unwrap();
        let smallest = s.points.iter().filter(|p| (p.theta - first.theta).abs() < 1e-12).map(|p| p.radius()).fold(1.0, f64::min);
        assert!((first.radius() - smallest).abs() < 1e-12);
    }

    #[test]
    fn strip_distance_grows_linearly() {
        // min modulus on θ = 0: log((1+r)/(1-r)) = α, i.e. d_𝔻(0, F_α) = α
        let m = map("strip");
        for alpha in [5.0, 50.0, 1e3, 1e6] {
            let (d, _) = dist_to_levelset(&m, alpha).unwrap();
            assert!((d.value() / alpha - 1.0).abs() < 1e-9, "{alpha}: {}", d.value());
        }
    }

    #[test]
    fn empty_level_set_is_signalled() {
        // the strip reaches modulus 1e8 only beyond the gap floor
        let m = map("strip");
        assert_eq!(min_modulus(&m, 1e8, 64), Err(Error::EmptyLevelSet { alpha: 1e8 }));
    }
}
