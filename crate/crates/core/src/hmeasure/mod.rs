//! Harmonic measure `ω_𝔻(0, F_α)` by walk-on-spheres.
//!
//! A walker starts at the origin and jumps to a uniform point on the largest
//! circle around its position that stays clear of both `F_α` and `∂𝔻`. It is
//! absorbed once it is within `ε` of either; the estimate is the fraction
//! absorbed on `F_α`.
//!
//! Two ways of bounding the distance to `F_α` are available:
//!
//! * [`DistanceModel::Polyline`]: exact distance to a polyline through 2048
//!   ray samples of the level set.
//! * [`DistanceModel::Distortion`]: a lower bound from the growth theorem for
//!   univalent functions applied to `ψ` on the disk `B(z, 1 - |z|)`. It needs
//!   no sampling and resolves level sets much smaller than the ray spacing.
//!
//! [`DistanceModel::Auto`] uses the polyline whenever the level set stays at
//! least [`POLYLINE_MIN_GAP`] away from the unit circle.

mod polyline;

pub use polyline::{Polyline, Segment, CLOSE_TO_CIRCLE, LINK_MAX};

use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::levelset::{dist_to_levelset, sample_levelset, LevelPoint};
use crate::maps::ConformalMap;
use crate::rng::BlockRng;

pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_MAX_STEPS: u64 = 10_000;
pub const DEFAULT_WALKERS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Walkers per independently seeded block.
pub const BLOCK_SIZE: u64 = 1024;
/// Largest tolerated share of walkers that run out of steps.
pub const TIMEOUT_SHARE: f64 = 1e-3;
/// Rays used for the polyline model.
pub const POLYLINE_RAYS: usize = 2048;
/// Minimal boundary gap `1 - r_α` for which [`DistanceModel::Auto`] picks the polyline.
pub const POLYLINE_MIN_GAP: f64 = 0.1;
/// The absorption shell never exceeds this fraction of `1 - r_α`.
pub const SHELL_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceModel {
    #[default]
    Auto,
    Polyline,
    Distortion,
}

impl DistanceModel {
    pub fn as_str(self) -> &'static str {
        match self {
            DistanceModel::Auto => "auto",
            DistanceModel::Polyline => "polyline",
            DistanceModel::Distortion => "distortion",
        }
    }
}

impl core::str::FromStr for DistanceModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(DistanceModel::Auto),
            "polyline" => Ok(DistanceModel::Polyline),
            "distortion" => Ok(DistanceModel::Distortion),
            _ => Err(Error::InvalidArgument { name: "distance model", value: f64::NAN }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WoSConfig {
    /// Absorption shell width.
    pub epsilon: f64,
    pub max_steps: u64,
    pub n_walkers: u64,
    pub seed: u64,
    pub model: DistanceModel,
}

impl Default for WoSConfig {
    fn default() -> Self {
        WoSConfig {
            epsilon: DEFAULT_EPSILON,
            max_steps: DEFAULT_MAX_STEPS,
            n_walkers: DEFAULT_WALKERS,
            seed: DEFAULT_SEED,
            model: DistanceModel::Auto,
        }
    }
}

impl WoSConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1e-6..=1e-2).contains(&self.epsilon) {
            return Err(Error::InvalidArgument { name: "epsilon", value: self.epsilon });
        }
        if self.n_walkers < 1000 {
            return Err(Error::InvalidArgument { name: "n_walkers", value: self.n_walkers as f64 });
        }
        if self.max_steps < 1000 {
            return Err(Error::InvalidArgument { name: "max_steps", value: self.max_steps as f64 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_walkers: u64,
    pub n_timeouts: u64,
    /// Too many walkers ran out of steps.
    pub unreliable: bool,
    /// The origin lies within the absorption shell of `F_α`.
    pub degenerate: bool,
    /// Shell width actually used.
    pub epsilon: f64,
    pub model: DistanceModel,
}

impl MeasureEstimate {
    fn from_tally(hits: u64, timeouts: u64, n: u64, epsilon: f64, model: DistanceModel) -> Self {
        let value = hits as f64 / n as f64;
        MeasureEstimate {
            value,
            std_error: (value * (1.0 - value) / n as f64).sqrt(),
            n_walkers: n,
            n_timeouts: timeouts,
            unreliable: timeouts as f64 > TIMEOUT_SHARE * n as f64,
            degenerate: false,
            epsilon,
            model,
        }
    }

    fn exact(value: f64, n: u64, epsilon: f64, model: DistanceModel, degenerate: bool) -> Self {
        MeasureEstimate {
            value,
            std_error: 0.0,
            n_walkers: n,
            n_timeouts: 0,
            unreliable: false,
            degenerate,
            epsilon,
            model,
        }
    }
}

/// Conservative distances to the two parts of the boundary of the walk domain.
trait Target: Sync {
    /// Radius of a disk around `z` free of `F_α` (capped at `cap`) and
    /// whether `z` is inside the absorption shell of `F_α`. When it is, the
    /// radius is the distance estimate used to break ties with `∂𝔻`.
    fn clearance(&self, z: Complex64, cap: f64, eps: f64) -> (f64, bool);
}

impl Target for Polyline {
    fn clearance(&self, z: Complex64, cap: f64, eps: f64) -> (f64, bool) {
        let d = self.distance_capped(z, cap);
        (d, d <= eps)
    }
}

struct Distortion<'a> {
    map: &'a ConformalMap,
    log_alpha: f64,
}

impl Target for Distortion<'_> {
    fn clearance(&self, z: Complex64, cap: f64, eps: f64) -> (f64, bool) {
        let w = self.map.eval_unchecked(z);
        let dw = self.map.deriv_unchecked(z).norm();
        // | |ψ| - α | in relative form stays accurate for huge α
        let gap = (w.norm().ln() - self.log_alpha).exp_m1().abs() * self.log_alpha.exp();
        if gap <= eps * dw {
            return (gap / dw, true);
        }
        let q = gap / (cap * dw);
        // largest t with t / (1 - t)^2 <= q
        let t = 2.0 * q / (2.0 * q + 1.0 + (4.0 * q + 1.0).sqrt());
        (cap * t, false)
    }
}

/// Outcome of a single walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    Level,
    Circle,
    Timeout,
}

fn walk<T: Target + ?Sized>(target: &T, eps: f64, max_steps: u64, rng: &mut BlockRng) -> Fate {
    let mut z = Complex64::new(0.0, 0.0);
    for _ in 0..max_steps {
        let to_circle = 1.0 - z.norm();
        let (radius, on_level) = target.clearance(z, to_circle.max(0.0), eps);
        let near_circle = to_circle <= eps;
        match (on_level, near_circle) {
            (true, true) => return if radius < to_circle { Fate::Level } else { Fate::Circle },
            (true, false) => return Fate::Level,
            (false, true) => return Fate::Circle,
            (false, false) => {}
        }
        let (s, c) = (TAU * rng.uniform()).sin_cos();
        z += Complex64::new(c, s) * radius.min(to_circle);
    }
    Fate::Timeout
}

fn run<T, E>(target: &T, eps: f64, cfg: &WoSConfig, model: DistanceModel, exec: &E) -> MeasureEstimate
where
    T: Target + ?Sized,
    E: Executor + ?Sized,
{
    let n = cfg.n_walkers;
    let blocks = n.div_ceil(BLOCK_SIZE);
    let tallies = exec.map(blocks as usize, |b| {
        let b = b as u64;
        let mut rng = BlockRng::new(cfg.seed, b);
        let size = BLOCK_SIZE.min(n - b * BLOCK_SIZE);
        let (mut hits, mut timeouts) = (0u64, 0u64);
        for _ in 0..size {
            match walk(target, eps, cfg.max_steps, &mut rng) {
                Fate::Level => hits += 1,
                Fate::Circle => {}
                Fate::Timeout => timeouts += 1,
            }
        }
        (hits, timeouts)
    });
    let (hits, timeouts) = tallies.iter().fold((0, 0), |(h, t), &(a, b)| (h + a, t + b));
    MeasureEstimate::from_tally(hits, timeouts, n, eps, model)
}

/// Harmonic measure at the origin of the set enclosed by `poly`, with
/// absorption on the polyline and on the unit circle.
pub fn harmonic_measure_polyline<E: Executor + ?Sized>(poly: &Polyline, cfg: &WoSConfig, exec: &E) -> Result<MeasureEstimate> {
    cfg.validate()?;
    let model = DistanceModel::Polyline;
    if poly.is_empty() {
        return Ok(MeasureEstimate::exact(0.0, cfg.n_walkers, cfg.epsilon, model, false));
    }
    if poly.distance(Complex64::new(0.0, 0.0)) <= cfg.epsilon {
        return Ok(MeasureEstimate::exact(1.0, cfg.n_walkers, cfg.epsilon, model, true));
    }
    Ok(run(poly, cfg.epsilon, cfg, model, exec))
}

/// `ω_𝔻(0, F_α)` on the calling thread.
pub fn harmonic_measure(m: &ConformalMap, alpha: f64, cfg: &WoSConfig) -> Result<MeasureEstimate> {
    harmonic_measure_with(m, alpha, cfg, &Serial)
}

fn nearest_level_point(m: &ConformalMap, alpha: f64) -> Result<Option<LevelPoint>> {
    match dist_to_levelset(m, alpha) {
        Ok((_, p)) => Ok(Some(p)),
        Err(Error::EmptyLevelSet { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn harmonic_measure_with<E: Executor + ?Sized>(
    m: &ConformalMap,
    alpha: f64,
    cfg: &WoSConfig,
    exec: &E,
) -> Result<MeasureEstimate> {
    cfg.validate()?;
    let Some(nearest) = nearest_level_point(m, alpha)? else {
        return Ok(MeasureEstimate::exact(0.0, cfg.n_walkers, cfg.epsilon, cfg.model, false));
    };
    let gap = nearest.gap();
    let eps = cfg.epsilon.min(SHELL_FRACTION * gap);
    let model = match cfg.model {
        DistanceModel::Auto if gap >= POLYLINE_MIN_GAP => DistanceModel::Polyline,
        DistanceModel::Auto => DistanceModel::Distortion,
        other => other,
    };
    if nearest.radius() <= cfg.epsilon {
        return Ok(MeasureEstimate::exact(1.0, cfg.n_walkers, cfg.epsilon, model, true));
    }
    Ok(match model {
        DistanceModel::Polyline => {
            let sample = sample_levelset(m, alpha, POLYLINE_RAYS)?;
            let poly = Polyline::from_level_sample(m, &sample);
            run(&poly, eps, cfg, model, exec)
        }
        _ => {
            let target = Distortion { map: m, log_alpha: alpha.ln() };
            run(&target, eps, cfg, model, exec)
        }
    })
}

/// Comparison of `e^{-d_𝔻(0, F_α)}` with `(π/2)(ω̂ + 3σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeurlingReport {
    pub alpha: f64,
    pub distance: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs / lhs`.
    pub ratio: f64,
    pub pass: bool,
    pub estimate: MeasureEstimate,
}

pub fn beurling_check(m: &ConformalMap, alpha: f64, cfg: &WoSConfig) -> Result<BeurlingReport> {
    beurling_check_with(m, alpha, cfg, &Serial)
}

pub fn beurling_check_with<E: Executor + ?Sized>(
    m: &ConformalMap,
    alpha: f64,
    cfg: &WoSConfig,
    exec: &E,
) -> Result<BeurlingReport> {
    let (d, _) = dist_to_levelset(m, alpha)?;
    let estimate = harmonic_measure_with(m, alpha, cfg, exec)?;
    let lhs = d.exp_neg();
    let rhs = FRAC_PI_2 * (estimate.value + 3.0 * estimate.std_error);
    Ok(BeurlingReport { alpha, distance: d.value(), lhs, rhs, ratio: rhs / lhs, pass: lhs <= rhs, estimate })
}
