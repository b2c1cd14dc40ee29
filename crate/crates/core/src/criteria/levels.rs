//! Criteria built on the level sets `F_α`: the hyperbolic integral, the
//! harmonic-measure integral and the Hardy number estimate.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_traits::Float;

use super::{check_p, AlphaGrid, DEFAULT_MARGIN, TAIL_DECADES};
use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::fit::{classify, tail_fit, Convergence, TailFit};
use crate::hmeasure::{harmonic_measure_with, MeasureEstimate, WoSConfig};
use crate::levelset::dist_to_levelset;
use crate::maps::ConformalMap;

/// Default grid of the harmonic-measure criterion: every point costs a full
/// Monte Carlo run, and beyond `10^4` the measure drops below what `10^5`
/// walkers resolve.
pub const HARM_GRID_DEFAULT: AlphaGrid = AlphaGrid { alpha_min: 10.0, alpha_max: 1e4, points_per_decade: 4 };
/// Estimates with fewer absorbed walkers are left out of the tail fit.
pub const MIN_HITS: f64 = 10.0;
/// Hardy number fits with a larger RMS residual (in `log e^{-d}`) are inconclusive.
pub const HARDY_FIT_MAX_RESIDUAL: f64 = 0.1;
/// Relative uncertainty assigned to exact values in weighted fits.
const LOG_SIGMA_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub criterion: &'static str,
    pub p: f64,
    /// Trapezoid rule in `log α` over the grid.
    pub truncated_value: f64,
    /// Monte Carlo standard error of `truncated_value` (zero for deterministic criteria).
    pub truncated_sigma: f64,
    /// Bound `α_min^p / p` on the omitted segment `(0, α_min)`.
    pub head_budget: f64,
    /// Power-law extrapolation of the segment `(α_max, ∞)`; `+∞` unless `p < s`.
    pub tail_estimate: f64,
    pub tail_exponent: f64,
    pub fit_residual: f64,
    pub superpolynomial: bool,
    pub local_exponents: Vec<f64>,
    pub fit_alpha_lo: f64,
    pub fit_alpha_hi: f64,
    pub fit_points: usize,
    /// Grid points left out of the fit (empty level sets, unresolved or unreliable estimates).
    pub excluded: usize,
    pub verdict: Convergence,
}

/// `∫ α^p f(α) d(log α)` by the trapezoid rule; `log_terms[i] = p log α_i + log f(α_i)`.
fn log_trapezoid(alphas: &[f64], terms: &[f64]) -> f64 {
    alphas
        .windows(2)
        .zip(terms.windows(2))
        .map(|(a, t)| 0.5 * (a[1] / a[0]).ln() * (t[0] + t[1]))
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    criterion: &'static str,
    p: f64,
    alphas: &[f64],
    integrand: &[f64],
    sigma: f64,
    fit: Option<TailFit>,
    last_value: Option<(f64, f64)>,
    excluded: usize,
) -> CriterionResult {
    let exponent = fit.as_ref().map(|f| f.exponent);
    let verdict = classify(p, exponent, DEFAULT_MARGIN);
    let tail_estimate = match (exponent, last_value) {
        (Some(s), _) if s == f64::INFINITY => 0.0,
        (Some(s), Some((a, v))) if s > p => a.powf(p) * v / (s - p),
        _ => f64::INFINITY,
    };
    let fit = fit.unwrap_or(TailFit {
        exponent: f64::NAN,
        residual: f64::NAN,
        local_exponents: Vec::new(),
        superpolynomial: false,
        alpha_lo: f64::NAN,
        alpha_hi: f64::NAN,
        n_points: 0,
    });
    CriterionResult {
        criterion,
        p,
        truncated_value: log_trapezoid(alphas, integrand),
        truncated_sigma: sigma,
        head_budget: alphas[0].powf(p) / p,
        tail_estimate,
        tail_exponent: fit.exponent,
        fit_residual: fit.residual,
        superpolynomial: fit.superpolynomial,
        local_exponents: fit.local_exponents,
        fit_alpha_lo: fit.alpha_lo,
        fit_alpha_hi: fit.alpha_hi,
        fit_points: fit.n_points,
        excluded,
        verdict,
    }
}

/// `d_𝔻(0, F_α)` on a grid, `None` where the level set is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelProfile {
    pub alphas: Vec<f64>,
    pub distances: Vec<Option<f64>>,
}

impl LevelProfile {
    pub fn compute<E: Executor + ?Sized>(m: &ConformalMap, grid: &AlphaGrid, exec: &E) -> Result<Self> {
        grid.validate()?;
        let alphas = grid.values();
        let distances = exec
            .map(alphas.len(), |i| match dist_to_levelset(m, alphas[i]) {
                Ok((d, _)) => Ok(Some(d.value())),
                Err(Error::EmptyLevelSet { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(LevelProfile { alphas, distances })
    }

    /// `e^{-d}`, zero for empty level sets.
    pub fn exp_neg(&self) -> Vec<f64> {
        self.distances.iter().map(|d| d.map_or(0.0, |d| (-d).exp())).collect()
    }

    pub fn tail_fit(&self) -> Option<TailFit> {
        tail_fit(&self.alphas, &self.exp_neg(), None, TAIL_DECADES)
    }

    pub fn criterion(&self, p: f64) -> Result<CriterionResult> {
        check_p(p)?;
        let integrand: Vec<f64> = self
            .alphas
            .iter()
            .zip(&self.distances)
            .map(|(a, d)| d.map_or(0.0, |d| (p * a.ln() - d).exp()))
            .collect();
        let excluded = self.distances.iter().filter(|d| d.is_none()).count();
        let last = self
            .alphas
            .iter()
            .zip(&self.distances)
            .rev()
            .find_map(|(&a, d)| d.map(|d| (a, (-d).exp())).filter(|x| x.1 > 0.0));
        Ok(assemble("hyp", p, &self.alphas, &integrand, 0.0, self.tail_fit(), last, excluded))
    }
}

/// Tail of `∫₀^∞ α^{p-1} e^{-d_𝔻(0, F_α)} dα` on `grid`.
pub fn hyp_criterion(m: &ConformalMap, p: f64, grid: &AlphaGrid) -> Result<CriterionResult> {
    check_p(p)?;
    LevelProfile::compute(m, grid, &Serial)?.criterion(p)
}

/// Walk-on-spheres estimates of `ω_𝔻(0, F_α)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmProfile {
    pub alphas: Vec<f64>,
    pub estimates: Vec<MeasureEstimate>,
}

impl HarmProfile {
    pub fn compute<E: Executor + ?Sized>(m: &ConformalMap, grid: &AlphaGrid, cfg: &WoSConfig, exec: &E) -> Result<Self> {
        grid.validate()?;
        let alphas = grid.values();
        let estimates = alphas.iter().map(|&a| harmonic_measure_with(m, a, cfg, exec)).collect::<Result<Vec<_>>>()?;
        Ok(HarmProfile { alphas, estimates })
    }

    fn usable(e: &MeasureEstimate) -> bool {
        !e.unreliable && !e.degenerate && e.value * e.n_walkers as f64 >= MIN_HITS
    }

    pub fn tail_fit(&self) -> Option<TailFit> {
        let (mut alphas, mut values, mut log_sigmas) = (Vec::new(), Vec::new(), Vec::new());
        for (a, e) in self.alphas.iter().zip(&self.estimates) {
            if Self::usable(e) {
                alphas.push(*a);
                values.push(e.value);
                log_sigmas.push((e.std_error / e.value).max(LOG_SIGMA_FLOOR));
            }
        }
        tail_fit(&alphas, &values, Some(&log_sigmas), TAIL_DECADES)
    }

    pub fn criterion(&self, p: f64) -> Result<CriterionResult> {
        check_p(p)?;
        let integrand: Vec<f64> = self.alphas.iter().zip(&self.estimates).map(|(a, e)| a.powf(p) * e.value).collect();
        // standard error of the trapezoid sum, from independent estimates
        let n = self.alphas.len();
        let var: f64 = (0..n)
            .map(|i| {
                let left = if i > 0 { (self.alphas[i] / self.alphas[i - 1]).ln() } else { 0.0 };
                let right = if i + 1 < n { (self.alphas[i + 1] / self.alphas[i]).ln() } else { 0.0 };
                let w = 0.5 * (left + right) * self.alphas[i].powf(p);
                (w * self.estimates[i].std_error).powi(2)
            })
            .sum();
        let excluded = self.estimates.iter().filter(|e| !Self::usable(e)).count();
        let last = self
            .alphas
            .iter()
            .zip(&self.estimates)
            .rev()
            .find(|(_, e)| Self::usable(e))
            .map(|(&a, e)| (a, e.value));
        Ok(assemble("harm", p, &self.alphas, &integrand, var.sqrt(), self.tail_fit(), last, excluded))
    }
}

/// Tail of `∫₀^∞ α^{p-1} ω_𝔻(0, F_α) dα` on `grid`, Monte Carlo uncertainty
/// entering the fit as weights.
pub fn harm_criterion(m: &ConformalMap, p: f64, grid: &AlphaGrid, cfg: &WoSConfig) -> Result<CriterionResult> {
    harm_criterion_with(m, p, grid, cfg, &Serial)
}

pub fn harm_criterion_with<E: Executor + ?Sized>(
    m: &ConformalMap,
    p: f64,
    grid: &AlphaGrid,
    cfg: &WoSConfig,
    exec: &E,
) -> Result<CriterionResult> {
    check_p(p)?;
    HarmProfile::compute(m, grid, cfg, exec)?.criterion(p)
}

/// The hyperbolic integral bounded by the harmonic-measure one:
/// `I_hyp ≤ (π/2)(I_harm + 3σ)` on a common grid.
pub fn inequality_chain_holds(hyp: &CriterionResult, harm: &CriterionResult) -> bool {
    hyp.truncated_value <= FRAC_PI_2 * (harm.truncated_value + 3.0 * harm.truncated_sigma)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardyNumberEstimate {
    /// Fitted decay exponent of `e^{-d(0, F_α)}`, `+∞` for superpolynomial decay.
    pub value: f64,
    pub fit: Option<TailFit>,
    pub inconclusive: bool,
}

/// `sup {p : ψ ∈ H^p}` read off the decay of `e^{-d_𝔻(0, F_α)}`.
pub fn hardy_number_estimate(m: &ConformalMap, grid: &AlphaGrid) -> Result<HardyNumberEstimate> {
    hardy_number_estimate_with(m, grid, &Serial)
}

pub fn hardy_number_estimate_with<E: Executor + ?Sized>(
    m: &ConformalMap,
    grid: &AlphaGrid,
    exec: &E,
) -> Result<HardyNumberEstimate> {
    Ok(LevelProfile::compute(m, grid, exec)?.hardy_number())
}

impl LevelProfile {
    pub fn hardy_number(&self) -> HardyNumberEstimate {
        let fit = self.tail_fit();
        let (value, inconclusive) = match &fit {
            Some(f) if f.superpolynomial => (f64::INFINITY, false),
            Some(f) => (f.exponent, !(f.residual <= HARDY_FIT_MAX_RESIDUAL)),
            None => (f64::NAN, true),
        };
        HardyNumberEstimate { value, fit, inconclusive }
    }
}
