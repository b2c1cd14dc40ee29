//! Membership criteria for `ψ ∈ H^p(𝔻)` and their comparison.
//!
//! * [`hardy_norm_direct`]: growth of the integral means as `r → 1`.
//! * [`yamashita_integral`]: growth of the area integral over `|z| < r`.
//! * [`hyp_criterion`]: tail of `∫ α^{p-1} e^{-d_𝔻(0, F_α)} dα`.
//! * [`harm_criterion`]: tail of `∫ α^{p-1} ω_𝔻(0, F_α) dα`.
//!
//! Improper integrals are decided by the exponent `s` of a power-law fit to
//! the integrand's tail: `p < s - margin` converges, `p > s + margin`
//! diverges, anything else is inconclusive.

mod green;
mod levels;
mod norms;

use alloc::vec::Vec;

use num_traits::Float;

pub use green::{
    change_of_variables_check, change_of_variables_check_at, envelope_check, green_angular, ChangeOfVariables, EnvelopePoint, ALPHA_MAX_DEFAULT,
};
pub use levels::{
    harm_criterion, harm_criterion_with, hardy_number_estimate, hardy_number_estimate_with, hyp_criterion,
    inequality_chain_holds, CriterionResult, HarmProfile,
    HardyNumberEstimate, LevelProfile, HARM_GRID_DEFAULT, MIN_HITS,
};
pub use norms::{
    default_radius_grid, hardy_mean, hardy_mean_gap, hardy_norm_direct, yamashita_integral, yamashita_partial,
    NormGrowth, YamashitaResult, DYADIC_LEVELS, GROWTH_TAIL,
};

use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::fit::Convergence;
use crate::hmeasure::WoSConfig;
use crate::maps::ConformalMap;

/// Half-width of the undecided band around the fitted exponent.
pub const DEFAULT_MARGIN: f64 = 0.05;
/// Decades of the grid used by tail fits.
pub const TAIL_DECADES: usize = 3;

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument { name: "p", value: p })
    }
}

/// Geometric grid `α_min · 10^{i / points_per_decade}` up to `α_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub points_per_decade: usize,
}

impl Default for AlphaGrid {
    fn default() -> Self {
        AlphaGrid { alpha_min: 1e-2, alpha_max: 1e6, points_per_decade: 16 }
    }
}

impl AlphaGrid {
    pub fn new(alpha_min: f64, alpha_max: f64, points_per_decade: usize) -> Result<Self> {
        let g = AlphaGrid { alpha_min, alpha_max, points_per_decade };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_min > 0.0 && self.alpha_min.is_finite()) {
            return Err(Error::InvalidArgument { name: "alpha_min", value: self.alpha_min });
        }
        if !(self.alpha_max.is_finite() && self.decades() >= TAIL_DECADES as f64 - 1e-9) {
            return Err(Error::InvalidArgument { name: "alpha_max", value: self.alpha_max });
        }
        if self.points_per_decade == 0 {
            return Err(Error::InvalidArgument { name: "points_per_decade", value: 0.0 });
        }
        Ok(())
    }

    pub fn decades(&self) -> f64 {
        (self.alpha_max / self.alpha_min).log10()
    }

    pub fn values(&self) -> Vec<f64> {
        let n = (self.decades() * self.points_per_decade as f64 + 1e-9).floor() as usize;
        let step = 1.0 / self.points_per_decade as f64;
        (0..=n).map(|i| self.alpha_min * 10f64.powf(i as f64 * step)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    Member,
    NonMember,
    Inconclusive,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::Member => "member",
            Conclusion::NonMember => "non_member",
            Conclusion::Inconclusive => "inconclusive",
        }
    }
}

/// One criterion's contribution to a [`Verdict`].
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub criterion: &'static str,
    pub verdict: Convergence,
    /// Fitted tail exponent or growth threshold.
    pub exponent: f64,
    pub residual: f64,
    /// Truncated integral, extrapolated integral or last mean.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub p: f64,
    pub conclusion: Conclusion,
    pub evidence: Vec<Evidence>,
}

impl Verdict {
    fn from_evidence(p: f64, evidence: Vec<Evidence>) -> Self {
        let all = |c: Convergence| !evidence.is_empty() && evidence.iter().all(|e| e.verdict == c);
        let conclusion = if all(Convergence::Converges) {
            Conclusion::Member
        } else if all(Convergence::Diverges) {
            Conclusion::NonMember
        } else {
            Conclusion::Inconclusive
        };
        Verdict { p, conclusion, evidence }
    }

    pub fn get(&self, criterion: &str) -> Option<&Evidence> {
        self.evidence.iter().find(|e| e.criterion == criterion)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictOptions {
    pub grid: AlphaGrid,
    pub radii: Vec<f64>,
    /// Include the harmonic-measure criterion, on its own grid.
    pub harm: Option<(AlphaGrid, WoSConfig)>,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions { grid: AlphaGrid::default(), radii: default_radius_grid(), harm: None }
    }
}

/// The p-independent data behind the verdicts for one map, reusable across
/// exponents.
#[derive(Debug, Clone)]
pub struct MembershipAnalysis {
    pub map: ConformalMap,
    pub options: VerdictOptions,
    pub levels: LevelProfile,
    pub harm: Option<HarmProfile>,
}

impl MembershipAnalysis {
    pub fn new<E: Executor + ?Sized>(map: &ConformalMap, options: VerdictOptions, exec: &E) -> Result<Self> {
        let levels = LevelProfile::compute(map, &options.grid, exec)?;
        let harm = match &options.harm {
            Some((grid, cfg)) => Some(HarmProfile::compute(map, grid, cfg, exec)?),
            None => None,
        };
        Ok(MembershipAnalysis { map: map.clone(), options, levels, harm })
    }

    pub fn verdict(&self, p: f64) -> Result<Verdict> {
        check_p(p)?;
        let hyp = self.levels.criterion(p)?;
        let mut evidence = alloc::vec![Evidence {
            criterion: "hyp",
            verdict: hyp.verdict,
            exponent: hyp.tail_exponent,
            residual: hyp.fit_residual,
            value: hyp.truncated_value,
        }];
        let y = yamashita_integral(&self.map, p)?;
        evidence.push(Evidence {
            criterion: "yamashita",
            verdict: y.verdict,
            exponent: y.threshold_exponent,
            residual: y.growth.as_ref().map_or(f64::NAN, |g| g.residual),
            value: y.value,
        });
        let n = hardy_norm_direct(&self.map, p, &self.options.radii)?;
        evidence.push(Evidence {
            criterion: "direct",
            verdict: if n.nondecreasing { n.verdict } else { Convergence::Inconclusive },
            exponent: n.threshold_exponent,
            residual: n.growth.as_ref().map_or(f64::NAN, |g| g.residual),
            value: n.means.last().copied().unwrap_or(f64::NAN),
        });
        if let Some(h) = &self.harm {
            let c = h.criterion(p)?;
            evidence.push(Evidence {
                criterion: "harm",
                verdict: c.verdict,
                exponent: c.tail_exponent,
                residual: c.fit_residual,
                value: c.truncated_value,
            });
        }
        Ok(Verdict::from_evidence(p, evidence))
    }
}

/// Run every criterion for `(m, p)` and combine their verdicts.
pub fn membership_verdict(m: &ConformalMap, p: f64) -> Result<Verdict> {
    membership_verdict_with(m, p, VerdictOptions::default(), &Serial)
}

pub fn membership_verdict_with<E: Executor + ?Sized>(
    m: &ConformalMap,
    p: f64,
    options: VerdictOptions,
    exec: &E,
) -> Result<Verdict> {
    check_p(p)?;
    MembershipAnalysis::new(m, options, exec)?.verdict(p)
}
