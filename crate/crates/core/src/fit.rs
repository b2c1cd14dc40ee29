//! Log-log regressions used to turn finite samples into convergence verdicts.

use alloc::vec::Vec;

use num_traits::Float;

/// Weighted least-squares line `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Weighted RMS of the residuals.
    pub residual: f64,
    pub n: usize,
}

pub fn line_fit(xs: &[f64], ys: &[f64], weights: Option<&[f64]>) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let sw: f64 = (0..n).map(w).sum();
    let mx = (0..n).map(|i| w(i) * xs[i]).sum::<f64>() / sw;
    let my = (0..n).map(|i| w(i) * ys[i]).sum::<f64>() / sw;
    let sxx: f64 = (0..n).map(|i| w(i) * (xs[i] - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = (0..n).map(|i| w(i) * (xs[i] - mx) * (ys[i] - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = (0..n).map(|i| w(i) * (ys[i] - intercept - slope * xs[i]).powi(2)).sum();
    Some(LineFit { slope, intercept, residual: (ss / sw).sqrt(), n })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Converges,
    Diverges,
    Inconclusive,
}

impl Convergence {
    pub fn as_str(self) -> &'static str {
        match self {
            Convergence::Converges => "converges",
            Convergence::Diverges => "diverges",
            Convergence::Inconclusive => "inconclusive",
        }
    }
}

/// `∫^∞ α^{p-1} α^{-s} dα` converges iff `p < s`; decide with a margin.
pub fn classify(p: f64, exponent: Option<f64>, margin: f64) -> Convergence {
    match exponent {
        Some(s) if s == f64::INFINITY => Convergence::Converges,
        Some(s) if p < s - margin => Convergence::Converges,
        Some(s) if p > s + margin => Convergence::Diverges,
        _ => Convergence::Inconclusive,
    }
}

/// Decay of a positive profile `v(α) ≈ c α^{-s}` over its last decades.
#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    /// Fitted `s`; `+∞` when the decay is superpolynomial.
    pub exponent: f64,
    pub residual: f64,
    /// Decay rate fitted separately on each decade of the window, oldest first.
    pub local_exponents: Vec<f64>,
    pub superpolynomial: bool,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub n_points: usize,
}

/// Local slope increase per decade that marks superpolynomial decay.
pub const SUPERPOLY_SLOPE_JUMP: f64 = 0.5;

/// Fit the decay exponent of `values` (paired with increasing `alphas`) over
/// the `decades` decades that end at the largest α with a positive value.
/// `log_sigmas`, when given, are the standard errors of `ln v`.
pub fn tail_fit(alphas: &[f64], values: &[f64], log_sigmas: Option<&[f64]>, decades: usize) -> Option<TailFit> {
    let usable: Vec<usize> = (0..alphas.len())
        .filter(|&i| values[i] > 0.0 && values[i].is_finite() && log_sigmas.map_or(true, |s| s[i].is_finite()))
        .collect();
    let &last = usable.last()?;
    let alpha_hi = alphas[last];
    let alpha_lo = alpha_hi / 10f64.powi(decades as i32);
    let window: Vec<usize> = usable
        .into_iter()
        .filter(|&i| alphas[i] >= alpha_lo * (1.0 - 1e-12))
        .collect();
    if window.len() < 3 {
        return None;
    }
    let pick = |idx: &[usize]| -> (Vec<f64>, Vec<f64>, Option<Vec<f64>>) {
        let xs = idx.iter().map(|&i| alphas[i].ln()).collect();
        let ys = idx.iter().map(|&i| values[i].ln()).collect();
        let ws = log_sigmas.map(|s| idx.iter().map(|&i| 1.0 / s[i].max(1e-12).powi(2)).collect());
        (xs, ys, ws)
    };
    let (xs, ys, ws) = pick(&window);
    let overall = line_fit(&xs, &ys, ws.as_deref())?;

    let mut local_exponents = Vec::with_capacity(decades);
    for d in 0..decades {
        let lo = alpha_lo * 10f64.powi(d as i32) * (1.0 - 1e-12);
        let hi = alpha_lo * 10f64.powi(d as i32 + 1) * (1.0 + 1e-12);
        let idx: Vec<usize> = window.iter().copied().filter(|&i| alphas[i] >= lo && alphas[i] <= hi).collect();
        let (xs, ys, ws) = pick(&idx);
        if let Some(f) = line_fit(&xs, &ys, ws.as_deref()) {
            local_exponents.push(-f.slope);
        }
    }
    let superpolynomial = local_exponents.len() == decades
        && decades >= 2
        && local_exponents.windows(2).all(|w| w[1] - w[0] > SUPERPOLY_SLOPE_JUMP);
    Some(TailFit {
        exponent: if superpolynomial { f64::INFINITY } else { -overall.slope },
        residual: overall.residual,
        local_exponents,
        superpolynomial,
        alpha_lo: alphas[window[0]],
        alpha_hi,
        n_points: window.len(),
    })
}

/// Growth of a sequence of partial sums/means sampled at `1 - r = 2^{-k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    /// Exponent `e` in `Δ_k ∝ 2^{e k}`: negative for a convergent sequence,
    /// positive for power growth, zero for logarithmic growth.
    pub increment_exponent: f64,
    pub residual: f64,
    pub bounded: bool,
}

impl GrowthFit {
    /// Threshold exponent implied by the increments: for `|ψ| ≍ |1 - z|^{-1/h}`
    /// the increments scale with `e = p/h - 1`, so `h = p/(1 + e)`.
    pub fn threshold_exponent(&self, p: f64) -> f64 {
        let denom = 1.0 + self.increment_exponent;
        if denom <= 1e-3 {
            f64::INFINITY
        } else {
            p / denom
        }
    }
}

/// Fit the increments of `values[k]` over the last `tail` steps.
pub fn growth_fit(values: &[f64], tail: usize) -> Option<GrowthFit> {
    if values.len() < tail + 1 || tail < 3 {
        return None;
    }
    let start = values.len() - tail - 1;
    let mut xs = Vec::with_capacity(tail);
    let mut ys = Vec::with_capacity(tail);
    for k in start..values.len() - 1 {
        let inc = values[k + 1] - values[k];
        if inc > 0.0 {
            xs.push(k as f64);
            ys.push(inc.log2());
        }
    }
    let fit = line_fit(&xs, &ys, None)?;
    Some(GrowthFit {
        increment_exponent: fit.slope,
        residual: fit.residual,
        bounded: fit.slope < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let f = line_fit(&xs, &ys, None).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(f.residual < 1e-14);
        assert!(line_fit(&[1.0, 1.0], &[0.0, 1.0], None).is_none());
    }

    #[test]
    fn power_law_tail() {
        let alphas: Vec<f64> = (0..=64).map(|i| 10f64.powf(i as f64 / 16.0)).collect();
        let values: Vec<f64> = alphas.iter().map(|a| 3.0 * a.powf(-1.7)).collect();
        let t = tail_fit(&alphas, &values, None, 3).unwrap();
        assert!((t.exponent - 1.7).abs() < 1e-12);
        assert!(!t.superpolynomial);
        assert_eq!(t.local_exponents.len(), 3);
        assert_eq!(t.n_points, 49);
    }

    #[test]
    fn exponential_tail_is_superpolynomial() {
        let alphas: Vec<f64> = (0..=64).map(|i| 10f64.powf(-1.0 + i as f64 / 16.0)).collect();
        let values: Vec<f64> = alphas.iter().map(|a| (-a).exp()).collect();
        let t = tail_fit(&alphas, &values, None, 3).unwrap();
        assert!(t.superpolynomial, "{t:?}");
        assert_eq!(t.exponent, f64::INFINITY);
        // the window ends at the last representable value
        assert!(t.alpha_hi < 800.0);
    }

    #[test]
    fn verdicts() {
        assert_eq!(classify(0.5, Some(1.0), 0.05), Convergence::Converges);
        assert_eq!(classify(1.5, Some(1.0), 0.05), Convergence::Diverges);
        assert_eq!(classify(1.0, Some(1.02), 0.05), Convergence::Inconclusive);
        assert_eq!(classify(7.0, Some(f64::INFINITY), 0.05), Convergence::Converges);
        assert_eq!(classify(1.0, None, 0.05), Convergence::Inconclusive);
    }

    #[test]
    fn growth_of_geometric_partials() {
        // convergent: S_k = 1 - 2^{-k/2}
        let conv: Vec<f64> = (1..=24).map(|k| 1.0 - 2f64.powf(-0.5 * k as f64)).collect();
        let g = growth_fit(&conv, 8).unwrap();
        assert!((g.increment_exponent + 0.5).abs() < 1e-9 && g.bounded);
        assert!((g.threshold_exponent(1.0) - 2.0).abs() < 1e-8);
        // divergent: S_k = 2^{0.25 k}
        let div: Vec<f64> = (1..=24).map(|k| 2f64.powf(0.25 * k as f64)).collect();
        let g = growth_fit(&div, 8).unwrap();
        assert!((g.increment_exponent - 0.25).abs() < 1e-9 && !g.bounded);
        // logarithmic: exponent 0
        let log: Vec<f64> = (1..=24).map(|k| k as f64).collect();
        assert!(growth_fit(&log, 8).unwrap().increment_exponent.abs() < 1e-12);
    }
}
