//! Catalog of explicit conformal maps of the unit disk onto unbounded simply
//! connected domains.
//!
//! | key         | ψ(z)                       | image                         | Hardy number |
//! |-------------|----------------------------|-------------------------------|--------------|
//! | `halfplane` | `(1+z)/(1-z)`              | right half-plane              | 1            |
//! | `sector:β`  | `((1+z)/(1-z))^β`, β∈(0,2] | sector of opening `βπ`        | 1/β          |
//! | `strip`     | `log((1+z)/(1-z))`         | strip `|Im w| < π/2`          | ∞            |
//! | `koebe`     | `z/(1-z)²`                 | ℂ minus `(-∞, -1/4]`          | 1/2          |
//!
//! Any entry may be precomposed with a disk automorphism using the suffix
//! `@φ,a_re,a_im` (e.g. `koebe@0.5,0.2,-0.1`); the image and the Hardy number
//! do not change. All branches are principal.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hypgeo::Automorphism;

/// Evaluators refuse points with `|z| >= 1 - BOUNDARY_GUARD`.
pub const BOUNDARY_GUARD: f64 = 1e-15;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapKind {
    HalfPlane,
    Sector { beta: f64 },
    Strip,
    Koebe,
}

/// `log(1 + u)` without cancellation for small `u`.
fn ln_1p(u: Complex64) -> Complex64 {
    Complex64::new(0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p(), u.im.atan2(1.0 + u.re))
}

impl MapKind {
    pub fn key(&self) -> &'static str {
        match self {
            MapKind::HalfPlane => "halfplane",
            MapKind::Sector { .. } => "sector",
            MapKind::Strip => "strip",
            MapKind::Koebe => "koebe",
        }
    }

    /// `ψ` from `z` and a separately supplied `1 - z`, so that callers near
    /// `z = 1` can pass an accurate difference.
    fn eval_with(&self, z: Complex64, one_minus_z: Complex64) -> Complex64 {
        match *self {
            MapKind::HalfPlane => (ONE + z) / one_minus_z,
            MapKind::Sector { beta } => (((ONE + z) / one_minus_z).ln() * beta).exp(),
            // (1 + z)/(1 - z) = 1 + 2z/(1 - z), kept accurate near the zero at z = 0
            MapKind::Strip => ln_1p(2.0 * z / one_minus_z),
            MapKind::Koebe => z / (one_minus_z * one_minus_z),
        }
    }

    /// `log |ψ|` from `z` and `log|1 - z|`, `arg(1 - z)`.
    fn log_modulus_with(&self, z: Complex64, log_abs_omz: f64, arg_omz: f64) -> f64 {
        let opz = ONE + z;
        let log_h = opz.norm().ln() - log_abs_omz;
        match *self {
            MapKind::HalfPlane => log_h,
            MapKind::Sector { beta } => beta * log_h,
            MapKind::Strip if z.norm() < 0.5 => self.eval_with(z, ONE - z).norm().ln(),
            MapKind::Strip => Complex64::new(log_h, opz.arg() - arg_omz).norm().ln(),
            MapKind::Koebe => z.norm().ln() - 2.0 * log_abs_omz,
        }
    }

    fn deriv(&self, z: Complex64) -> Complex64 {
        self.deriv_with(z, ONE - z)
    }

    fn deriv_with(&self, z: Complex64, omz: Complex64) -> Complex64 {
        match *self {
            MapKind::HalfPlane => 2.0 / (omz * omz),
            MapKind::Sector { beta } => {
                self.eval_with(z, omz) * (2.0 * beta) / (omz * (ONE + z))
            }
            MapKind::Strip => 2.0 / (omz * (ONE + z)),
            MapKind::Koebe => (ONE + z) / (omz * omz * omz),
        }
    }

    fn in_image(&self, w: Complex64) -> bool {
        if !(w.re.is_finite() && w.im.is_finite()) {
            return false;
        }
        match *self {
            MapKind::HalfPlane => w.re > 0.0,
            MapKind::Sector { beta } => w != Complex64::new(0.0, 0.0) && w.arg().abs() < beta * FRAC_PI_2,
            MapKind::Strip => w.im.abs() < FRAC_PI_2,
            MapKind::Koebe => !(w.im == 0.0 && w.re <= -0.25),
        }
    }

    fn inverse(&self, w: Complex64) -> Result<Complex64> {
        if !self.in_image(w) {
            return Err(Error::OutsideImage { re: w.re, im: w.im });
        }
        let from_halfplane = |u: Complex64| (u - ONE) / (u + ONE);
        Ok(match *self {
            MapKind::HalfPlane => from_halfplane(w),
            MapKind::Sector { beta } => from_halfplane((w.ln() / beta).exp()),
            MapKind::Strip => (w * 0.5).tanh(),
            MapKind::Koebe => from_halfplane((ONE + w * 4.0).sqrt()),
        })
    }

    fn hardy_number(&self) -> f64 {
        match *self {
            MapKind::HalfPlane => 1.0,
            MapKind::Sector { beta } => 1.0 / beta,
            MapKind::Strip => f64::INFINITY,
            MapKind::Koebe => 0.5,
        }
    }

    /// Angles `φ ∈ (-π, π]` at which the circle `|w| = α` meets the image
    /// boundary.
    fn circle_breakpoints(&self, alpha: f64) -> Vec<f64> {
        match *self {
            MapKind::HalfPlane => vec![-FRAC_PI_2, FRAC_PI_2],
            MapKind::Sector { beta } if beta >= 2.0 => vec![PI],
            MapKind::Sector { beta } => vec![-beta * FRAC_PI_2, beta * FRAC_PI_2],
            MapKind::Strip if alpha > FRAC_PI_2 => {
                let a = (FRAC_PI_2 / alpha).asin();
                vec![-PI + a, -a, a, PI - a]
            }
            MapKind::Strip => Vec::new(),
            MapKind::Koebe if alpha > 0.25 => vec![PI],
            MapKind::Koebe => Vec::new(),
        }
    }
}

/// A catalog conformal map `ψ: 𝔻 → D`, optionally precomposed with a disk
/// automorphism. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMap {
    kind: MapKind,
    pre: Option<Automorphism>,
}

impl ConformalMap {
    pub fn new(kind: MapKind) -> Result<Self> {
        if let MapKind::Sector { beta } = kind {
            if !(beta > 0.0 && beta <= 2.0) {
                return Err(Error::ParameterRange { map: "sector", value: beta });
            }
        }
        Ok(ConformalMap { kind, pre: None })
    }

    /// `ψ ∘ T`.
    pub fn precompose(mut self, t: Automorphism) -> Self {
        self.pre = Some(t);
        self
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn automorphism(&self) -> Option<Automorphism> {
        self.pre
    }

    pub fn name(&self) -> &'static str {
        self.kind.key()
    }

    pub fn params(&self) -> Vec<f64> {
        match self.kind {
            MapKind::Sector { beta } => vec![beta],
            _ => Vec::new(),
        }
    }

    /// Catalog Hardy number; `f64::INFINITY` for the strip.
    pub fn known_hardy_number(&self) -> Option<f64> {
        Some(self.kind.hardy_number())
    }

    pub fn has_inverse(&self) -> bool {
        true
    }

    fn guard(z: Complex64) -> Result<()> {
        if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 - BOUNDARY_GUARD {
            Ok(())
        } else {
            Err(Error::OutsideDisk { re: z.re, im: z.im })
        }
    }

    fn inner(&self, z: Complex64) -> Complex64 {
        match &self.pre {
            Some(t) => t.apply(z),
            None => z,
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Self::guard(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let u = self.inner(z);
        self.kind.eval_with(u, ONE - u)
    }

    pub fn deriv(&self, z: Complex64) -> Result<Complex64> {
        Self::guard(z)?;
        Ok(self.deriv_unchecked(z))
    }

    pub(crate) fn deriv_unchecked(&self, z: Complex64) -> Complex64 {
        match &self.pre {
            Some(t) => self.kind.deriv(t.apply(z)) * t.derivative(z),
            None => self.kind.deriv(z),
        }
    }

    pub fn inverse(&self, w: Complex64) -> Result<Complex64> {
        let u = self.kind.inverse(w)?;
        Ok(match &self.pre {
            Some(t) => t.invert(u),
            None => u,
        })
    }

    pub fn in_image(&self, w: Complex64) -> bool {
        self.kind.in_image(w)
    }

    /// `ψ(0)`.
    pub fn base_value(&self) -> Complex64 {
        self.eval_unchecked(Complex64::new(0.0, 0.0))
    }

    fn polar_parts(&self, gap: f64, theta: f64) -> (Complex64, Complex64) {
        let (sin, cos) = theta.sin_cos();
        let unit = Complex64::new(cos, sin);
        let z = unit * (1.0 - gap);
        match &self.pre {
            Some(t) => {
                let u = t.apply(z);
                (u, ONE - u)
            }
            None if gap >= 0.5 => (z, ONE - z),
            None => {
                // 1 - (1 - s)e^{iθ} = (1 - e^{iθ}) + s e^{iθ}
                let half = 0.5 * theta;
                let one_minus_unit = Complex64::new(2.0 * half.sin().powi(2), -sin);
                (z, one_minus_unit + unit * gap)
            }
        }
    }

    /// `ψ((1 - gap) e^{iθ})`, accurate for gaps far below machine epsilon.
    pub fn eval_polar(&self, gap: f64, theta: f64) -> Complex64 {
        let (z, omz) = self.polar_parts(gap, theta);
        self.kind.eval_with(z, omz)
    }

    /// `ψ'((1 - gap) e^{iθ})`, accurate near the boundary like [`Self::eval_polar`].
    pub fn deriv_polar(&self, gap: f64, theta: f64) -> Complex64 {
        let (u, omu) = self.polar_parts(gap, theta);
        let d = self.kind.deriv_with(u, omu);
        match &self.pre {
            Some(t) => {
                let (sin, cos) = theta.sin_cos();
                d * t.derivative(Complex64::new(cos, sin) * (1.0 - gap))
            }
            None => d,
        }
    }

    /// The zero of `ψ` inside the disk, if any.
    pub fn interior_zero(&self) -> Option<Complex64> {
        match self.kind {
            MapKind::Strip | MapKind::Koebe => Some(match &self.pre {
                Some(t) => t.invert(Complex64::new(0.0, 0.0)),
                None => Complex64::new(0.0, 0.0),
            }),
            MapKind::HalfPlane | MapKind::Sector { .. } => None,
        }
    }

    /// `log |ψ((1 - s) e^{iθ})|` for `s = e^{log_gap}`. The gap may lie far
    /// below the smallest positive double; `1 - z` is then assembled in
    /// logarithmic scale.
    pub fn log_modulus_at_log_gap(&self, log_gap: f64, theta: f64) -> f64 {
        let (sin, cos) = theta.sin_cos();
        let unit = Complex64::new(cos, sin);
        let gap = log_gap.exp();
        if let Some(t) = &self.pre {
            let u = t.apply(unit * (1.0 - gap));
            let omz = ONE - u;
            return self.kind.log_modulus_with(u, omz.norm().ln(), omz.arg());
        }
        let z = unit * (1.0 - gap);
        // 1 - z = (1 - e^{iθ}) + s e^{iθ}, rescaled by e^{-m}
        let half = 0.5 * theta;
        let a = Complex64::new(2.0 * half.sin().powi(2), -sin);
        let log_a = a.norm().ln();
        let m = log_a.max(log_gap);
        let scaled_a = if log_a == f64::NEG_INFINITY { Complex64::new(0.0, 0.0) } else { a * (-m).exp() };
        let c = scaled_a + unit * (log_gap - m).exp();
        self.kind.log_modulus_with(z, m + c.norm().ln(), c.arg())
    }

    /// Angles on the unit circle where `|ψ|` blows up or vanishes.
    pub fn boundary_singularities(&self) -> Vec<f64> {
        let base = [ONE, -ONE];
        let mut out: Vec<f64> = base
            .iter()
            .map(|&u| match &self.pre {
                Some(t) => t.invert(u).arg(),
                None => u.arg(),
            })
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Radii `α` at which the circle `|w| = α` starts or stops meeting the
    /// image boundary.
    pub fn critical_radii(&self) -> Vec<f64> {
        match self.kind {
            MapKind::Strip => vec![FRAC_PI_2],
            MapKind::Koebe => vec![0.25],
            MapKind::HalfPlane | MapKind::Sector { .. } => Vec::new(),
        }
    }

    /// Angles at which the circle `|w| = α` crosses the image boundary.
    pub fn circle_breakpoints(&self, alpha: f64) -> Vec<f64> {
        self.kind.circle_breakpoints(alpha)
    }
}

impl fmt::Display for ConformalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.key())?;
        if let MapKind::Sector { beta } = self.kind {
            write!(f, ":{beta}")?;
        }
        if let Some(t) = &self.pre {
            write!(f, "@{},{},{}", t.rotation, t.center.re, t.center.im)?;
        }
        Ok(())
    }
}

impl core::str::FromStr for ConformalMap {
    type Err = Error;

    /// Parses `name`, `name:param` or either followed by `@φ,a_re,a_im`.
    fn from_str(spec: &str) -> Result<Self> {
        let (head, pre) = match spec.split_once('@') {
            Some((h, p)) => (h, Some(p)),
            None => (spec, None),
        };
        let (name, params) = match head.split_once(':') {
            Some((n, p)) => (n, parse_list(p).ok_or_else(|| Error::UnknownMap(spec.to_string()))?),
            None => (head, Vec::new()),
        };
        let map = catalog_get(name.trim(), &params)?;
        match pre {
            None => Ok(map),
            Some(p) => match parse_list(p).as_deref() {
                Some(&[phi, re, im]) => {
                    Ok(map.precompose(Automorphism::new(phi, Complex64::new(re, im))?))
                }
                _ => Err(Error::UnknownMap(spec.to_string())),
            },
        }
    }
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse::<f64>().ok()).collect()
}

pub fn catalog_get(name: &str, params: &[f64]) -> Result<ConformalMap> {
    let expect = |n: usize, map: &'static str| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::ParameterRange { map, value: params.len() as f64 })
        }
    };
    match name {
        "halfplane" => {
            expect(0, "halfplane")?;
            ConformalMap::new(MapKind::HalfPlane)
        }
        "sector" => {
            expect(1, "sector")?;
            ConformalMap::new(MapKind::Sector { beta: params[0] })
        }
        "strip" => {
            expect(0, "strip")?;
            ConformalMap::new(MapKind::Strip)
        }
        "koebe" => {
            expect(0, "koebe")?;
            ConformalMap::new(MapKind::Koebe)
        }
        other => Err(Error::UnknownMap(other.to_string())),
    }
}

/// One row of the catalog listing.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub syntax: &'static str,
    pub formula: &'static str,
    pub image: &'static str,
    pub hardy_number: &'static str,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            key: "halfplane",
            syntax: "halfplane",
            formula: "(1+z)/(1-z)",
            image: "right half-plane",
            hardy_number: "1",
        },
        CatalogEntry {
            key: "sector",
            syntax: "sector:<beta>, 0 < beta <= 2",
            formula: "((1+z)/(1-z))^beta",
            image: "sector |arg w| < beta*pi/2",
            hardy_number: "1/beta",
        },
        CatalogEntry {
            key: "strip",
            syntax: "strip",
            formula: "log((1+z)/(1-z))",
            image: "strip |Im w| < pi/2",
            hardy_number: "infinity",
        },
        CatalogEntry {
            key: "koebe",
            syntax: "koebe",
            formula: "z/(1-z)^2",
            image: "plane minus (-inf, -1/4]",
            hardy_number: "1/2",
        },
    ]
}

/// The maps used throughout the cross-checks, in a fixed order.
pub fn standard_maps() -> Vec<ConformalMap> {
    ["halfplane", "sector:0.5", "sector:1", "sector:2", "strip", "koebe"]
        .iter()
        .map(|s| s.parse().expect("catalog spec"))
        .collect()
}
