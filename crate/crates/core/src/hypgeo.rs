//! Hyperbolic distance and Green function of the unit disk.
//!
//! `d(z, w) = log((1 + t)/(1 - t))` with `t = |(z - w)/(1 - z w̄)|` and
//! `g(z, w) = log |(1 - z w̄)/(z - w)|`, tied together by
//! `g = log((e^d + 1)/(e^d - 1))`.

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::rng::BlockRng;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64::new(0.0, 0.0));

    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
            Ok(DiskPoint(z))
        } else {
            Err(Error::OutsideDisk { re: z.re, im: z.im })
        }
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        DiskPoint::new(z)
    }
}

/// Hyperbolic length, always `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HypDistance(f64);

impl HypDistance {
    pub fn new(value: f64) -> Result<Self> {
        if value >= 0.0 {
            Ok(HypDistance(value))
        } else {
            Err(Error::InvalidArgument { name: "distance", value })
        }
    }

    /// Distance from the origin to a point at Euclidean distance
    /// `s = e^{log_gap}` from the unit circle: `log(2 - s) - log s`. Stays
    /// finite and accurate when `s` underflows.
    pub fn from_log_boundary_gap(log_gap: f64) -> Self {
        debug_assert!(log_gap <= 0.0);
        HypDistance(((2.0 - log_gap.exp()).ln() - log_gap).max(0.0))
    }

    pub fn from_origin_radius(r: f64) -> Self {
        debug_assert!((0.0..1.0).contains(&r));
        HypDistance(2.0 * libm::atanh(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `e^{-d}`, the quantity entering the membership integral.
    pub fn exp_neg(self) -> f64 {
        (-self.0).exp()
    }
}

/// Pseudo-hyperbolic distance `|(z - w)/(1 - z w̄)|` together with
/// `1 - t²`, computed without cancellation.
fn pseudo_distance(z: Complex64, w: Complex64) -> (f64, f64) {
    let den = (Complex64::new(1.0, 0.0) - z * w.conj()).norm();
    let t = (z - w).norm() / den;
    let rz = z.norm();
    let rw = w.norm();
    let one_minus_t2 = (1.0 - rz) * (1.0 + rz) * (1.0 - rw) * (1.0 + rw) / (den * den);
    (t.min(1.0), one_minus_t2)
}

pub fn hyp_dist(z: DiskPoint, w: DiskPoint) -> HypDistance {
    let (t, one_minus_t2) = pseudo_distance(z.0, w.0);
    let d = if t < 0.5 {
        2.0 * libm::atanh(t)
    } else {
        2.0 * t.ln_1p() - one_minus_t2.ln()
    };
    HypDistance(d.max(0.0))
}

pub fn green_disk(z: DiskPoint, w: DiskPoint) -> Result<f64> {
    let diff = (z.0 - w.0).norm();
    if diff == 0.0 {
        return Err(Error::Pole);
    }
    let (t, one_minus_t2) = pseudo_distance(z.0, w.0);
    if t < 0.7 {
        let den = (Complex64::new(1.0, 0.0) - z.0 * w.0.conj()).norm();
        Ok((den.ln() - diff.ln()).max(0.0))
    } else {
        // -log t = -log(1 - (1 - t²))/2, free of the cancellation between the logs
        Ok(-0.5 * (-one_minus_t2).ln_1p())
    }
}

/// Largest relative gap between [`green_disk`] and [`green_via_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenIdentityCheck {
    pub n_pairs: usize,
    pub seed: u64,
    pub max_relative_deviation: f64,
    pub worst: (Complex64, Complex64),
}

/// Compare the two Green formulas on `n` pairs drawn uniformly from the disk.
pub fn green_identity_check(n: usize, seed: u64) -> Result<GreenIdentityCheck> {
    if n == 0 {
        return Err(Error::InvalidArgument { name: "n", value: 0.0 });
    }
    let mut rng = BlockRng::new(seed, 0);
    let mut point = || {
        let r = rng.uniform().sqrt();
        Complex64::from_polar(r, core::f64::consts::TAU * rng.uniform())
    };
    let mut out = GreenIdentityCheck { n_pairs: n, seed, max_relative_deviation: 0.0, worst: (Complex64::default(), Complex64::default()) };
    for _ in 0..n {
        let (z, w) = (point(), point());
        let (a, b) = (DiskPoint::new(z)?, DiskPoint::new(w)?);
        if z == w {
            continue;
        }
        let g = green_disk(a, b)?;
        let h = green_via_distance(hyp_dist(a, b))?;
        let dev = (g - h).abs() / g.max(h);
        if dev > out.max_relative_deviation {
            out.max_relative_deviation = dev;
            out.worst = (z, w);
        }
    }
    Ok(out)
}

/// `log((e^d + 1)/(e^d - 1)) = 2 artanh(e^{-d})`.
pub fn green_via_distance(d: HypDistance) -> Result<f64> {
    let d = d.0;
    if d == 0.0 {
        return Err(Error::Pole);
    }
    if d > 1.0 {
        Ok(2.0 * libm::atanh((-d).exp()))
    } else {
        // 1 - e^{-d} without cancellation
        let m = -(-d).exp_m1();
        Ok((2.0 - m).ln() - m.ln())
    }
}

/// Smallest `C` with `log((e^x + 1)/(e^x - 1)) <= C e^{-x}` for all `x >= x0`.
///
/// With `t = e^{-x}` the ratio is `2 artanh(t)/t`, increasing in `t`, so the
/// supremum sits at `x = x0`.
pub fn bound_constant(x0: f64) -> Result<f64> {
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(Error::InvalidArgument { name: "x0", value: x0 });
    }
    let t = (-x0).exp();
    if t < 1e-6 {
        Ok(2.0 * (1.0 + t * t / 3.0))
    } else {
        Ok(2.0 * libm::atanh(t) / t)
    }
}

/// Disk automorphism `z ↦ e^{iφ} (z - a)/(1 - ā z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Automorphism {
    pub rotation: f64,
    pub center: Complex64,
}

impl Automorphism {
    pub fn new(rotation: f64, center: Complex64) -> Result<Self> {
        DiskPoint::new(center)?;
        if !rotation.is_finite() {
            return Err(Error::InvalidArgument { name: "rotation", value: rotation });
        }
        Ok(Automorphism { rotation, center })
    }

    fn unit(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let a = self.center;
        self.unit() * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let a = self.center;
        let den = Complex64::new(1.0, 0.0) - a.conj() * z;
        self.unit() * (1.0 - a.norm_sqr()) / (den * den)
    }

    /// `T⁻¹(u) = (e^{-iφ} u + a)/(1 + ā e^{-iφ} u)`.
    pub fn invert(&self, u: Complex64) -> Complex64 {
        let a = self.center;
        let v = self.unit().conj() * u;
        (v + a) / (Complex64::new(1.0, 0.0) + a.conj() * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_parts(re, im).unwrap()
    }

    /// Σ 2 t^{2k+1}/(2k+1) summed until the terms vanish.
    fn artanh_series_twice(t: f64) -> f64 {
        let mut sum = 0.0;
        let mut k = 0;
        loop {
            let term = 2.0 * t.powi(2 * k + 1) / (2 * k + 1) as f64;
            if term < 1e-30 {
                return sum;
            }
            sum += term;
            k += 1;
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hyp_dist(p(0.0, 0.0), p(0.0, 0.0)).value(), 0.0);
        assert!((hyp_dist(p(0.0, 0.0), p(0.5, 0.0)).value() - 3f64.ln()).abs() < 1e-15);
        // t = |1|/|1 + 0.25| = 0.8
        let z = Complex64::new(0.5, 0.0);
        let w = Complex64::new(-0.5, 0.0);
        let t = ((z - w) / (Complex64::new(1.0, 0.0) - z * w.conj())).norm();
        assert!((t - 0.8).abs() < 1e-15);
        let d = hyp_dist(p(0.5, 0.0), p(-0.5, 0.0)).value();
        assert!((d - 9f64.ln()).abs() < 1e-14, "{d}");
    }

    #[test]
    fn identity_on_random_pairs() {
        let c = green_identity_check(10_000, 7).unwrap();
        assert!(c.max_relative_deviation <= 1e-12, "{c:?}");
        assert_eq!(c, green_identity_check(10_000, 7).unwrap());
        assert!(green_identity_check(0, 7).is_err());
    }

    #[test]
    fn outside_disk_is_rejected() {
        assert!(matches!(
            DiskPoint::from_parts(1.0, 0.0),
            Err(Error::OutsideDisk { .. })
        ));
        assert!(DiskPoint::from_parts(0.8, 0.8).is_err());
        assert!(DiskPoint::from_parts(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn green_examples() {
        let g = green_disk(p(0.0, 0.0), p(0.5, 0.0)).unwrap();
        assert!((g - 2f64.ln()).abs() < 1e-15);
        for k in 0..16 {
            let th = k as f64 * 0.4;
            let g = green_disk(DiskPoint::ORIGIN, p(0.25 * th.cos(), 0.25 * th.sin())).unwrap();
            assert!((g - 4f64.ln()).abs() < 1e-14);
        }
        assert_eq!(green_disk(p(0.3, 0.0), p(0.3, 0.0)), Err(Error::Pole));
    }

    #[test]
    fn green_via_distance_examples() {
        let g = green_via_distance(HypDistance(3f64.ln())).unwrap();
        assert!((g - 2f64.ln()).abs() < 1e-15);
        for r in [1e-6, 0.01, 0.3, 0.5, 0.9, 0.999, 1.0 - 1e-9] {
            let d = HypDistance::from_origin_radius(r);
            let g = green_via_distance(d).unwrap();
            assert!((g - (1.0 / r).ln()).abs() <= 1e-12 * (1.0 + (1.0 / r).ln()), "r={r}");
        }
        let g10 = green_via_distance(HypDistance(10.0)).unwrap();
        let oracle = artanh_series_twice((-10f64).exp());
        assert!(((g10 - oracle) / oracle).abs() < 1e-14, "{g10} vs {oracle}");
        assert!((g10 - 9.0799859587e-5).abs() < 1e-14);
        assert_eq!(green_via_distance(HypDistance(0.0)), Err(Error::Pole));
    }

    /// Supremum of the ratio over a dense grid, evaluated with the stable
    /// `log1p(2/(e^x - 1))` form.
    fn envelope_grid_oracle(x0: f64) -> f64 {
        let step = 1e-5;
        let n = (40.0 / step) as usize;
        (0..=n)
            .map(|i| {
                let x = x0 + i as f64 * step;
                (2.0 / x.exp_m1()).ln_1p() * x.exp()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn bound_constant_matches_grid_oracle() {
        let c = bound_constant(1.0).unwrap();
        let oracle = envelope_grid_oracle(1.0);
        assert!((c - oracle).abs() < 1e-9, "{c} vs {oracle}");
        assert!((c - 2.0983418656).abs() < 1e-9);
        assert!((bound_constant(50.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((bound_constant(800.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(bound_constant(0.0).is_err());
        assert!(bound_constant(-1.0).is_err());
    }

    #[test]
    fn envelope_is_sharp() {
        let lhs = |x: f64| (2.0 / x.exp_m1()).ln_1p();
        for x in [1.0, 2.0, 5.0, 10.0] {
            assert!(lhs(x) <= 2.0984 * (-x).exp());
        }
        assert!(lhs(1.0) > 2.0 * (-1f64).exp());
        let x0 = 1.0;
        let c = bound_constant(x0).unwrap();
        for i in 0..20_000 {
            let x = x0 + i as f64 * 1e-3;
            assert!(lhs(x) <= c * (-x).exp() * (1.0 + 1e-14));
        }
        assert!(lhs(x0) > (c - 1e-6) * (-x0).exp());
    }

    #[test]
    fn automorphism_roundtrip() {
        let t = Automorphism::new(0.7, Complex64::new(0.3, -0.2)).unwrap();
        let z = Complex64::new(-0.1, 0.55);
        assert!((t.invert(t.apply(z)) - z).norm() < 1e-15);
        assert!(t.apply(t.center).norm() < 1e-15);
        assert!(Automorphism::new(0.0, Complex64::new(1.0, 0.0)).is_err());
    }

    fn disk_point() -> impl Strategy<Value = Complex64> {
        (0.0f64..0.999, 0.0f64..core::f64::consts::TAU)
            .prop_map(|(r, th)| Complex64::from_polar(r, th))
    }

    proptest! {
        #[test]
        fn green_identity(z in disk_point(), w in disk_point()) {
            prop_assume!((z - w).norm() > 1e-6);
            let (z, w) = (DiskPoint::new(z).unwrap(), DiskPoint::new(w).unwrap());
            let g = green_disk(z, w).unwrap();
            let h = green_via_distance(hyp_dist(z, w)).unwrap();
            prop_assert!((g - h).abs() <= 1e-12 * (1.0 + g), "{} vs {}", g, h);
        }

        #[test]
        fn mobius_invariance(z in disk_point(), w in disk_point(), a in disk_point(), phi in 0.0f64..6.3) {
            let t = Automorphism::new(phi, a * 0.9).unwrap();
            let d0 = hyp_dist(DiskPoint::new(z).unwrap(), DiskPoint::new(w).unwrap()).value();
            let tz = DiskPoint::new(t.apply(z));
            let tw = DiskPoint::new(t.apply(w));
            // images can round onto the circle when the inputs hug it
            prop_assume!(tz.is_ok() && tw.is_ok());
            let d1 = hyp_dist(tz.unwrap(), tw.unwrap()).value();
            prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + d0) + 1e-9 * d0 * (d0 > 10.0) as u8 as f64,
                "{} vs {}", d0, d1);
        }

        #[test]
        fn distance_is_symmetric(z in disk_point(), w in disk_point()) {
            let (z, w) = (DiskPoint::new(z).unwrap(), DiskPoint::new(w).unwrap());
            prop_assert!((hyp_dist(z, w).value() - hyp_dist(w, z).value()).abs() < 1e-12);
        }

        #[test]
        fn green_via_distance_decreasing(a in 1e-6f64..40.0, b in 1e-6f64..40.0) {
            prop_assume!(a < b * (1.0 - 1e-9));
            let ga = green_via_distance(HypDistance(a)).unwrap();
            let gb = green_via_distance(HypDistance(b)).unwrap();
            prop_assert!(ga > gb);
        }
    }
}
