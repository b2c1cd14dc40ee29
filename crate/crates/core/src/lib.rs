//! Numerical checks of Hardy-space membership for conformal maps of the unit
//! disk onto unbounded simply connected domains.
//!
//! For a conformal map `ψ: 𝔻 → D` and `α > 0` let `F_α = {z ∈ 𝔻 : |ψ(z)| = α}`.
//! The crate evaluates four quantities whose finiteness characterises
//! `ψ ∈ H^p(𝔻)`:
//!
//! * the circle means `∫ |ψ(re^{iθ})|^p dθ` as `r → 1` ([`criteria::hardy_norm_direct`]),
//! * the area integral `∬ |ψ|^{p-2} |ψ'|² log(1/|z|) dA` ([`criteria::yamashita_integral`]),
//! * `∫ α^{p-1} ω_𝔻(0, F_α) dα` with the harmonic measure estimated by
//!   walk-on-spheres ([`criteria::harm_criterion`]),
//! * `∫ α^{p-1} e^{-d_𝔻(0, F_α)} dα` ([`criteria::hyp_criterion`]),
//!
//! and compares their verdicts on a catalog of maps with known Hardy numbers.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel evaluation is
//! pluggable through [`exec::Executor`]; the default [`exec::Serial`] runs
//! everything on the calling thread and every other executor must return
//! bit-identical results.
#![no_std]
#![warn(missing_debug_implementations)]
// Float methods come from num-traits in no_std builds and are inherent
// whenever another crate in the build enables std for num-traits.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod criteria;
pub mod error;
pub mod exec;
pub mod fit;
pub mod hmeasure;
pub mod hypgeo;
pub mod levelset;
pub mod maps;
pub mod quad;
pub mod rng;

pub use error::{Error, Result};
pub use exec::{Executor, Serial};
pub use hypgeo::{bound_constant, green_disk, green_identity_check, green_via_distance, hyp_dist, DiskPoint, HypDistance};
pub use maps::{catalog_get, ConformalMap, MapKind};

pub use num_complex::Complex64;

/// Crate version, embedded into every CLI artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
