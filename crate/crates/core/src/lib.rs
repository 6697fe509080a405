//! Gauge-invariant elastic metrics on the shape space of surfaces decorated
//! with a closed curve.
//!
//! A flag `(C, Σ)` is represented by a sampled embedding of the sphere whose
//! equator row traces the curve. Tangent vectors to shape space are pairs
//! `(h₁, h₂)` of normal speeds: `h₁` along the in-surface normal of the curve,
//! `h₂` along the surface normal. The six-weight metric
//!
//! ```text
//! G(h₁,h₂) = a₁∫_C (h₁κ_g + h₂κ_n)² dℓ + b₁∫_C (D_s h₁ − h₂τ_g)² dℓ + c₁∫_C (D_s h₂ + h₁τ_g)² dℓ
//!          + a₂∫_Σ h₂²(κ₁−κ₂)² dA   + b₂∫_Σ h₂²(κ₁+κ₂)² dA   + c₂∫_Σ |∇h₂|² dA
//! ```
//!
//! is evaluated from discrete curvature invariants; [`variations`] checks the
//! underlying variation formulas against finite differences, and [`shapedist`]
//! estimates geodesic distances by path straightening.
//!
//! All numerical code is generic over [`Real`] (`f32`, `f64`); the aliases at the
//! crate root fix the scalar to `f64`.
//!
//! ```
//! use flagmetric::geom::{CurveScalarField, FlagGeometry, ScalarField};
//! use flagmetric::metrics::{flag_metric, FlagWeights, TangentVector};
//! use flagmetric::shapes;
//!
//! # fn main() -> flagmetric::Result<()> {
//! let flag = shapes::ellipsoid::<f64>(1.0, 1.0, 1.5, 128, 65)?;
//! let geom = FlagGeometry::new(&flag)?;
//! let tv = TangentVector::new(
//!     CurveScalarField::from_fn(&flag, |u, _| (2.0 * u).sin()),
//!     ScalarField::from_fn(&flag, |_, _, p| p.z),
//! )?;
//! let g = flag_metric(&geom, &tv, &FlagWeights::ones())?;
//! assert!(g > 0.0);
//! # Ok(())
//! # }
//! ```

pub mod error;
pub mod geom;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod scalar;
pub mod shapedist;
pub mod shapes;
pub mod validate;
pub mod variations;

pub use error::{FlagError, Result};
pub use scalar::Real;

pub type Vec3 = linalg::Vec3<f64>;
pub type Flag = geom::ParameterizedFlag<f64>;
pub type Geometry = geom::FlagGeometry<f64>;
pub type SurfaceInvariants = geom::SurfaceInvariants<f64>;
pub type CurveInvariants = geom::CurveInvariants<f64>;
pub type ScalarField = geom::ScalarField<f64>;
pub type CurveScalarField = geom::CurveScalarField<f64>;
pub type TangentVector = metrics::TangentVector<f64>;
pub type DeformationField = metrics::DeformationField<f64>;
pub type MetricParams = metrics::MetricParams<f64>;
pub type FlagWeights = metrics::FlagWeights<f64>;
pub type FlagPath = shapedist::FlagPath<f64>;
