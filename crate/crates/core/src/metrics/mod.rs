//! Elastic metrics on curves and surfaces, the normal projection `Ψ` and the
//! six-weight metric on flags.

mod elastic;
mod flag_metric;
mod params;
mod projection;
mod reparam;

pub use elastic::{curve_elastic_energy, curve_elastic_metric, surface_elastic_energy, AsymmetricPolicy};
pub use flag_metric::{
    flag_metric, flag_metric_terms, normal_curve_energy, normal_surface_energy, MetricTerms,
};
pub use params::{CurveElasticWeights, FlagWeights, MetricParams, SurfaceElasticWeights};
pub use projection::{psi_project, DeformationField, TangentVector};
pub use reparam::{
    apply_reparameterization, check_reparameterization, resample_grid, transport_deformation,
    EquatorPreserving, FourierReparam,
};
