//! Discrete flags and their first- and second-order invariants.

mod curve;
mod fields;
mod flag;
mod stencil;
mod surface;

pub(crate) use curve::integrate_curve_values;
pub use curve::{
    arc_length_derivative, curve_invariants, darboux_frame, integrate_curve, CurveInvariants, CurveSamples,
    DarbouxFrame,
};
pub use fields::{CurveScalarField, ScalarField};
pub use flag::{build_flag, u_coord, v_coord, ParameterizedFlag, MIN_N_U, MIN_N_V};
pub(crate) use stencil::cubic_weights;
pub use stencil::fornberg_weights;
pub use surface::{
    fundamental_forms, integrate_surface, surface_gradient, SurfaceGradient, SurfaceInvariants,
};
pub(crate) use surface::{integrate_surface_values, metric_and_normal};

use crate::error::Result;
use crate::scalar::Real;

/// Everything the metric needs about one flag, computed once.
#[derive(Clone, Debug)]
pub struct FlagGeometry<T> {
    pub surface: SurfaceInvariants<T>,
    pub curve: CurveSamples<T>,
    pub frame: DarbouxFrame<T>,
    pub invariants: CurveInvariants<T>,
    /// Interior-row index of the marked curve.
    pub curve_row: usize,
}

impl<T: Real> FlagGeometry<T> {
    pub fn new(flag: &ParameterizedFlag<T>) -> Result<Self> {
        let surface = fundamental_forms(flag)?;
        let curve = CurveSamples::from_flag(flag);
        let curve_row = flag.equator_interior_row();
        let frame = DarbouxFrame::from_parts(&curve, &surface, curve_row);
        let invariants = CurveInvariants::from_frame(&curve, &frame);
        Ok(Self {
            surface,
            curve,
            frame,
            invariants,
            curve_row,
        })
    }

    pub fn n_u(&self) -> usize {
        self.surface.n_u
    }
}
