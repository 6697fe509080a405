//! Path energy on the space of flags and geodesic distance estimates by path
//! straightening.

mod path;
mod straighten;

pub use path::{linear_path, path_energy, path_energy_terms, step_energy, FlagPath};
pub use straighten::{
    distance, normal_basis, straighten, StraightenOptions, StraightenResult, StraightenStatus, MODES_PER_FLAG,
};
