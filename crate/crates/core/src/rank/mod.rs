//! Permanents, tropical rank, minimum cycle means and inner radii.

mod permanent;
mod project;
mod spectral;

pub use permanent::{tropical_permanent, tropical_rank, PermanentResult};
pub use project::{polytrope_lattice_count, project_to_xt, tight_representatives, ProjectedCell};
pub use spectral::{inner_radius, min_cycle_mean, SpectralData};
