//! Volumes, lattice counts, Hilbert balls, cells and inequality systems.

mod alcove;
mod budget;
mod cells;
mod ehrhart;
mod hilbert;
mod inequality;
mod polytope;

pub use alcove::{enumerate_alcoves, Alcove, AlcoveIter};
pub use budget::{Budget, BUDGET_ENV, DEFAULT_BUDGET};
pub use polytope::{
    count_lattice_points, count_lattice_points_sweep, volume, CountReport, VertexPolytope,
    VolumeReport,
};
pub use hilbert::{
    hilbert_ball_count, hilbert_ball_generators, hilbert_ball_volume, outer_parallel_body,
};
pub use cells::{
    enumerate_cells, full_dimensional_types, has_integer_pseudovertices, max_dimensional_cells,
    max_radius_xt, polytrope_volume, volume_by_cells, CellInfo,
};
pub use ehrhart::ehrhart_leading_coefficient;
pub use inequality::{
    gadget_volume_target, ineq_contains, ineq_count, ineq_volume, sat_count_bruteforce, sat_gadget,
    InequalityPolytope, SatFormula, BRUTE_FORCE_MAX_VARS,
};
