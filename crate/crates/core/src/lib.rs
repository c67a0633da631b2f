//! Exact geometry of tropical (min-plus) polytopes.
//!
//! A tropical polytope `P = tconv(A)` lives in `TP^{m-1}`; points are
//! represented with first coordinate zero. Every quantity is computed in exact
//! rational arithmetic.

pub mod bounds;
pub mod cell;
pub mod covector;
pub mod error;
pub mod geom;
pub mod matrix;
pub mod rank;
pub mod scalar;

pub use cell::{cell_dimension, cell_system, kleene_star, tight_classes, CellSystem};
pub use covector::{
    bounding_box, contains_point, hilbert_distance, hilbert_norm, type_of, BoundingBox,
    CovectorType, ProjectivePoint,
};
pub use error::{Error, Result};
pub use matrix::TropicalMatrix;
pub use scalar::{ExactScalar, ExtScalar};
pub use rank::{
    inner_radius, min_cycle_mean, polytrope_lattice_count, project_to_xt, tight_representatives,
    tropical_permanent, tropical_rank, PermanentResult, ProjectedCell, SpectralData,
};
pub use geom::{
    count_lattice_points, count_lattice_points_sweep, enumerate_cells, full_dimensional_types,
    hilbert_ball_count, hilbert_ball_generators, hilbert_ball_volume, ineq_count, ineq_volume,
    max_dimensional_cells, max_radius_xt, outer_parallel_body, polytrope_volume, sat_gadget,
    volume, volume_by_cells, Budget, CellInfo, CountReport, InequalityPolytope, SatFormula,
    VertexPolytope, VolumeReport,
};
pub use bounds::{
    bar_epsilon, choice_epsilon, counting_bounds, interval_table, rank_from_counting,
    rank_from_volume, s_bar, volume_bounds, zero_volume_decision, BoundsReport, Enclosure,
    IntervalTable, Param, Verdict,
};
