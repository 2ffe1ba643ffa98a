//! Hyperbolic geometry kernel: isometries, oriented circles, formulas.

mod circle;
mod formulas;
mod mobius;
mod space;
mod tetra;

use thiserror::Error;

pub use circle::{intersection_angle, OrientedCircle};
pub use formulas::{
    circle_area, circle_length, isoperimetric_length, isoperimetric_max_area, perp_distance, polygon_area,
    polygon_area_tol, roof_bound,
};
pub use mobius::{CPoint, Isometry, Mat2, C64};
pub use space::{act, ideal_vector, mink_dot, turning_angle, H3Point, Minkowski};
pub use tetra::{acosh_branch, complex_distance, line_matrix, opposite_edge_lengths, CorePairing, IdealTetrahedron};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypError {
    #[error("matrix is singular")]
    Singular,
    #[error("points coincide")]
    DegeneratePoints,
    #[error("Hermitian form does not describe a circle")]
    NotACircle,
    #[error("circles do not intersect (inversive distance {inversive_distance})")]
    NoIntersection { inversive_distance: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exterior angles sum to {sum}, below 2 pi")]
    NegativeArea { sum: f64 },
    #[error("tetrahedron shape must lie in the upper half-plane")]
    DegenerateShape,
}
