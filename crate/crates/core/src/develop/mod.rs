//! Reconstruction: ideal polygons from shears, the pleated development,
//! circle patterns, bending along dual paths and ideal hulls on the sphere.

mod bending;
mod hull;
mod pattern;
mod shapes;
mod surface;

use thiserror::Error;

use crate::admissibility::AngleError;
use crate::hyp::HypError;
use crate::teich::TeichError;

pub use bending::{bending_along, random_closed_dual_path, BendingMethod, BendingReport};
pub use hull::{hull_pattern, ideal_hull, HullEdge, HullFace, IdealHull};
pub use pattern::{
    extract_pattern, verify_delaunay, CirclePattern, DelaunayReport, EMPTY_DISK_MARGIN, HOLONOMY_TOL, INCIDENCE_TOL,
};
pub use shapes::{face_shapes, face_shapes_unchecked, shear_of, FaceShape};
pub use surface::{develop, vertex_holonomy, DevelopedSurface, GLUING_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DevelopError {
    #[error("cusp at vertex {vertex} is incomplete (product {product})")]
    IncompleteCusp { vertex: usize, product: f64 },
    #[error("face shape {face} does not match the complex")]
    ShapeMismatch { face: usize },
    #[error("gluing across dart {dart} misses by {error:e}")]
    GluingMismatch { dart: usize, error: f64 },
    #[error("holonomy at vertex {vertex} is {distance:e} away from the identity")]
    NontrivialHolonomy { vertex: usize, distance: f64 },
    #[error("points are concyclic or coincide")]
    Degenerate,
    #[error("need at least 4 points, got {count}")]
    TooFewPoints { count: usize },
    #[error("path must be closed and non-backtracking")]
    BadPath,
    #[error(transparent)]
    Hyp(#[from] HypError),
    #[error(transparent)]
    Teich(#[from] TeichError),
    #[error(transparent)]
    Angle(#[from] AngleError),
}
