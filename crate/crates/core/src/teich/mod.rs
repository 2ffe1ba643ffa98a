//! Shear coordinates on the punctured surface and balanced metrics.

mod shear;
mod solver;
mod triangulation;

use thiserror::Error;

use crate::admissibility::AngleError;
use crate::surface::ComplexError;

pub use shear::{
    closing_residual, cusp_angles, cusp_products, kappa_balance_residual, kappa_pair, polygon_closing,
    project_to_complete, BalanceSystem, ShearPoint,
};
pub use solver::{
    formal_dimension, solve_balanced, solve_unchecked, tangent_dimension, tangent_dimension_with, SolveReport,
    SolverOptions,
};
pub(crate) use shear::CuspWalk;
pub use triangulation::{complete_triangulation, expected_edge_count, FaceFan, IdealTriangulation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TeichError {
    #[error("a sphere with {vertices} punctures has no ideal triangulation")]
    Unfillable { genus: usize, vertices: usize },
    #[error("face {face} has fewer than three sides")]
    ShortFace { face: usize },
    #[error("angle data is not admissible")]
    NotAdmissible,
    #[error("cusp at vertex {vertex} is incomplete (product {product})")]
    IncompleteCusp { vertex: usize, product: f64 },
    #[error("vertex {vertex} has degree {degree}, expected 4")]
    DegreeNotFour { vertex: usize, degree: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("no shear for edge {label}")]
    MissingShear { label: u64 },
    #[error("shear for edge {label} is not a positive number")]
    NonPositiveShear { label: u64 },
    #[error("point is not a solution (residual {residual:e})")]
    NotASolution { residual: f64 },
    #[error(transparent)]
    Angle(#[from] AngleError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
