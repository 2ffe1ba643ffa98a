//! Circle patterns on closed surfaces through balanced cusped hyperbolic metrics.
//!
//! The crate is organized along the pipeline: cell complexes and their
//! combinatorics ([`surface`]), angle data and the admissibility gate
//! ([`admissibility`]), shear coordinates and the balance solver ([`teich`]),
//! and reconstruction of circles and ideal polyhedra ([`develop`]).

pub mod admissibility;
pub mod develop;
pub mod hyp;
pub mod io;
pub mod surface;
pub mod teich;
