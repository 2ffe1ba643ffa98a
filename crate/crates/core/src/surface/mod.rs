//! Combinatorics of cell decompositions of closed oriented surfaces.

mod complex;
mod cover;
mod group;
mod ops;

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use complex::{CellComplex, Dart, EdgePath};
pub use cover::{cover_ball_homotopy, CoverBall, DEFAULT_DART_BUDGET};
pub use group::{cyclic_reduce, free_reduce, invert, Letter, SurfaceGroup};
pub use ops::{bipartition, dual, find_isomorphism, midpoint_decomposition, relabel_darts};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("edge label {label} must appear exactly twice with opposite signs")]
    MissingTwin { label: i64 },
    #[error("complex is disconnected")]
    Disconnected,
    #[error("complex has no darts")]
    Empty,
    #[error("face {face} is empty")]
    EmptyFace { face: usize },
    #[error("edge label 0 is not allowed")]
    ZeroLabel,
    #[error("next/twin do not form a valid rotation system")]
    BadPermutation,
    #[error("Euler characteristic {chi} is not that of a closed orientable surface")]
    InvalidEuler { chi: i64 },
    #[error("genus hint {expected} does not match computed genus {found}")]
    GenusMismatch { expected: usize, found: usize },
    #[error("path is empty")]
    EmptyPath,
    #[error("no dart {dart}")]
    NoSuchDart { dart: usize },
    #[error("path breaks before dart {index}")]
    DiscontinuousPath { index: usize },
    #[error("radius must be at least 1")]
    BadRadius,
    #[error("cover ball exceeds the budget of {budget} darts")]
    ResourceCap { budget: usize },
    #[error("cover balls need vertex degrees and face lengths of at least 3")]
    NotPolygonal,
}

/// Three-valued null-homotopy verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Homotopy {
    Trivial,
    Nontrivial,
    Indeterminate,
}

/// Null-homotopy tests for closed paths on one complex, with cached cover
/// balls for the cross-check.
pub struct HomotopyTester<'a> {
    c: &'a CellComplex,
    group: SurfaceGroup,
    budget: usize,
    balls: Mutex<HashMap<Dart, CoverBall<'a>>>,
}

impl<'a> HomotopyTester<'a> {
    pub const DEFAULT_BUDGET: usize = 20_000;

    pub fn new(c: &'a CellComplex) -> Self {
        Self::with_budget(c, Self::DEFAULT_BUDGET)
    }

    /// A budget of zero disables the cover-ball cross-check.
    pub fn with_budget(c: &'a CellComplex, budget: usize) -> Self {
        HomotopyTester { c, group: SurfaceGroup::new(c), budget, balls: Mutex::new(HashMap::new()) }
    }

    pub fn group(&self) -> &SurfaceGroup {
        &self.group
    }

    pub fn complex(&self) -> &CellComplex {
        self.c
    }

    /// Verdict from the matrix representation alone.
    pub fn matrix_verdict(&self, darts: &[Dart]) -> Homotopy {
        self.group.classify(darts)
    }

    /// Verdict from lifting into a cover ball alone.
    pub fn cover_verdict(&self, darts: &[Dart]) -> Homotopy {
        if darts.is_empty() {
            return Homotopy::Trivial;
        }
        if self.budget == 0 || !cover::is_polygonal(self.c) {
            return Homotopy::Indeterminate;
        }
        let mut balls = self.balls.lock().expect("cover cache poisoned");
        balls
            .entry(darts[0])
            .or_insert_with(|| CoverBall::seed(self.c, darts[0], self.budget))
            .classify(darts)
    }

    pub fn classify(&self, darts: &[Dart]) -> Homotopy {
        let primary = self.matrix_verdict(darts);
        let cross = self.cover_verdict(darts);
        match (primary, cross) {
            (Homotopy::Indeterminate, x) => x,
            (p, Homotopy::Indeterminate) => p,
            (p, x) if p == x => p,
            _ => Homotopy::Indeterminate,
        }
    }

    pub fn is_null_homotopic(&self, p: &EdgePath) -> Homotopy {
        self.classify(p.darts())
    }
}

/// One-shot null-homotopy test of a closed path.
pub fn is_null_homotopic(c: &CellComplex, p: &EdgePath) -> Homotopy {
    HomotopyTester::new(c).is_null_homotopic(p)
}

/// Face-glued ball of the universal cover around `base`.
pub fn cover_ball(c: &CellComplex, base: Dart, radius: usize) -> Result<CoverBall<'_>, ComplexError> {
    CoverBall::build(c, base, radius, DEFAULT_DART_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
    pub min_degree: usize,
    pub low_degree_vertices: Vec<usize>,
    pub short_faces: Vec<usize>,
    /// Labels of edges whose lifts are loops.
    pub lifted_loops: Vec<u64>,
    /// Label pairs of distinct edges whose lifts join the same two vertices.
    pub lifted_double_edges: Vec<(u64, u64)>,
    pub undecided_lifts: usize,
    pub witness_radius: usize,
    pub witness_faces: usize,
    pub passes: bool,
}

/// Checks that `c` is a polygonal cell decomposition: degrees at least 3,
/// faces of length at least 3, and a 1-skeleton lifting to a simple graph.
///
/// Lifted loops and double edges are detected exactly: they come from a
/// one-edge loop, or two edges with common endpoints, that is null-homotopic.
pub fn validate_polygonal(c: &CellComplex) -> ValidationReport {
    let tester = HomotopyTester::new(c);
    let degrees: Vec<usize> = (0..c.num_vertices()).map(|v| c.degree(v)).collect();
    let min_degree = degrees.iter().copied().min().unwrap_or(0);
    let low_degree_vertices = (0..c.num_vertices()).filter(|&v| degrees[v] < 3).collect();
    let short_faces = (0..c.num_faces()).filter(|&f| c.face_len(f) < 3).collect();

    let mut lifted_loops = Vec::new();
    let mut lifted_double_edges = Vec::new();
    let mut undecided = 0;
    for e in 0..c.num_edges() {
        let d = c.edge_dart(e);
        if c.tail(d) == c.head(d) {
            match tester.classify(&[d]) {
                Homotopy::Trivial => lifted_loops.push(c.edge_label(e)),
                Homotopy::Indeterminate => undecided += 1,
                Homotopy::Nontrivial => {}
            }
        }
    }
    for v in 0..c.num_vertices() {
        let out = c.vertex_darts(v);
        for (i, &d1) in out.iter().enumerate() {
            for &d2 in &out[i + 1..] {
                if c.edge(d1) == c.edge(d2) || c.head(d1) != c.head(d2) {
                    continue;
                }
                let (l1, l2) = (c.label(d1), c.label(d2));
                let pair = (l1.min(l2), l1.max(l2));
                match tester.classify(&[d1, c.twin(d2)]) {
                    Homotopy::Trivial => {
                        if !lifted_double_edges.contains(&pair) {
                            lifted_double_edges.push(pair);
                        }
                    }
                    Homotopy::Indeterminate => undecided += 1,
                    Homotopy::Nontrivial => {}
                }
            }
        }
    }
    lifted_loops.sort_unstable();
    lifted_double_edges.sort_unstable();

    let max_face = (0..c.num_faces()).map(|f| c.face_len(f)).max().unwrap_or(0);
    let mut ball = CoverBall::seed(c, 0, DEFAULT_DART_BUDGET);
    let _ = ball.grow(2 * max_face);
    let witness_radius = ball.radius();
    let witness_faces = ball.num_faces();

    let passes = min_degree >= 3
        && c.num_faces() > 0
        && (0..c.num_faces()).all(|f| c.face_len(f) >= 3)
        && lifted_loops.is_empty()
        && lifted_double_edges.is_empty()
        && undecided == 0;
    ValidationReport {
        vertices: c.num_vertices(),
        edges: c.num_edges(),
        faces: c.num_faces(),
        genus: c.genus(),
        min_degree,
        low_degree_vertices,
        short_faces,
        lifted_loops,
        lifted_double_edges,
        undecided_lifts: undecided,
        witness_radius,
        witness_faces,
        passes,
    }
}
