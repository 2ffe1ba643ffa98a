use std::collections::{BTreeMap, VecDeque};

use crate::admissibility::AngleFunction;
use crate::hyp::{CPoint, Isometry, OrientedCircle, C64};
use crate::surface::{CellComplex, Dart};

use super::shapes::{glue_point, FaceShape};
use super::DevelopError;

/// Tolerance on shared edge endpoints after gluing.
pub const GLUING_TOL: f64 = 1e-9;

/// Faces of `eta` placed in hyperbolic space along a spanning tree of the
/// dual graph.
#[derive(Debug, Clone)]
pub struct DevelopedSurface {
    eta: CellComplex,
    theta: Vec<f64>,
    shapes: Vec<FaceShape>,
    /// Per face, the dart of the parent face across which it was reached.
    parent: Vec<Option<Dart>>,
    order: Vec<usize>,
    placement: Vec<Isometry>,
    /// Per dart `d`, the map from the chart of `face(twin d)` to the chart of
    /// `face(d)`, with and without bending.
    transition: Vec<Isometry>,
    flat_transition: Vec<Isometry>,
    mismatch: f64,
}

/// Side `j` of a shape: (tail, head, opposite corner).
fn side(shape: &FaceShape, j: usize) -> (CPoint, CPoint, CPoint) {
    let k = shape.len();
    (shape.vertices[j], shape.vertices[(j + 1) % k], shape.vertices[shape.third[j]])
}

/// Chart map across dart `d` with bending angle `bend`.
fn gluing(
    eta: &CellComplex,
    shapes: &[FaceShape],
    corner: &[usize],
    d: Dart,
    bend: f64,
) -> Result<Isometry, DevelopError> {
    let tw = eta.twin(d);
    let (sf, sg) = (&shapes[eta.face(d)], &shapes[eta.face(tw)]);
    let (pf, qf, rf) = side(sf, corner[d]);
    let (qg, pg, xg) = side(sg, corner[tw]);
    let s = sf.side_shears[corner[d]];
    let x = glue_point(pf, qf, rf, C64::from_polar(s, bend))?;
    Ok(Isometry::from_three_points([pg, qg, xg], [pf, qf, x])?)
}

/// Develops the faces with exterior bending `theta` across every edge.
pub fn develop(eta: &CellComplex, theta: &AngleFunction, shapes: &[FaceShape]) -> Result<DevelopedSurface, DevelopError> {
    if shapes.len() != eta.num_faces() {
        return Err(DevelopError::ShapeMismatch { face: shapes.len().min(eta.num_faces()) });
    }
    let mut corner = vec![usize::MAX; eta.num_darts()];
    for (f, sh) in shapes.iter().enumerate() {
        if sh.face != f || sh.darts.as_slice() != eta.face_darts(f) || sh.len() < 3 {
            return Err(DevelopError::ShapeMismatch { face: f });
        }
        for (j, &d) in sh.darts.iter().enumerate() {
            corner[d] = j;
        }
    }
    let theta_e: Vec<f64> =
        (0..eta.num_edges()).map(|e| theta.get(eta.edge_label(e)).map(|a| a.radians())).collect::<Result<_, _>>()?;

    let mut transition = Vec::with_capacity(eta.num_darts());
    let mut flat_transition = Vec::with_capacity(eta.num_darts());
    let mut mismatch: f64 = 0.0;
    for d in eta.darts() {
        let t = gluing(eta, shapes, &corner, d, theta_e[eta.edge(d)])?;
        let t0 = gluing(eta, shapes, &corner, d, 0.0)?;
        // shared endpoints must match
        let tw = eta.twin(d);
        let (pf, qf, _) = side(&shapes[eta.face(d)], corner[d]);
        let (qg, pg, _) = side(&shapes[eta.face(tw)], corner[tw]);
        mismatch = mismatch.max(t.apply(pg).chordal_distance(&pf)).max(t.apply(qg).chordal_distance(&qf));
        transition.push(t);
        flat_transition.push(t0);
    }
    // the two directions across an edge must be inverse to each other
    for d in eta.darts() {
        let back = transition[d].compose(&transition[eta.twin(d)]);
        mismatch = mismatch.max(back.distance_from_identity());
    }
    if mismatch > GLUING_TOL {
        let worst = eta
            .darts()
            .max_by(|&a, &b| {
                let ea = transition[a].compose(&transition[eta.twin(a)]).distance_from_identity();
                let eb = transition[b].compose(&transition[eta.twin(b)]).distance_from_identity();
                ea.total_cmp(&eb)
            })
            .unwrap_or(0);
        return Err(DevelopError::GluingMismatch { dart: worst, error: mismatch });
    }

    let nf = eta.num_faces();
    let mut parent = vec![None; nf];
    let mut placement = vec![Isometry::IDENTITY; nf];
    let mut seen = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        order.push(f);
        for &d in eta.face_darts(f) {
            let g = eta.face(eta.twin(d));
            if !seen[g] {
                seen[g] = true;
                parent[g] = Some(d);
                placement[g] = placement[f].compose(&transition[d]);
                queue.push_back(g);
            }
        }
    }
    Ok(DevelopedSurface {
        eta: eta.clone(),
        theta: theta_e,
        shapes: shapes.to_vec(),
        parent,
        order,
        placement,
        transition,
        flat_transition,
        mismatch,
    })
}

impl DevelopedSurface {
    pub fn complex(&self) -> &CellComplex {
        &self.eta
    }

    pub fn shapes(&self) -> &[FaceShape] {
        &self.shapes
    }

    /// Bending angle per edge index.
    pub fn bending(&self) -> &[f64] {
        &self.theta
    }

    /// Faces in the order they were placed.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn parent(&self, f: usize) -> Option<Dart> {
        self.parent[f]
    }

    pub fn is_tree_dart(&self, d: Dart) -> bool {
        let g = self.eta.face(self.eta.twin(d));
        let f = self.eta.face(d);
        self.parent[g] == Some(d) || self.parent[f] == Some(self.eta.twin(d))
    }

    pub fn placement(&self, f: usize) -> &Isometry {
        &self.placement[f]
    }

    pub fn transition(&self, d: Dart) -> &Isometry {
        &self.transition[d]
    }

    pub fn flat_transition(&self, d: Dart) -> &Isometry {
        &self.flat_transition[d]
    }

    /// Largest endpoint or inverse-pair error seen while gluing.
    pub fn gluing_error(&self) -> f64 {
        self.mismatch
    }

    /// Map taking the developed copy of `face(twin d)` to the copy adjacent to
    /// `face(d)` across `d`. Identity up to rounding on tree darts.
    pub fn deck(&self, d: Dart) -> Isometry {
        let f = self.eta.face(d);
        let g = self.eta.face(self.eta.twin(d));
        self.placement[f].compose(&self.transition[d]).compose(&self.placement[g].inverse())
    }

    /// Gluing maps of the non-tree edges, keyed by their positive dart.
    pub fn gluings(&self) -> BTreeMap<Dart, Isometry> {
        (0..self.eta.num_edges())
            .map(|e| self.eta.edge_dart(e))
            .filter(|&d| !self.is_tree_dart(d))
            .map(|d| (d, self.deck(d)))
            .collect()
    }

    /// Holonomy generators of the punctured surface: one per non-tree edge.
    pub fn generators(&self) -> Vec<(u64, Isometry)> {
        self.gluings().into_iter().map(|(d, m)| (self.eta.label(d), m)).collect()
    }

    /// Developed corner positions of face `f`.
    pub fn face_vertices(&self, f: usize) -> Vec<CPoint> {
        self.shapes[f].vertices.iter().map(|&p| self.placement[f].apply(p)).collect()
    }

    /// Boundary of the developed plane of face `f`, disk on the right of the
    /// corner order.
    pub fn face_circle(&self, f: usize) -> Result<OrientedCircle, DevelopError> {
        let v = &self.shapes[f].vertices;
        Ok(OrientedCircle::through(v[0], v[1], v[2])?.apply(&self.placement[f]))
    }

    pub fn vertex_holonomy(&self, v: usize) -> Isometry {
        vertex_holonomy(self, v)
    }
}

/// Composed chart maps around the corners at `v`, starting and ending in the
/// chart of the face of the lowest dart at `v`.
pub fn vertex_holonomy(d: &DevelopedSurface, v: usize) -> Isometry {
    let eta = &d.eta;
    let mut h = Isometry::IDENTITY;
    for &x in eta.vertex_darts(v) {
        h = h.compose(&d.transition[eta.prev(x)]);
    }
    h
}
