use serde::{Deserialize, Serialize};

use crate::hyp::{intersection_angle, CPoint, Isometry, OrientedCircle};
use crate::surface::{CellComplex, Dart};

use super::surface::{vertex_holonomy, DevelopedSurface};
use super::DevelopError;

pub const HOLONOMY_TOL: f64 = 1e-8;
pub const INCIDENCE_TOL: f64 = 1e-8;
pub const EMPTY_DISK_MARGIN: f64 = 1e-8;

/// Circles of a pattern, one per face of `eta`, with the vertex points.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePattern {
    pub complex: CellComplex,
    pub circles: Vec<OrientedCircle>,
    /// One developed point per vertex.
    pub vertex_points: Vec<CPoint>,
    /// Developed corners of each face, in face dart order.
    pub face_vertices: Vec<Vec<CPoint>>,
    /// Per dart `d`, the map placing the neighbor across `d` next to `face(d)`.
    pub decks: Vec<Isometry>,
    /// True when all faces live in one chart (sphere patterns).
    pub global: bool,
}

impl CirclePattern {
    /// Circle of the neighbor of `face(d)` across `d`, in its adjacent position.
    pub fn neighbor_circle(&self, d: Dart) -> OrientedCircle {
        let g = self.complex.face(self.complex.twin(d));
        self.circles[g].apply(&self.decks[d])
    }

    /// Intersection angle of the two circles meeting at the edge of `d`.
    pub fn edge_angle(&self, d: Dart) -> Result<f64, DevelopError> {
        let f = self.complex.face(d);
        Ok(intersection_angle(&self.circles[f], &self.neighbor_circle(d))?)
    }

    /// Angle per edge index.
    pub fn edge_angles(&self) -> Result<Vec<f64>, DevelopError> {
        (0..self.complex.num_edges()).map(|e| self.edge_angle(self.complex.edge_dart(e))).collect()
    }

    /// Corner points of all faces around the corners of face `f`, placed next
    /// to `f`.
    fn neighborhood(&self, f: usize) -> Vec<CPoint> {
        let c = &self.complex;
        let mut pts = Vec::new();
        for &d in c.face_darts(f) {
            let mut m = Isometry::IDENTITY;
            let mut x = d;
            loop {
                let g = c.face(x);
                pts.extend(self.face_vertices[g].iter().map(|&p| m.apply(p)));
                m = m.compose(&self.decks[c.prev(x)]);
                x = c.rot(x);
                if x == d {
                    break;
                }
            }
        }
        if self.global {
            pts.extend(self.vertex_points.iter().copied());
        }
        pts
    }
}

/// Extracts circles from a development whose vertex holonomies are trivial.
pub fn extract_pattern(d: &DevelopedSurface) -> Result<CirclePattern, DevelopError> {
    let eta = d.complex();
    for v in 0..eta.num_vertices() {
        let dist = vertex_holonomy(d, v).distance_from_identity();
        if !(dist <= HOLONOMY_TOL) {
            return Err(DevelopError::NontrivialHolonomy { vertex: v, distance: dist });
        }
    }
    let circles = (0..eta.num_faces()).map(|f| d.face_circle(f)).collect::<Result<Vec<_>, _>>()?;
    let face_vertices: Vec<Vec<CPoint>> = (0..eta.num_faces()).map(|f| d.face_vertices(f)).collect();
    let vertex_points = (0..eta.num_vertices())
        .map(|v| {
            let x = eta.vertex_darts(v)[0];
            let f = eta.face(x);
            let j = eta.face_darts(f).iter().position(|&y| y == x).expect("dart in its face");
            face_vertices[f][j]
        })
        .collect();
    let decks = eta.darts().map(|x| d.deck(x)).collect();
    Ok(CirclePattern { complex: eta.clone(), circles, vertex_points, face_vertices, decks, global: false })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaunayReport {
    /// Every face circle passes through all its corners and at least three
    /// distinct points.
    pub incidence: bool,
    pub max_incidence_error: f64,
    /// Neighbors across each edge pass through both endpoints and cross.
    pub cutting_pairs: bool,
    /// No vertex strictly inside any disk.
    pub empty_disks: bool,
    /// Most negative normalized form value over vertices and disks.
    pub worst_inside: f64,
    /// Points on each circle are exactly that face's corners.
    pub combinatorics: bool,
    pub passes: bool,
}

fn distinct(points: &[CPoint]) -> Vec<CPoint> {
    let mut out: Vec<CPoint> = Vec::new();
    for p in points {
        if out.iter().all(|q| q.chordal_distance(p) > 1e-7) {
            out.push(*p);
        }
    }
    out
}

pub fn verify_delaunay(p: &CirclePattern, combinatorics: &CellComplex) -> DelaunayReport {
    let c = &p.complex;
    let same_shape = c.num_faces() == combinatorics.num_faces()
        && c.num_vertices() == combinatorics.num_vertices()
        && c.num_edges() == combinatorics.num_edges()
        && (0..c.num_faces()).all(|f| c.face_len(f) == combinatorics.face_len(f))
        && p.circles.len() == c.num_faces()
        && p.vertex_points.len() == c.num_vertices();

    let mut max_inc: f64 = 0.0;
    let mut enough = true;
    for (f, circle) in p.circles.iter().enumerate() {
        for q in &p.face_vertices[f] {
            max_inc = max_inc.max(circle.evaluate(*q).abs());
        }
        if distinct(&p.face_vertices[f]).len() < 3 {
            enough = false;
        }
    }
    let incidence = enough && max_inc <= INCIDENCE_TOL;

    let mut cutting = true;
    for d in c.darts() {
        let f = c.face(d);
        let j = c.face_darts(f).iter().position(|&y| y == d).expect("dart in its face");
        let k = c.face_len(f);
        let nb = p.neighbor_circle(d);
        let (a, b) = (p.face_vertices[f][j], p.face_vertices[f][(j + 1) % k]);
        let on = nb.evaluate(a).abs() <= INCIDENCE_TOL && nb.evaluate(b).abs() <= INCIDENCE_TOL;
        let crosses = matches!(intersection_angle(&p.circles[f], &nb), Ok(t) if t > 0.0 && t < std::f64::consts::PI);
        cutting &= on && crosses;
    }

    let mut worst: f64 = f64::INFINITY;
    let mut agree = same_shape;
    for (f, circle) in p.circles.iter().enumerate() {
        let pts = p.neighborhood(f);
        let mut on_circle = Vec::new();
        for q in &pts {
            let v = circle.evaluate(*q);
            worst = worst.min(v);
            if v.abs() <= INCIDENCE_TOL {
                on_circle.push(*q);
            }
        }
        if distinct(&on_circle).len() != distinct(&p.face_vertices[f]).len() {
            agree = false;
        }
    }
    let empty = worst >= -EMPTY_DISK_MARGIN;
    DelaunayReport {
        incidence,
        max_incidence_error: max_inc,
        cutting_pairs: cutting,
        empty_disks: empty,
        worst_inside: worst,
        combinatorics: agree,
        passes: incidence && cutting && empty && agree,
    }
}
