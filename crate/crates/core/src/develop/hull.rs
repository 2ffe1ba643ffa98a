use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::hyp::{intersection_angle, CPoint, Isometry, Minkowski, OrientedCircle, C64};
use crate::surface::CellComplex;

use super::pattern::CirclePattern;
use super::DevelopError;

/// Orientation tests closer to zero than this are redone exactly, and exact
/// values this small count as coplanar.
const ORIENT_EXACT_BELOW: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullFace {
    /// Point indices, ordered so the empty disk lies to the right.
    pub vertices: Vec<usize>,
    /// Support circle; its disk is the empty cap.
    pub circle: OrientedCircle,
    /// Unit spacelike normal of the support plane, pointing away from the hull.
    pub normal: Minkowski,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullEdge {
    pub label: u64,
    pub ends: [usize; 2],
    pub faces: [usize; 2],
    /// Exterior dihedral angle.
    pub angle: f64,
}

/// Convex hull of finitely many ideal points.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealHull {
    pub points: Vec<CPoint>,
    pub faces: Vec<HullFace>,
    pub edges: Vec<HullEdge>,
    pub complex: CellComplex,
    /// Point index of each vertex of `complex`.
    pub vertex_point: Vec<usize>,
}

impl IdealHull {
    /// Sum of exterior angles at each point.
    pub fn vertex_angle_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.points.len()];
        for e in &self.edges {
            sums[e.ends[0]] += e.angle;
            sums[e.ends[1]] += e.angle;
        }
        sums
    }

    /// Exterior angle per edge of `complex`, keyed by label.
    pub fn angles_by_label(&self) -> BTreeMap<u64, f64> {
        self.edges.iter().map(|e| (e.label, e.angle)).collect()
    }
}

fn rational_vector(p: CPoint) -> [BigRational; 4] {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    match p {
        CPoint::Infinity => [half.clone(), BigRational::zero(), BigRational::zero(), half],
        CPoint::Finite(z) => {
            let x = BigRational::from_float(z.re).expect("finite coordinate");
            let y = BigRational::from_float(z.im).expect("finite coordinate");
            let r2 = &x * &x + &y * &y;
            let one = BigRational::from_integer(BigInt::from(1));
            [(&r2 + &one) * &half, x, y, (&r2 - &one) * &half]
        }
    }
}

fn det4(m: &[[BigRational; 4]; 4]) -> BigRational {
    let mut total = BigRational::zero();
    let perms = permutations4();
    for (p, sign) in perms {
        let mut term = m[0][p[0]].clone();
        for (r, &c) in p.iter().enumerate().skip(1) {
            term *= &m[r][c];
        }
        if sign {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn permutations4() -> Vec<([usize; 4], bool)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if BTreeSet::from(p).len() == 4 {
                        let mut inv = 0;
                        for i in 0..4 {
                            for j in i + 1..4 {
                                if p[i] > p[j] {
                                    inv += 1;
                                }
                            }
                        }
                        out.push((p, inv % 2 == 0));
                    }
                }
            }
        }
    }
    out
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Orienter {
    points: Vec<CPoint>,
    sphere: Vec<[f64; 3]>,
    exact: Vec<[BigRational; 4]>,
}

impl Orienter {
    /// Sign of the orientation of four points on the sphere.
    fn orient(&self, i: usize, j: usize, k: usize, l: usize) -> i8 {
        let s = &self.sphere;
        let det = dot(cross(sub(s[j], s[i]), sub(s[k], s[i])), sub(s[l], s[i]));
        if det.abs() >= ORIENT_EXACT_BELOW {
            return if det > 0.0 { 1 } else { -1 };
        }
        let m = [self.exact[i].clone(), self.exact[j].clone(), self.exact[k].clone(), self.exact[l].clone()];
        let d = det4(&m);
        if d.is_zero() {
            return 0;
        }
        // back to the scale of the float test: divide by the x0 coordinates
        let mut scaled = d.clone();
        for v in [i, j, k, l] {
            scaled /= &self.exact[v][0];
        }
        let mag = scaled.abs().to_f64().unwrap_or(f64::INFINITY);
        if mag < ORIENT_EXACT_BELOW {
            0
        } else if d.is_positive() {
            1
        } else {
            -1
        }
    }
}

/// Convex hull of ideal points. Faces with more than three cocircular
/// points are kept whole.
pub fn ideal_hull(points: &[CPoint]) -> Result<IdealHull, DevelopError> {
    let n = points.len();
    if n < 4 {
        return Err(DevelopError::TooFewPoints { count: n });
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i].chordal_distance(&points[j]) < 1e-12 {
                return Err(DevelopError::Degenerate);
            }
        }
    }
    let o = Orienter {
        points: points.to_vec(),
        sphere: points.iter().map(|p| p.to_sphere()).collect(),
        exact: points.iter().map(|&p| rational_vector(p)).collect(),
    };

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut on = vec![i, j, k];
                let mut pos = false;
                let mut neg = false;
                for l in 0..n {
                    if l == i || l == j || l == k {
                        continue;
                    }
                    match o.orient(i, j, k, l) {
                        0 => on.push(l),
                        1 => pos = true,
                        _ => neg = true,
                    }
                    if pos && neg {
                        break;
                    }
                }
                if pos && neg {
                    continue;
                }
                if !pos && !neg {
                    return Err(DevelopError::Degenerate);
                }
                on.sort_unstable();
                if seen.insert(on.clone()) {
                    let inside = if pos { 1 } else { -1 };
                    faces.push(build_face(&o, &on, (i, j, k), inside)?);
                }
            }
        }
    }
    assemble(points.to_vec(), faces)
}

/// Orders a support face and computes its circle and normal. `inside` is
/// the orientation sign of the remaining points relative to `(i, j, k)`.
fn build_face(o: &Orienter, on: &[usize], ijk: (usize, usize, usize), inside: i8) -> Result<HullFace, DevelopError> {
    let s = &o.sphere;
    let (i, j, k) = ijk;
    let mut nrm = cross(sub(s[j], s[i]), sub(s[k], s[i]));
    if inside > 0 {
        nrm = [-nrm[0], -nrm[1], -nrm[2]];
    }
    let len = dot(nrm, nrm).sqrt();
    nrm = [nrm[0] / len, nrm[1] / len, nrm[2] / len];
    let c = on.iter().map(|&v| dot(nrm, s[v])).sum::<f64>() / on.len() as f64;

    // order around the face centroid
    let center = on.iter().fold([0.0; 3], |acc, &v| [acc[0] + s[v][0], acc[1] + s[v][1], acc[2] + s[v][2]]);
    let u = {
        let d = sub(s[on[0]], [center[0] / on.len() as f64, center[1] / on.len() as f64, center[2] / on.len() as f64]);
        let l = dot(d, d).sqrt();
        [d[0] / l, d[1] / l, d[2] / l]
    };
    let w = cross(nrm, u);
    let mut ordered: Vec<(f64, usize)> = on
        .iter()
        .map(|&v| {
            let d = sub(s[v], center);
            (dot(d, w).atan2(dot(d, u)), v)
        })
        .collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut vertices: Vec<usize> = ordered.into_iter().map(|(_, v)| v).collect();

    // empty cap {n . x > c} as the disk
    let circle = OrientedCircle::from_hermitian(c - nrm[2], C64::new(-nrm[0], -nrm[1]), c + nrm[2])?;
    let order_circle =
        OrientedCircle::through(o.points[vertices[0]], o.points[vertices[1]], o.points[vertices[2]])?;
    // same orientation iff the pairing is negative
    if circle.pairing(&order_circle) > 0.0 {
        vertices.reverse();
    }
    let scale = (1.0 - c * c).sqrt();
    let normal = [c / scale, nrm[0] / scale, nrm[1] / scale, nrm[2] / scale];
    Ok(HullFace { vertices, circle, normal })
}

fn assemble(points: Vec<CPoint>, faces: Vec<HullFace>) -> Result<IdealHull, DevelopError> {
    let mut labels: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut owners: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
    let mut gluing = Vec::with_capacity(faces.len());
    for (f, face) in faces.iter().enumerate() {
        let k = face.vertices.len();
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let (a, b) = (face.vertices[j], face.vertices[(j + 1) % k]);
            let key = (a.min(b), a.max(b));
            let next = labels.len() as u64 + 1;
            let label = *labels.entry(key).or_insert(next) as i64;
            row.push(if a < b { label } else { -label });
            owners.entry(key).or_default().push((f, a < b));
        }
        gluing.push(row);
    }
    for own in owners.values() {
        if own.len() != 2 || own[0].1 == own[1].1 {
            return Err(DevelopError::Degenerate);
        }
    }
    let complex = CellComplex::from_gluing(&gluing, Some(0)).map_err(|_| DevelopError::Degenerate)?;
    let mut vertex_point = vec![usize::MAX; complex.num_vertices()];
    let mut dart = 0;
    for face in &faces {
        for &p in &face.vertices {
            vertex_point[complex.tail(dart)] = p;
            dart += 1;
        }
    }
    let mut edges = Vec::with_capacity(labels.len());
    for (key, label) in &labels {
        let own = &owners[key];
        let angle = intersection_angle(&faces[own[0].0].circle, &faces[own[1].0].circle)?;
        edges.push(HullEdge { label: *label, ends: [key.0, key.1], faces: [own[0].0, own[1].0], angle });
    }
    edges.sort_by_key(|e| e.label);
    Ok(IdealHull { points, faces, edges, complex, vertex_point })
}

/// The support circles of a hull as a pattern on the sphere.
pub fn hull_pattern(h: &IdealHull) -> CirclePattern {
    let c = &h.complex;
    CirclePattern {
        complex: c.clone(),
        circles: h.faces.iter().map(|f| f.circle).collect(),
        vertex_points: h.vertex_point.iter().map(|&p| h.points[p]).collect(),
        face_vertices: h.faces.iter().map(|f| f.vertices.iter().map(|&p| h.points[p]).collect()).collect(),
        decks: vec![Isometry::IDENTITY; c.num_darts()],
        global: true,
    }
}
