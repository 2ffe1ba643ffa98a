use serde::{Deserialize, Serialize};

use crate::hyp::{CPoint, Isometry, C64};
use crate::surface::Dart;
use crate::teich::{cusp_products, CuspWalk, IdealTriangulation, ShearPoint};

use super::DevelopError;

/// One face of `eta` realized as an ideal polygon with vertices on the real
/// line of its own chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceShape {
    pub face: usize,
    /// `eta` darts of the face; corner `j` is the tail of `darts[j]`.
    pub darts: Vec<Dart>,
    pub vertices: Vec<CPoint>,
    /// Per side `j`, the corner opposite side `j` in its triangle.
    pub third: Vec<usize>,
    /// Per side `j`, the shear of the `eta` edge on that side.
    pub side_shears: Vec<f64>,
    /// Per corner, the horocyclic arc of that corner normalized by the first
    /// corner at the same vertex.
    pub marks: Vec<f64>,
}

impl FaceShape {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// `X` with `(X, P, Q, R)` at shear `w`: the map sending `(P, Q, R)` to
/// `(0, inf, -1)` takes `X` to `w`.
pub(crate) fn glue_point(p: CPoint, q: CPoint, r: CPoint, w: C64) -> Result<CPoint, DevelopError> {
    let n = Isometry::normalizing(p, q, r)?;
    Ok(n.inverse().apply(CPoint::Finite(-w)))
}

/// Shear of the quadrilateral `P, Q` (edge), `R` and `X` (opposite corners).
pub fn shear_of(p: CPoint, q: CPoint, r: CPoint, x: CPoint) -> Result<C64, DevelopError> {
    let n = Isometry::normalizing(p, q, r)?;
    match n.apply(x) {
        CPoint::Finite(z) => Ok(-z),
        CPoint::Infinity => Err(DevelopError::Hyp(crate::hyp::HypError::DegeneratePoints)),
    }
}

/// Assembles every face of `eta` from its fan of triangles. Fails on
/// incomplete cusps.
pub fn face_shapes(t: &IdealTriangulation, s: &ShearPoint) -> Result<Vec<FaceShape>, DevelopError> {
    for (v, p) in cusp_products(t, s)?.into_iter().enumerate() {
        if p.ln().abs() > 1e-10 {
            return Err(DevelopError::IncompleteCusp { vertex: v, product: p });
        }
    }
    face_shapes_unchecked(t, s)
}

/// As [`face_shapes`] without the completeness check.
pub fn face_shapes_unchecked(t: &IdealTriangulation, s: &ShearPoint) -> Result<Vec<FaceShape>, DevelopError> {
    let eta = t.eta();
    let lambda = t.lambda();
    let x = s.logs(t)?;
    let shear = |label: u64| x[lambda.edge_by_label(label).expect("label of the triangulation")].exp();

    let mut marks = vec![0.0; eta.num_darts()];
    for v in 0..eta.num_vertices() {
        let walk = CuspWalk::new(t, v);
        let phi = walk.raw_phi(&x);
        for (j, &d) in walk.eta_darts().iter().enumerate() {
            marks[d] = phi[j] / phi[0];
        }
    }

    let mut out = Vec::with_capacity(eta.num_faces());
    for f in 0..eta.num_faces() {
        let darts = eta.face_darts(f).to_vec();
        let k = darts.len();
        let mut pos = vec![CPoint::Infinity; k];
        pos[0] = CPoint::new(0.0, 0.0);
        pos[1] = CPoint::new(1.0, 0.0);
        let diags = &t.fan(f).diagonals;
        for j in 2..k - 1 {
            // diagonal from corner 0 to corner j; prior triangle has third corner j - 1
            let sd = shear(diags[j - 2]);
            pos[j + 1] = glue_point(pos[j], pos[0], pos[j - 1], C64::new(sd, 0.0))?;
        }
        let mut third = Vec::with_capacity(k);
        let mut side_shears = Vec::with_capacity(k);
        for &d in &darts {
            let ld = t.lambda_dart(d);
            let (face, corner) = t.corner_of(lambda.next(lambda.next(ld)));
            debug_assert_eq!(face, f);
            third.push(corner);
            side_shears.push(shear(lambda.label(ld)));
        }
        let m = darts.iter().map(|&d| marks[d]).collect();
        out.push(FaceShape { face: f, darts, vertices: pos, third, side_shears, marks: m });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::CellComplex;
    use crate::teich::complete_triangulation;

    fn close(a: CPoint, b: CPoint) -> bool {
        a.chordal_distance(&b) < 1e-12
    }

    #[test]
    fn triangle_is_normalized() {
        let c = CellComplex::from_gluing(&[vec![1, 2, 3], vec![-1, 4, -5], vec![-2, 5, 6], vec![-3, -6, -4]], None)
            .unwrap();
        let t = complete_triangulation(&c).unwrap();
        let shapes = face_shapes(&t, &ShearPoint::ones(&t)).unwrap();
        for sh in &shapes {
            assert!(close(sh.vertices[0], CPoint::new(0.0, 0.0)));
            assert!(close(sh.vertices[1], CPoint::new(1.0, 0.0)));
            assert!(sh.vertices[2].is_infinite());
        }
    }

    #[test]
    fn symmetric_square() {
        let p = glue_point(CPoint::Infinity, CPoint::new(0.0, 0.0), CPoint::new(1.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert!(close(p, CPoint::new(-1.0, 0.0)));
        // the cross-ratio oracle for a general shear
        let (pp, q, r) = (C64::new(0.3, 0.0), C64::new(2.0, 0.0), C64::new(-1.5, 0.0));
        let x = glue_point(CPoint::Finite(pp), CPoint::Finite(q), CPoint::Finite(r), C64::new(2.5, 0.0)).unwrap();
        let xv = x.finite().unwrap();
        let s = -(xv - pp) * (r - q) / ((xv - q) * (r - pp));
        assert!((s - C64::new(2.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn incomplete_cusp_is_rejected() {
        let c = CellComplex::from_gluing(&[vec![1, 2, -1, -2, 3, 4, -3, -4]], None).unwrap();
        let t = complete_triangulation(&c).unwrap();
        let mut s = ShearPoint::ones(&t);
        s.set(1, 2.0);
        assert!(matches!(face_shapes(&t, &s), Err(DevelopError::IncompleteCusp { .. })));
    }
}
