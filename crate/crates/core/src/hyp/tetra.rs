//! Ideal tetrahedra and complex distances between geodesics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mobius::{CPoint, Mat2, C64, ONE, ZERO};
use super::HypError;

/// Ideal tetrahedron with vertices normalized to `0, 1, infinity, z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealTetrahedron {
    z: C64,
}

impl IdealTetrahedron {
    pub fn new(z: C64) -> Result<Self, HypError> {
        if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(HypError::DegenerateShape);
        }
        Ok(IdealTetrahedron { z })
    }

    pub fn shape(&self) -> C64 {
        self.z
    }

    /// Vertices in the order `0, 1, infinity, z`.
    pub fn vertices(&self) -> [CPoint; 4] {
        [CPoint::new(0.0, 0.0), CPoint::new(1.0, 0.0), CPoint::Infinity, CPoint::Finite(self.z)]
    }
}

/// Which vertex shares a side of the core curve with vertex `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorePairing {
    WithOne,
    WithInfinity,
    WithZ,
}

impl CorePairing {
    pub const ALL: [CorePairing; 3] = [CorePairing::WithOne, CorePairing::WithInfinity, CorePairing::WithZ];

    /// Vertex indices `(a, b, c, d)` with the core separating `{a, b}` from `{c, d}`.
    fn groups(self) -> [usize; 4] {
        match self {
            CorePairing::WithOne => [0, 1, 2, 3],
            CorePairing::WithInfinity => [0, 2, 1, 3],
            CorePairing::WithZ => [0, 3, 1, 2],
        }
    }
}

/// Half-turn about the oriented geodesic `a -> b`, as a determinant `-1`
/// involution.
pub fn line_matrix(a: CPoint, b: CPoint) -> Result<Mat2, HypError> {
    match (a, b) {
        (CPoint::Finite(a), CPoint::Finite(b)) => {
            let d = a - b;
            if d.norm() < 1e-14 {
                return Err(HypError::DegeneratePoints);
            }
            Ok(Mat2::new(a + b, -2.0 * a * b, C64::new(2.0, 0.0), -(a + b)).scale(ONE / d))
        }
        (CPoint::Infinity, CPoint::Finite(b)) => Ok(Mat2::new(ONE, -2.0 * b, ZERO, -ONE)),
        (CPoint::Finite(a), CPoint::Infinity) => Ok(Mat2::new(-ONE, 2.0 * a, ZERO, ONE)),
        _ => Err(HypError::DegeneratePoints),
    }
}

/// Complex distance between two oriented geodesics, with `Re >= 0` and
/// `Im` in `(-pi, pi]`.
pub fn complex_distance(l1: (CPoint, CPoint), l2: (CPoint, CPoint)) -> Result<C64, HypError> {
    let m1 = line_matrix(l1.0, l1.1)?;
    let m2 = line_matrix(l2.0, l2.1)?;
    let w = (m1 * m2).trace() / 2.0;
    Ok(acosh_branch(w))
}

/// `acosh` normalized to `Re >= 0`, `Im` in `(-pi, pi]`.
pub fn acosh_branch(w: C64) -> C64 {
    let mut d = (w + (w * w - ONE).sqrt()).ln();
    if d.re < 0.0 {
        d = -d;
    }
    let mut im = d.im % (2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    } else if im <= -PI {
        im += 2.0 * PI;
    }
    if d.re.abs() < 1e-15 && im < 0.0 {
        // purely rotational: cosh is even, pick the nonnegative angle
        im = -im;
    }
    C64::new(d.re, im)
}

/// Complex lengths `(l, l')` between the two pairs of opposite edges crossed
/// by the core curve chosen by `pairing`.
pub fn opposite_edge_lengths(t: &IdealTetrahedron, pairing: CorePairing) -> Result<(C64, C64), HypError> {
    let v = t.vertices();
    let [a, b, c, d] = pairing.groups();
    let l = complex_distance((v[a], v[c]), (v[b], v[d]))?;
    let lp = complex_distance((v[a], v[d]), (v[b], v[c]))?;
    Ok((l, lp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_matrix_is_an_involution_fixing_endpoints() {
        let (a, b) = (C64::new(0.3, -1.0), C64::new(2.0, 0.5));
        let m = line_matrix(CPoint::Finite(a), CPoint::Finite(b)).unwrap();
        assert!((m.det() + ONE).norm() < 1e-12);
        assert!((m * m).sub(&Mat2::IDENTITY).norm() < 1e-12);
        let fa = (m.a * a + m.b) / (m.c * a + m.d);
        assert!((fa - a).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_crossing_lines() {
        // 0 -> inf and -1 -> 1 cross at a right angle
        let d = complex_distance(
            (CPoint::new(0.0, 0.0), CPoint::Infinity),
            (CPoint::new(-1.0, 0.0), CPoint::new(1.0, 0.0)),
        )
        .unwrap();
        assert!(d.re.abs() < 1e-12);
        assert!((d.im.abs() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn coaxial_lines_measure_dilation() {
        // lines 0 -> inf and (-1 -> 1) scaled by e^2 are at distance 2
        let k = 2f64.exp();
        let d = complex_distance(
            (CPoint::new(-1.0, 0.0), CPoint::new(1.0, 0.0)),
            (CPoint::new(-k, 0.0), CPoint::new(k, 0.0)),
        )
        .unwrap();
        assert!((d.re - 2.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn degenerate_shapes_rejected() {
        assert!(IdealTetrahedron::new(C64::new(0.5, 0.0)).is_err());
        assert!(IdealTetrahedron::new(C64::new(0.5, -1.0)).is_err());
    }
}
