//! 2x2 complex matrices acting on the Riemann sphere and on hyperbolic 3-space.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HypError;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CPoint {
    Finite(C64),
    Infinity,
}

impl CPoint {
    pub fn new(re: f64, im: f64) -> Self {
        CPoint::Finite(C64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CPoint::Infinity)
    }

    pub fn finite(&self) -> Option<C64> {
        match self {
            CPoint::Finite(z) => Some(*z),
            CPoint::Infinity => None,
        }
    }

    /// Homogeneous coordinates `(z, 1)` or `(1, 0)`, scaled to unit length.
    pub fn homogeneous(&self) -> [C64; 2] {
        match self {
            CPoint::Finite(z) => {
                let n = (z.norm_sqr() + 1.0).sqrt();
                [z / n, ONE / n]
            }
            CPoint::Infinity => [ONE, ZERO],
        }
    }

    pub fn from_homogeneous(v: [C64; 2]) -> Self {
        let scale = v[0].norm().max(v[1].norm());
        if v[1].norm() <= 1e-300 || v[1].norm() < 1e-15 * scale {
            CPoint::Infinity
        } else {
            CPoint::Finite(v[0] / v[1])
        }
    }

    /// Chordal distance on the unit sphere (bounded by 2).
    pub fn chordal_distance(&self, other: &CPoint) -> f64 {
        let a = self.homogeneous();
        let b = other.homogeneous();
        // |a x b| for unit vectors in C^2 gives half the chordal distance
        2.0 * (a[0] * b[1] - a[1] * b[0]).norm()
    }

    /// Stereographic image on the unit sphere in R^3 (`infinity` is the north pole).
    pub fn to_sphere(&self) -> [f64; 3] {
        match self {
            CPoint::Finite(z) => {
                let r2 = z.norm_sqr();
                let d = 1.0 + r2;
                [2.0 * z.re / d, 2.0 * z.im / d, (r2 - 1.0) / d]
            }
            CPoint::Infinity => [0.0, 0.0, 1.0],
        }
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CPoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            CPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Plain 2x2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: ONE, b: ZERO, c: ZERO, d: ONE };

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    /// Adjugate; equals the inverse when `det == 1`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    pub fn apply_vec(&self, v: [C64; 2]) -> [C64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Orientation-preserving isometry of hyperbolic 3-space: an element of
/// SL(2,C), identified with its negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry(Mat2);

impl Isometry {
    pub const IDENTITY: Isometry = Isometry(Mat2::IDENTITY);

    /// Normalizes `m` to determinant one.
    pub fn from_matrix(m: Mat2) -> Result<Self, HypError> {
        let det = m.det();
        if !(det.norm() > 1e-300) || !det.re.is_finite() || !det.im.is_finite() {
            return Err(HypError::Singular);
        }
        let s = det.sqrt();
        Ok(Isometry(m.scale(ONE / s)))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn inverse(&self) -> Isometry {
        Isometry(self.0.adjugate())
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        renormalize(self.0 * other.0)
    }

    pub fn translation(t: C64) -> Isometry {
        Isometry(Mat2::new(ONE, t, ZERO, ONE))
    }

    /// `z -> k z` for nonzero `k` (loxodromic fixing 0 and infinity).
    pub fn dilation(k: C64) -> Isometry {
        let s = k.sqrt();
        Isometry(Mat2::new(s, ZERO, ZERO, ONE / s))
    }

    /// The unique Möbius map sending `(p, q, r)` to `(0, infinity, 1)`.
    pub fn normalizing(p: CPoint, q: CPoint, r: CPoint) -> Result<Isometry, HypError> {
        // z -> (z - p)(r - q) / ((z - q)(r - p)), written in homogeneous form
        let [p0, p1] = p.homogeneous();
        let [q0, q1] = q.homogeneous();
        let [r0, r1] = r.homogeneous();
        // row vectors annihilating p and q
        let lp = (p1, -p0); // lp . (x, y) = p1 x - p0 y, zero at p
        let lq = (q1, -q0);
        let lpr = lp.0 * r0 + lp.1 * r1;
        let lqr = lq.0 * r0 + lq.1 * r1;
        if lpr.norm() < 1e-14 || lqr.norm() < 1e-14 {
            return Err(HypError::DegeneratePoints);
        }
        let m = Mat2::new(lp.0 * lqr, lp.1 * lqr, lq.0 * lpr, lq.1 * lpr);
        Isometry::from_matrix(m)
    }

    /// The unique Möbius map sending `src[i]` to `dst[i]`.
    pub fn from_three_points(src: [CPoint; 3], dst: [CPoint; 3]) -> Result<Isometry, HypError> {
        let a = Isometry::normalizing(src[0], src[1], src[2])?;
        let b = Isometry::normalizing(dst[0], dst[1], dst[2])?;
        Ok(b.inverse().compose(&a))
    }

    pub fn apply(&self, p: CPoint) -> CPoint {
        CPoint::from_homogeneous(self.0.apply_vec(p.homogeneous()))
    }

    /// Distance to `+I` or `-I`, whichever is closer.
    pub fn distance_from_identity(&self) -> f64 {
        let plus = self.0.sub(&Mat2::IDENTITY).norm();
        let minus = self.0.add(&Mat2::IDENTITY).norm();
        plus.min(minus)
    }

    /// Frobenius distance between the two sign classes.
    pub fn distance(&self, other: &Isometry) -> f64 {
        let plus = self.0.sub(&other.0).norm();
        let minus = self.0.add(&other.0).norm();
        plus.min(minus)
    }

    pub fn conjugate_by(&self, g: &Isometry) -> Isometry {
        g.compose(self).compose(&g.inverse())
    }

    pub fn as_array(&self) -> [[f64; 2]; 4] {
        let m = &self.0;
        [[m.a.re, m.a.im], [m.b.re, m.b.im], [m.c.re, m.c.im], [m.d.re, m.d.im]]
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, o: Isometry) -> Isometry {
        self.compose(&o)
    }
}

fn renormalize(m: Mat2) -> Isometry {
    // products of det-one matrices drift only by rounding
    let det = m.det();
    let s = det.sqrt();
    if (det - ONE).norm() < 1e-15 {
        Isometry(m)
    } else {
        Isometry(m.scale(ONE / s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_map_hits_targets() {
        let src = [CPoint::new(0.3, 0.1), CPoint::Infinity, CPoint::new(-1.0, 2.0)];
        let dst = [CPoint::new(5.0, -1.0), CPoint::new(0.0, 0.0), CPoint::Infinity];
        let m = Isometry::from_three_points(src, dst).unwrap();
        for (s, d) in src.iter().zip(dst.iter()) {
            assert!(m.apply(*s).chordal_distance(d) < 1e-12);
        }
        assert!((m.matrix().det() - ONE).norm() < 1e-12);
    }

    #[test]
    fn normalizing_map_is_the_cross_ratio() {
        let (p, q, r, z) = (C64::new(0.2, 0.5), C64::new(-1.0, 0.3), C64::new(2.0, -0.7), C64::new(0.9, 1.1));
        let m = Isometry::normalizing(CPoint::Finite(p), CPoint::Finite(q), CPoint::Finite(r)).unwrap();
        let expected = (z - p) * (r - q) / ((z - q) * (r - p));
        let got = m.apply(CPoint::Finite(z)).finite().unwrap();
        assert!((got - expected).norm() < 1e-12);
    }

    #[test]
    fn inverse_and_sign_class() {
        let m = Isometry::from_matrix(Mat2::new(
            C64::new(1.0, 2.0),
            C64::new(0.5, 0.0),
            C64::new(-0.3, 0.1),
            C64::new(2.0, -1.0),
        ))
        .unwrap();
        assert!(m.compose(&m.inverse()).distance_from_identity() < 1e-12);
        let neg = Isometry::from_matrix(m.matrix().scale(C64::new(-1.0, 0.0))).unwrap();
        assert!(m.distance(&neg) < 1e-12);
    }

    #[test]
    fn coincident_points_are_rejected() {
        let p = CPoint::new(1.0, 1.0);
        assert!(Isometry::normalizing(p, p, CPoint::Infinity).is_err());
    }
}
