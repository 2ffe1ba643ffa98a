//! Oriented circles on the Riemann sphere as Hermitian forms.
//!
//! `H = [[a, b], [conj(b), c]]` with `a, c` real. The form is
//! `Q(z) = a|z|^2 + 2 Re(conj(b) z) + c` and the oriented disk is `Q < 0`.

use serde::{Deserialize, Serialize};

use super::mobius::{CPoint, Isometry, C64};
use super::HypError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedCircle {
    a: f64,
    b: C64,
    c: f64,
}

impl OrientedCircle {
    /// Builds and normalizes to `det = -1`.
    pub fn from_hermitian(a: f64, b: C64, c: f64) -> Result<Self, HypError> {
        let det = a * c - b.norm_sqr();
        if !det.is_finite() || !(det < 0.0) {
            return Err(HypError::NotACircle);
        }
        let s = (-det).sqrt();
        if !(s > 0.0) {
            return Err(HypError::NotACircle);
        }
        Ok(OrientedCircle { a: a / s, b: b / s, c: c / s })
    }

    /// The disk `|z - center| < radius`.
    pub fn disk(center: C64, radius: f64) -> Result<Self, HypError> {
        if !(radius > 0.0) {
            return Err(HypError::NotACircle);
        }
        Self::from_hermitian(1.0, -center, center.norm_sqr() - radius * radius)
    }

    /// The lower half-plane, bounded by the real line.
    pub fn lower_half_plane() -> Self {
        OrientedCircle { a: 0.0, b: C64::new(0.0, 1.0), c: 0.0 }
    }

    /// Circle through `p, q, r` whose disk lies to the right of the direction
    /// of travel `p -> q -> r`.
    pub fn through(p: CPoint, q: CPoint, r: CPoint) -> Result<Self, HypError> {
        let m = Isometry::from_three_points(
            [CPoint::new(0.0, 0.0), CPoint::new(1.0, 0.0), CPoint::Infinity],
            [p, q, r],
        )?;
        Ok(Self::lower_half_plane().apply(&m))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b.norm_sqr()
    }

    pub fn normalized(&self) -> Result<Self, HypError> {
        Self::from_hermitian(self.a, self.b, self.c)
    }

    /// The same circle bounding the complementary disk.
    pub fn reversed(&self) -> Self {
        OrientedCircle { a: -self.a, b: -self.b, c: -self.c }
    }

    /// Polarized determinant; equals `-1` on a normalized circle with itself.
    pub fn pairing(&self, other: &OrientedCircle) -> f64 {
        0.5 * (self.a * other.c + other.a * self.c) - (self.b * other.b.conj()).re
    }

    /// Value of the Hermitian form on the unit lift of `p`. Negative inside the
    /// disk, zero on the circle.
    pub fn evaluate(&self, p: CPoint) -> f64 {
        let [x, y] = p.homogeneous();
        self.a * x.norm_sqr() + 2.0 * (self.b.conj() * x * y.conj()).re + self.c * y.norm_sqr()
    }

    /// Image under an isometry: `H -> (m^-1)^* H m^-1`.
    pub fn apply(&self, m: &Isometry) -> OrientedCircle {
        let inv = *m.inverse().matrix();
        let h = super::mobius::Mat2::new(C64::new(self.a, 0.0), self.b, self.b.conj(), C64::new(self.c, 0.0));
        let out = inv.adjoint() * h * inv;
        OrientedCircle { a: out.a.re, b: out.b, c: out.d.re }
    }

    /// Euclidean center and radius, or `None` for a line.
    pub fn euclidean(&self) -> Option<(C64, f64)> {
        if self.a.abs() < 1e-14 * (self.b.norm() + self.c.abs()).max(1.0) {
            return None;
        }
        let m = -self.b / self.a;
        let r2 = m.norm_sqr() - self.c / self.a;
        Some((m, r2.max(0.0).sqrt()))
    }

    /// True if the disk is the bounded side (for circles not through infinity).
    pub fn disk_is_bounded(&self) -> bool {
        self.a > 0.0
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b.re, self.b.im, self.c]
    }

    pub fn from_array(v: [f64; 4]) -> Result<Self, HypError> {
        Self::from_hermitian(v[0], C64::new(v[1], v[2]), v[3])
    }
}

/// Angle between the outward normals of the two disks at a crossing point.
///
/// Disjoint or nested circles yield `NoIntersection`.
pub fn intersection_angle(x: &OrientedCircle, y: &OrientedCircle) -> Result<f64, HypError> {
    let b = x.pairing(y) / (x.det() * y.det()).abs().sqrt();
    if !b.is_finite() {
        return Err(HypError::NotACircle);
    }
    if b.abs() > 1.0 + 1e-12 {
        return Err(HypError::NoIntersection { inversive_distance: b.abs() });
    }
    Ok((-b).clamp(-1.0, 1.0).acos())
}
