//! Points of hyperbolic 3-space as positive Hermitian matrices of determinant one.
//!
//! `X = [[x0 + x3, x1 + i x2], [x1 - i x2, x0 - x3]]`, so `det X` is the
//! Minkowski norm of `(x0, x1, x2, x3)`. Isometries act by `X -> M X M^*`.

use serde::{Deserialize, Serialize};

use super::mobius::{CPoint, Isometry, Mat2, C64};
use super::HypError;

pub type Minkowski = [f64; 4];

/// Minkowski form of signature `(+, -, -, -)`.
pub fn mink_dot(u: &Minkowski, v: &Minkowski) -> f64 {
    u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3]
}

fn to_matrix(x: &Minkowski) -> Mat2 {
    Mat2::new(
        C64::new(x[0] + x[3], 0.0),
        C64::new(x[1], x[2]),
        C64::new(x[1], -x[2]),
        C64::new(x[0] - x[3], 0.0),
    )
}

fn from_matrix(m: &Mat2) -> Minkowski {
    let x0 = 0.5 * (m.a.re + m.d.re);
    let x3 = 0.5 * (m.a.re - m.d.re);
    [x0, m.b.re, m.b.im, x3]
}

/// Lorentz action of an isometry on Minkowski vectors.
pub fn act(m: &Isometry, x: &Minkowski) -> Minkowski {
    let mm = *m.matrix();
    from_matrix(&(mm * to_matrix(x) * mm.adjoint()))
}

/// Null vector of an ideal point.
pub fn ideal_vector(p: CPoint) -> Minkowski {
    match p {
        CPoint::Finite(z) => {
            let r2 = z.norm_sqr();
            [0.5 * (r2 + 1.0), z.re, z.im, 0.5 * (r2 - 1.0)]
        }
        CPoint::Infinity => [0.5, 0.0, 0.0, 0.5],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Point(Minkowski);

impl H3Point {
    /// Upper half-space point `z + t j`.
    pub fn from_upper_half_space(z: C64, t: f64) -> Result<Self, HypError> {
        if !(t > 0.0) {
            return Err(HypError::Domain(format!("height must be positive, got {t}")));
        }
        let r2 = z.norm_sqr();
        let a = (r2 + t * t) / t;
        let c = 1.0 / t;
        Ok(H3Point([0.5 * (a + c), z.re / t, z.im / t, 0.5 * (a - c)]))
    }

    pub fn from_minkowski(x: Minkowski) -> Result<Self, HypError> {
        let n = mink_dot(&x, &x);
        if !(n > 0.0) || x[0] <= 0.0 {
            return Err(HypError::Domain("vector is not future timelike".into()));
        }
        let s = n.sqrt();
        Ok(H3Point([x[0] / s, x[1] / s, x[2] / s, x[3] / s]))
    }

    pub fn origin() -> Self {
        H3Point([1.0, 0.0, 0.0, 0.0])
    }

    pub fn coords(&self) -> &Minkowski {
        &self.0
    }

    pub fn to_upper_half_space(&self) -> (C64, f64) {
        let x = &self.0;
        let c = x[0] - x[3];
        (C64::new(x[1], x[2]) / c, 1.0 / c)
    }

    pub fn apply(&self, m: &Isometry) -> H3Point {
        H3Point(act(m, &self.0))
    }

    pub fn distance(&self, other: &H3Point) -> f64 {
        mink_dot(&self.0, &other.0).max(1.0).acosh()
    }

    /// Unit tangent at `self` pointing toward `other`, as a spacelike vector.
    pub fn direction_to(&self, other: &H3Point) -> Option<Minkowski> {
        let k = mink_dot(&self.0, &other.0);
        let mut u = [0.0; 4];
        for i in 0..4 {
            u[i] = other.0[i] - k * self.0[i];
        }
        let n = -mink_dot(&u, &u);
        if !(n > 1e-28) {
            return None;
        }
        let s = n.sqrt();
        Some([u[0] / s, u[1] / s, u[2] / s, u[3] / s])
    }
}

/// Turning angle at `b` of the broken geodesic `a -> b -> c`; zero when straight.
pub fn turning_angle(a: &H3Point, b: &H3Point, c: &H3Point) -> Option<f64> {
    let back = b.direction_to(a)?;
    let fwd = b.direction_to(c)?;
    // spacelike unit vectors: the Euclidean-like inner product is -<u, v>
    let cos_interior = (-mink_dot(&back, &fwd)).clamp(-1.0, 1.0);
    Some(std::f64::consts::PI - cos_interior.acos())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_half_space_round_trip() {
        let p = H3Point::from_upper_half_space(C64::new(0.4, -1.2), 0.7).unwrap();
        assert!((mink_dot(p.coords(), p.coords()) - 1.0).abs() < 1e-12);
        let (z, t) = p.to_upper_half_space();
        assert!((z - C64::new(0.4, -1.2)).norm() < 1e-12);
        assert!((t - 0.7).abs() < 1e-12);
    }

    #[test]
    fn vertical_distance_is_log_ratio() {
        let p = H3Point::from_upper_half_space(C64::new(0.0, 0.0), 1.0).unwrap();
        let q = H3Point::from_upper_half_space(C64::new(0.0, 0.0), 3.0).unwrap();
        assert!((p.distance(&q) - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn action_matches_upper_half_space_model() {
        let m = Isometry::dilation(C64::new(0.0, 2.0));
        let p = H3Point::from_upper_half_space(C64::new(1.0, 0.0), 1.0).unwrap();
        let (z, t) = p.apply(&m).to_upper_half_space();
        assert!((z - C64::new(0.0, 2.0)).norm() < 1e-12);
        assert!((t - 2.0).abs() < 1e-12);
    }

    #[test]
    fn straight_path_has_no_turn() {
        let pts: Vec<_> = [1.0, 2.0, 5.0]
            .iter()
            .map(|t| H3Point::from_upper_half_space(C64::new(0.0, 0.0), *t).unwrap())
            .collect();
        assert!(turning_angle(&pts[0], &pts[1], &pts[2]).unwrap().abs() < 1e-7);
    }
}
