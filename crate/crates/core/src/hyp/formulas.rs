//! Closed-form hyperbolic plane formulas.

use std::f64::consts::PI;

use super::HypError;

/// Angle tolerance used by the domain checks below.
const DOMAIN_TOL: f64 = 0.0;

/// Distance from a point to a line seen under visual angle `phi`:
/// `arccosh(1 / sin(phi / 2))`.
pub fn perp_distance(phi: f64) -> Result<f64, HypError> {
    if !(phi > DOMAIN_TOL && phi <= PI) {
        return Err(HypError::Domain(format!("perp_distance needs 0 < phi <= pi, got {phi}")));
    }
    let s = (phi / 2.0).sin();
    Ok((1.0 / s).max(1.0).acosh())
}

/// `2 arccos(sech(L / 2))`.
pub fn roof_bound(length: f64) -> Result<f64, HypError> {
    if !(length >= 0.0) {
        return Err(HypError::Domain(format!("roof_bound needs L >= 0, got {length}")));
    }
    let sech = 1.0 / (length / 2.0).cosh();
    Ok(2.0 * sech.clamp(-1.0, 1.0).acos())
}

/// Area of a compact convex polygon with the given exterior angles,
/// by Gauss-Bonnet: `sum(theta) - 2 pi`.
///
/// A sum equal to `2 pi` (within `tol`) is the degenerate zero-area case.
pub fn polygon_area(thetas: &[f64]) -> Result<f64, HypError> {
    polygon_area_tol(thetas, 1e-12)
}

pub fn polygon_area_tol(thetas: &[f64], tol: f64) -> Result<f64, HypError> {
    if let Some(t) = thetas.iter().find(|t| !(**t > 0.0 && **t < PI)) {
        return Err(HypError::Domain(format!("exterior angle {t} outside (0, pi)")));
    }
    let sum: f64 = thetas.iter().sum();
    let area = sum - 2.0 * PI;
    if area < -tol {
        return Err(HypError::NegativeArea { sum });
    }
    Ok(area.max(0.0))
}

/// Largest area enclosed by a loop of length `L`: `sqrt(L^2 + 4 pi^2) - 2 pi`.
pub fn isoperimetric_max_area(length: f64) -> Result<f64, HypError> {
    if !(length >= 0.0) {
        return Err(HypError::Domain(format!("length must be >= 0, got {length}")));
    }
    // written to avoid cancellation for small L
    let l2 = length * length;
    Ok(l2 / ((l2 + 4.0 * PI * PI).sqrt() + 2.0 * PI))
}

/// Length of a loop bounding the maximal area `A`: `sqrt(A^2 + 4 pi A)`.
pub fn isoperimetric_length(area: f64) -> f64 {
    (area * area + 4.0 * PI * area).sqrt()
}

/// Area of a hyperbolic disk of radius `r`.
pub fn circle_area(r: f64) -> f64 {
    2.0 * PI * (r.cosh() - 1.0)
}

/// Circumference of a hyperbolic circle of radius `r`.
pub fn circle_length(r: f64) -> f64 {
    2.0 * PI * r.sinh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn perp_distance_endpoints() {
        assert_eq!(perp_distance(PI).unwrap(), 0.0);
        assert!(perp_distance(1e-8).unwrap() > 15.0);
        assert!(perp_distance(0.0).is_err());
        assert!(perp_distance(-1.0).is_err());
    }

    #[test]
    fn roof_bound_limits() {
        assert_eq!(roof_bound(0.0).unwrap(), 0.0);
        assert!((roof_bound(200.0).unwrap() - PI).abs() < 1e-12);
        assert!(roof_bound(-1.0).is_err());
    }

    #[test]
    fn polygon_area_cases() {
        assert!((polygon_area(&[FRAC_PI_2; 5]).unwrap() - FRAC_PI_2).abs() < 1e-14);
        assert_eq!(polygon_area(&[FRAC_PI_2; 4]).unwrap(), 0.0);
        assert!(matches!(polygon_area(&[FRAC_PI_2; 3]), Err(HypError::NegativeArea { .. })));
        let oct = polygon_area(&[3.0 * PI / 4.0; 8]).unwrap();
        assert!((oct - 4.0 * PI).abs() < 1e-12);
        // a compact polygon is smaller than the ideal one with the same vertex count
        assert!(oct < 6.0 * PI);
        assert!(polygon_area(&[PI, 2.0, 2.0, 2.0]).is_err());
    }

    #[test]
    fn isoperimetric_round_trip() {
        assert_eq!(isoperimetric_max_area(0.0).unwrap(), 0.0);
        let l = isoperimetric_length(1.0);
        assert!((l - (1.0 + 4.0 * PI).sqrt()).abs() < 1e-12);
        assert!((isoperimetric_max_area(l).unwrap() - 1.0).abs() < 1e-12);
    }
}
