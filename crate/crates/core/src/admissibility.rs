//! Angle functions on edges and the admissibility gate.
//!
//! A pair `(eta, theta)` is admissible when the angles around every vertex
//! of `eta` sum to `2 pi` and every null-homotopic closed non-backtracking
//! path in the dual that does not bound a face has angle sum `> 2 pi`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::{dual, CellComplex, Dart, EdgePath, Homotopy, HomotopyTester};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AngleError {
    #[error("no angle for edge {label}")]
    MissingAngle { label: u64 },
    #[error("angle for edge {label} is outside (0, pi)")]
    OutOfRange { label: u64 },
    #[error("angle for edge {label} has zero denominator")]
    ZeroDenominator { label: u64 },
}

/// An angle, either an exact rational multiple of `pi` or radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleValue {
    PiRational([i64; 2]),
    Radians(f64),
}

impl AngleValue {
    pub fn pi_rational(p: i64, q: i64) -> Self {
        AngleValue::PiRational([p, q])
    }

    pub fn radians(&self) -> f64 {
        match *self {
            AngleValue::PiRational([p, q]) => PI * p as f64 / q as f64,
            AngleValue::Radians(x) => x,
        }
    }

    /// The multiple of `pi`, when exact.
    pub fn ratio(&self) -> Option<Rational64> {
        match *self {
            AngleValue::PiRational([p, q]) if q != 0 => Some(Rational64::new(p, q)),
            _ => None,
        }
    }

    pub fn to_float(&self) -> AngleValue {
        AngleValue::Radians(self.radians())
    }
}

/// Angle per edge label of `eta` (shared with the dual).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AngleFunction {
    pub theta: BTreeMap<u64, AngleValue>,
}

impl AngleFunction {
    pub fn new(theta: BTreeMap<u64, AngleValue>) -> Self {
        AngleFunction { theta }
    }

    /// Same value on every edge of `c`.
    pub fn constant(c: &CellComplex, value: AngleValue) -> Self {
        AngleFunction { theta: (0..c.num_edges()).map(|e| (c.edge_label(e), value)).collect() }
    }

    pub fn get(&self, label: u64) -> Result<AngleValue, AngleError> {
        self.theta.get(&label).copied().ok_or(AngleError::MissingAngle { label })
    }

    pub fn set(&mut self, label: u64, value: AngleValue) {
        self.theta.insert(label, value);
    }

    /// Checks totality on the edges of `c` and the range `(0, pi)`.
    pub fn validate(&self, c: &CellComplex) -> Result<(), AngleError> {
        for e in 0..c.num_edges() {
            let label = c.edge_label(e);
            let v = self.get(label)?;
            if let AngleValue::PiRational([_, 0]) = v {
                return Err(AngleError::ZeroDenominator { label });
            }
            let ok = match v.ratio() {
                Some(r) => r > Rational64::zero() && r < Rational64::from_integer(1),
                None => {
                    let x = v.radians();
                    x > 0.0 && x < PI
                }
            };
            if !ok {
                return Err(AngleError::OutOfRange { label });
            }
        }
        Ok(())
    }

    /// All values converted to radians.
    pub fn to_float(&self) -> AngleFunction {
        AngleFunction { theta: self.theta.iter().map(|(k, v)| (*k, v.to_float())).collect() }
    }

    /// Radians per edge index of `c`.
    pub fn per_edge(&self, c: &CellComplex) -> Result<Vec<f64>, AngleError> {
        (0..c.num_edges()).map(|e| self.get(c.edge_label(e)).map(|v| v.radians())).collect()
    }
}

/// Angle sums measured either exactly, as integers over a common
/// denominator of `pi`, or in radians.
#[derive(Debug, Clone)]
enum Weights {
    /// `pi * w[e] / denom`
    Exact { w: Vec<i128>, denom: i128 },
    Float(Vec<f64>),
}

impl Weights {
    fn new(c: &CellComplex, theta: &AngleFunction) -> Result<Self, AngleError> {
        theta.validate(c)?;
        let mut ratios = Vec::with_capacity(c.num_edges());
        for e in 0..c.num_edges() {
            match theta.get(c.edge_label(e))?.ratio() {
                Some(r) => ratios.push(r),
                None => return Ok(Weights::Float(theta.per_edge(c)?)),
            }
        }
        let mut denom: i128 = 1;
        for r in &ratios {
            let q = *r.denom() as i128;
            let g = gcd(denom, q);
            denom = match (denom / g).checked_mul(q) {
                Some(x) if x < (1i128 << 60) => x,
                _ => return Ok(Weights::Float(theta.per_edge(c)?)),
            };
        }
        let w = ratios.iter().map(|r| *r.numer() as i128 * (denom / *r.denom() as i128)).collect();
        Ok(Weights::Exact { w, denom })
    }

    fn is_exact(&self) -> bool {
        matches!(self, Weights::Exact { .. })
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Sum of angles, kept exact when possible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSum {
    pub radians: f64,
    /// Exact value as a multiple of `pi`, `[p, q]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi_rational: Option<[i64; 2]>,
}

impl AngleSum {
    fn from_parts(weights: &Weights, int_sum: i128, float_sum: f64) -> Self {
        match weights {
            Weights::Exact { denom, .. } => {
                let r = Rational64::new(int_sum as i64, *denom as i64);
                AngleSum { radians: PI * r.to_f64().unwrap_or(f64::NAN), pi_rational: Some([*r.numer(), *r.denom()]) }
            }
            Weights::Float(_) => AngleSum { radians: float_sum, pi_rational: None },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceViolation {
    /// Dual face index, equal to the vertex index in `eta`.
    pub face: usize,
    pub sum: AngleSum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub darts: Vec<Dart>,
    /// Signed edge labels along the path.
    pub labels: Vec<i64>,
    pub sum: AngleSum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub exact: bool,
    pub face_violations: Vec<FaceViolation>,
    pub cycle_violations: Vec<CycleReport>,
    pub indeterminate_cycles: Vec<CycleReport>,
    pub cycles_checked: usize,
    pub length_bound: usize,
    pub enumeration_complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityOptions {
    /// Float-mode tolerance for face sums and strictness margin for cycles.
    pub margin: f64,
    /// Cap on visited partial paths during cycle enumeration.
    pub enumeration_cap: usize,
    /// Dart budget for the cover-ball cross-check (0 disables it).
    pub homotopy_budget: usize,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        AdmissibilityOptions { margin: 1e-9, enumeration_cap: 5_000_000, homotopy_budget: 20_000 }
    }
}

/// Angle sums around the faces of the dual, that is around each vertex of `eta`.
pub fn check_faces(eta: &CellComplex, theta: &AngleFunction) -> Result<Vec<FaceViolation>, AngleError> {
    check_faces_with(eta, theta, 1e-9)
}

fn check_faces_with(eta: &CellComplex, theta: &AngleFunction, tol: f64) -> Result<Vec<FaceViolation>, AngleError> {
    let weights = Weights::new(eta, theta)?;
    let mut out = Vec::new();
    for v in 0..eta.num_vertices() {
        let darts = eta.vertex_darts(v);
        let (int_sum, float_sum) = path_sum(eta, &weights, darts);
        let bad = match &weights {
            Weights::Exact { denom, .. } => int_sum != 2 * denom,
            Weights::Float(_) => (float_sum - 2.0 * PI).abs() > tol,
        };
        if bad {
            out.push(FaceViolation { face: v, sum: AngleSum::from_parts(&weights, int_sum, float_sum) });
        }
    }
    Ok(out)
}

fn path_sum(c: &CellComplex, weights: &Weights, darts: &[Dart]) -> (i128, f64) {
    match weights {
        Weights::Exact { w, .. } => (darts.iter().map(|&d| w[c.edge(d)]).sum(), 0.0),
        Weights::Float(w) => (0, darts.iter().map(|&d| w[c.edge(d)]).sum()),
    }
}

/// Longest path that can have angle sum at most `2 pi`.
pub fn length_bound(theta_min: f64) -> usize {
    if !(theta_min > 0.0) {
        return usize::MAX;
    }
    (2.0 * PI / theta_min + 1e-9).floor() as usize
}

/// Rotation/reversal-invariant key of a closed path.
pub fn canonical_cycle(c: &CellComplex, darts: &[Dart]) -> Vec<Dart> {
    let n = darts.len();
    let rev: Vec<Dart> = darts.iter().rev().map(|&d| c.twin(d)).collect();
    let mut best: Option<Vec<Dart>> = None;
    for seq in [darts, &rev[..]] {
        for s in 0..n {
            let cand: Vec<Dart> = (0..n).map(|i| seq[(s + i) % n]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Canonical keys of the face boundaries of `c`.
fn facial_keys(c: &CellComplex) -> BTreeSet<Vec<Dart>> {
    (0..c.num_faces()).map(|f| canonical_cycle(c, c.face_darts(f))).collect()
}

/// Closed non-backtracking paths in `eta_star` of length at most
/// `2 pi / theta_min`, one per rotation/reversal class, excluding face boundaries.
pub fn enumerate_candidate_cycles(eta_star: &CellComplex, theta_min: f64) -> Vec<EdgePath> {
    let bound = length_bound(theta_min);
    let (cycles, _) = enumerate_cycles(eta_star, bound, usize::MAX, false, |_, _| true);
    cycles.into_iter().map(|d| EdgePath::new(eta_star, d, true).expect("enumerated paths are closed")).collect()
}

/// Like [`enumerate_candidate_cycles`] with an explicit length bound; keeps
/// face boundaries when `include_facial` is set.
pub fn enumerate_cycles_up_to(c: &CellComplex, bound: usize, include_facial: bool) -> Vec<EdgePath> {
    let (cycles, _) = enumerate_cycles(c, bound, usize::MAX, include_facial, |_, _| true);
    cycles.into_iter().map(|d| EdgePath::new(c, d, true).expect("enumerated paths are closed")).collect()
}

/// Depth-first enumeration. `keep(path, dart)` prunes extensions; returns
/// canonical cycles and whether the enumeration finished under `cap`.
fn enumerate_cycles<F>(
    c: &CellComplex,
    bound: usize,
    cap: usize,
    include_facial: bool,
    keep: F,
) -> (BTreeSet<Vec<Dart>>, bool)
where
    F: Fn(&[Dart], Dart) -> bool,
{
    let facial = if include_facial { BTreeSet::new() } else { facial_keys(c) };
    let mut found = BTreeSet::new();
    let mut visited = 0usize;
    let mut complete = true;
    let mut path: Vec<Dart> = Vec::new();
    for d0 in c.darts() {
        if !keep(&[], d0) {
            continue;
        }
        path.clear();
        path.push(d0);
        // stack of next rotation candidates per depth
        let mut stack: Vec<usize> = vec![0];
        while let Some(top) = stack.last_mut() {
            let last = *path.last().unwrap();
            let depth = path.len();
            if *top == 0 {
                visited += 1;
                if visited > cap {
                    complete = false;
                    return (found, complete);
                }
                if c.head(last) == c.tail(d0) && c.twin(last) != d0 {
                    // only record from the smallest dart to limit duplicates
                    if path.iter().all(|&d| d >= d0) || path.iter().all(|&d| c.twin(d) >= d0) {
                        let key = canonical_cycle(c, &path);
                        if !facial.contains(&key) {
                            found.insert(key);
                        }
                    }
                }
            }
            let out = c.vertex_darts(c.head(last));
            if depth >= bound || *top >= out.len() {
                stack.pop();
                path.pop();
                continue;
            }
            let d = out[*top];
            *top += 1;
            if d == c.twin(last) || !keep(&path, d) {
                continue;
            }
            path.push(d);
            stack.push(0);
        }
    }
    (found, complete)
}

/// Full admissibility check of `(eta, theta)`.
pub fn check_admissible(eta: &CellComplex, theta: &AngleFunction) -> Result<AdmissibilityVerdict, AngleError> {
    check_admissible_with(eta, theta, &AdmissibilityOptions::default())
}

pub fn check_admissible_with(
    eta: &CellComplex,
    theta: &AngleFunction,
    opts: &AdmissibilityOptions,
) -> Result<AdmissibilityVerdict, AngleError> {
    let weights = Weights::new(eta, theta)?;
    let face_violations = check_faces_with(eta, theta, opts.margin)?;
    let star = dual(eta);
    let theta_min = theta.per_edge(eta)?.into_iter().fold(f64::INFINITY, f64::min);
    let bound = length_bound(theta_min);

    // prune partial paths whose sum already exceeds 2 pi (plus margin)
    let over = |darts: &[Dart], extra: Dart| -> bool {
        let mut all: Vec<Dart> = darts.to_vec();
        all.push(extra);
        let (i, f) = path_sum(&star, &weights, &all);
        match &weights {
            Weights::Exact { denom, .. } => i <= 2 * denom,
            Weights::Float(_) => f <= 2.0 * PI + opts.margin,
        }
    };
    let (cycles, complete) = enumerate_cycles(&star, bound, opts.enumeration_cap, false, over);
    let cycles: Vec<Vec<Dart>> = cycles.into_iter().collect();

    let tester = HomotopyTester::with_budget(&star, opts.homotopy_budget);
    let verdicts: Vec<Homotopy> = cycles.par_iter().map(|d| tester.classify(d)).collect();

    let mut cycle_violations = Vec::new();
    let mut indeterminate_cycles = Vec::new();
    for (darts, h) in cycles.iter().zip(verdicts) {
        let (i, f) = path_sum(&star, &weights, darts);
        let report = CycleReport {
            darts: darts.clone(),
            labels: darts.iter().map(|&d| star.signed_label(d)).collect(),
            sum: AngleSum::from_parts(&weights, i, f),
        };
        match h {
            Homotopy::Trivial => cycle_violations.push(report),
            Homotopy::Indeterminate => indeterminate_cycles.push(report),
            Homotopy::Nontrivial => {}
        }
    }
    let admissible =
        face_violations.is_empty() && cycle_violations.is_empty() && indeterminate_cycles.is_empty() && complete;
    Ok(AdmissibilityVerdict {
        admissible,
        exact: weights.is_exact(),
        face_violations,
        cycle_violations,
        indeterminate_cycles,
        cycles_checked: cycles.len(),
        length_bound: bound,
        enumeration_complete: complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::midpoint_decomposition;

    fn quarter() -> AngleValue {
        AngleValue::pi_rational(1, 2)
    }

    fn tetra() -> CellComplex {
        CellComplex::from_gluing(&[vec![1, 2, 3], vec![-1, 4, -5], vec![-2, 5, 6], vec![-3, -6, -4]], None)
            .unwrap()
    }

    #[test]
    fn face_sums() {
        let oct = midpoint_decomposition(&tetra());
        let mut theta = AngleFunction::constant(&oct, quarter());
        assert!(check_faces(&oct, &theta).unwrap().is_empty());
        let label = oct.label(oct.vertex_darts(0)[0]);
        theta.set(label, AngleValue::pi_rational(1, 3));
        let v = check_faces(&oct, &theta).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].sum.pi_rational, Some([11, 6]));
        let tet = tetra();
        let third = AngleFunction::constant(&tet, AngleValue::pi_rational(2, 3));
        assert!(check_faces(&tet, &third).unwrap().is_empty());
    }

    #[test]
    fn missing_and_out_of_range() {
        let tet = tetra();
        let empty = AngleFunction::default();
        assert!(matches!(check_faces(&tet, &empty), Err(AngleError::MissingAngle { .. })));
        let bad = AngleFunction::constant(&tet, AngleValue::Radians(4.0));
        assert!(matches!(check_faces(&tet, &bad), Err(AngleError::OutOfRange { .. })));
    }

    #[test]
    fn length_bounds() {
        assert_eq!(length_bound(PI / 2.0), 4);
        assert_eq!(length_bound(2.0 * PI / 3.0), 3);
    }

    #[test]
    fn octahedron_with_right_angles_is_admissible() {
        let oct = midpoint_decomposition(&tetra());
        let theta = AngleFunction::constant(&oct, quarter());
        let v = check_admissible(&oct, &theta).unwrap();
        assert!(v.admissible, "{v:?}");
        assert!(v.exact);
    }
}
