use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::hyp::{turning_angle, CPoint, H3Point, HypError, Isometry, C64};
use crate::surface::{CellComplex, Dart, EdgePath};

use super::surface::DevelopedSurface;
use super::DevelopError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BendingMethod {
    /// Points where the axis of the unbent holonomy crosses the edges.
    Axis,
    /// Incircle tangency points of the triangles before each crossing.
    Incircle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BendingReport {
    pub total: f64,
    /// `N * pi` for a path of `N` edges.
    pub bound: f64,
    pub turns: Vec<f64>,
    pub method: BendingMethod,
    pub below_bound: bool,
}

/// Fixed points of a real hyperbolic element, if it is one.
fn axis(h: &Isometry) -> Option<(CPoint, CPoint)> {
    let m = h.matrix();
    let tr = m.trace();
    if tr.re.abs() <= 2.0 + 1e-9 {
        return None;
    }
    let (a, b, c, d) = (m.a, m.b, m.c, m.d);
    if c.norm() < 1e-14 * m.norm() {
        return Some((CPoint::Infinity, CPoint::Finite(b / (d - a))));
    }
    let disc = ((a - d) * (a - d) + b * c * 4.0).sqrt();
    Some((CPoint::Finite((a - d + disc) / (c * 2.0)), CPoint::Finite((a - d - disc) / (c * 2.0))))
}

/// Point where geodesic `pq` crosses the geodesic with ends `ends`, both in
/// one vertical plane.
fn crossing(ends: (CPoint, CPoint), p: CPoint, q: CPoint) -> Option<H3Point> {
    let third = [CPoint::new(0.0, 0.0), CPoint::new(1.0, 0.0), CPoint::new(-1.0, 0.0), CPoint::new(2.0, 0.0)]
        .into_iter()
        .find(|r| r.chordal_distance(&ends.0) > 1e-3 && r.chordal_distance(&ends.1) > 1e-3)?;
    let g = Isometry::normalizing(ends.0, ends.1, third).ok()?;
    let (gp, gq) = (g.apply(p).finite()?, g.apply(q).finite()?);
    if gp.re * gq.re >= 0.0 {
        return None;
    }
    let h = (gp.norm() * gq.norm()).sqrt();
    Some(H3Point::from_upper_half_space(C64::new(0.0, 0.0), h).ok()?.apply(&g.inverse()))
}

/// Foot of the perpendicular from `r` to geodesic `pq`.
fn foot(p: CPoint, q: CPoint, r: CPoint) -> Result<H3Point, HypError> {
    let n = Isometry::normalizing(p, q, r)?;
    Ok(H3Point::from_upper_half_space(C64::new(0.0, 0.0), 1.0)?.apply(&n.inverse()))
}

/// Total turning of a broken geodesic through one point per crossed edge of
/// the closed dual path `p`, in the bent development.
pub fn bending_along(d: &DevelopedSurface, p: &EdgePath) -> Result<BendingReport, DevelopError> {
    let eta = d.complex();
    let darts = p.darts();
    let n = darts.len();
    if n == 0 || !p.is_closed() {
        return Err(DevelopError::BadPath);
    }
    // dual darts: consecutive crossings share a face
    for i in 0..n {
        if eta.face(eta.twin(darts[i])) != eta.face(darts[(i + 1) % n]) || darts[(i + 1) % n] == eta.twin(darts[i]) {
            return Err(DevelopError::BadPath);
        }
    }
    let copies = 3 * n;
    let mut flat = Vec::with_capacity(copies + 1);
    let mut bent = Vec::with_capacity(copies + 1);
    flat.push(Isometry::IDENTITY);
    bent.push(Isometry::IDENTITY);
    for i in 0..copies {
        let x = darts[i % n];
        flat.push(flat[i].compose(d.flat_transition(x)));
        bent.push(bent[i].compose(d.transition(x)));
    }
    let side = |x: usize| {
        let sh = &d.shapes()[eta.face(x)];
        let j = sh.darts.iter().position(|&y| y == x).expect("dart in its face");
        (sh.vertices[j], sh.vertices[(j + 1) % sh.len()], sh.vertices[sh.third[j]])
    };

    let mut points = None;
    if let Some(ends) = axis(&flat[n]) {
        let mut pts = Vec::with_capacity(copies);
        for (i, frame) in flat.iter().take(copies).enumerate() {
            let (a, b, _) = side(darts[i % n]);
            match crossing(ends, frame.apply(a), frame.apply(b)) {
                Some(x) => pts.push(x.apply(&frame.inverse()).apply(&bent[i])),
                None => break,
            }
        }
        if pts.len() == copies {
            points = Some((pts, BendingMethod::Axis));
        }
    }
    let (points, method) = match points {
        Some(v) => v,
        None => {
            let mut pts = Vec::with_capacity(copies);
            for (i, frame) in bent.iter().take(copies).enumerate() {
                let (a, b, r) = side(darts[i % n]);
                pts.push(foot(a, b, r)?.apply(frame));
            }
            (pts, BendingMethod::Incircle)
        }
    };
    let turns: Vec<f64> =
        (n..2 * n).map(|i| turning_angle(&points[i - 1], &points[i], &points[i + 1]).unwrap_or(0.0)).collect();
    let total = turns.iter().sum();
    let bound = n as f64 * std::f64::consts::PI;
    Ok(BendingReport { total, bound, turns, method, below_bound: total < bound })
}

/// Random closed non-backtracking path in the dual graph of `eta`: a random
/// walk of `len` crossings from face 0, closed up by a shortest return.
pub fn random_closed_dual_path<R: Rng>(eta: &CellComplex, len: usize, rng: &mut R) -> Vec<Dart> {
    let step = |last: Dart, rng: &mut R| -> Dart {
        let choices: Vec<Dart> =
            eta.face_darts(eta.face(eta.twin(last))).iter().copied().filter(|&x| x != eta.twin(last)).collect();
        // a one-sided face only allows turning back
        if choices.is_empty() {
            return eta.twin(last);
        }
        choices[rng.random_range(0..choices.len())]
    };
    let first = eta.face_darts(0)[rng.random_range(0..eta.face_len(0))];
    let mut path = vec![first];
    while path.len() < len.max(1) {
        let last = *path.last().expect("nonempty");
        path.push(step(last, rng));
    }
    let done = |y: Dart| eta.face(eta.twin(y)) == 0 && first != eta.twin(y);
    let last = *path.last().expect("nonempty");
    if done(last) {
        return path;
    }
    // shortest non-backtracking return, searching over arrival darts
    let mut from: Vec<Option<Dart>> = vec![None; eta.num_darts()];
    let mut queue = VecDeque::from([last]);
    from[last] = Some(last);
    while let Some(y) = queue.pop_front() {
        if done(y) && y != last {
            let mut tail = vec![y];
            let mut z = y;
            while let Some(p) = from[z] {
                if p == last {
                    break;
                }
                tail.push(p);
                z = p;
            }
            tail.reverse();
            path.extend(tail);
            return path;
        }
        for &x in eta.face_darts(eta.face(eta.twin(y))) {
            if x != eta.twin(y) && from[x].is_none() {
                from[x] = Some(y);
                queue.push_back(x);
            }
        }
    }
    path
}
