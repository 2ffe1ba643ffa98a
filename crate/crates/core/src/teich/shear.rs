//! Multiplicative shears, cusp angles and balance residuals.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admissibility::AngleFunction;
use crate::surface::Dart;

use super::triangulation::IdealTriangulation;
use super::TeichError;

/// Positive shear per edge label of the triangulation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ShearPoint {
    pub shears: BTreeMap<u64, f64>,
}

impl ShearPoint {
    pub fn ones(t: &IdealTriangulation) -> Self {
        let l = t.lambda();
        ShearPoint { shears: (0..l.num_edges()).map(|e| (l.edge_label(e), 1.0)).collect() }
    }

    pub fn from_logs(t: &IdealTriangulation, x: &[f64]) -> Self {
        let l = t.lambda();
        ShearPoint { shears: (0..l.num_edges()).map(|e| (l.edge_label(e), x[e].exp())).collect() }
    }

    /// Log-shears per triangulation edge index.
    pub fn logs(&self, t: &IdealTriangulation) -> Result<Vec<f64>, TeichError> {
        let l = t.lambda();
        (0..l.num_edges())
            .map(|e| {
                let label = l.edge_label(e);
                match self.shears.get(&label) {
                    None => Err(TeichError::MissingShear { label }),
                    Some(&s) if !(s > 0.0) || !s.is_finite() => Err(TeichError::NonPositiveShear { label }),
                    Some(&s) => Ok(s.ln()),
                }
            })
            .collect()
    }

    pub fn get(&self, label: u64) -> Option<f64> {
        self.shears.get(&label).copied()
    }

    pub fn set(&mut self, label: u64, value: f64) {
        self.shears.insert(label, value);
    }
}

/// Per-vertex product of shears over incident edge ends, indexed by `eta` vertex.
pub fn cusp_products(t: &IdealTriangulation, s: &ShearPoint) -> Result<Vec<f64>, TeichError> {
    let x = s.logs(t)?;
    let l = t.lambda();
    Ok((0..t.eta().num_vertices())
        .map(|v| {
            let lv = t.lambda_vertex(v);
            l.vertex_darts(lv).iter().map(|&d| x[l.edge(d)]).sum::<f64>().exp()
        })
        .collect())
}

/// Rescales the shears so every cusp product is one, by removing the
/// component of the log-shears normal to the cusp constraints.
pub fn project_to_complete(t: &IdealTriangulation, s: &ShearPoint) -> Result<ShearPoint, TeichError> {
    let x = DVector::from_vec(s.logs(t)?);
    let a = cusp_matrix(t);
    let y = project(&a, &x);
    Ok(ShearPoint::from_logs(t, y.as_slice()))
}

/// Row `v` has the multiplicity of each edge at vertex `v`.
pub(crate) fn cusp_matrix(t: &IdealTriangulation) -> DMatrix<f64> {
    let l = t.lambda();
    let n = t.eta().num_vertices();
    let mut a = DMatrix::zeros(n, l.num_edges());
    for v in 0..n {
        for &d in l.vertex_darts(t.lambda_vertex(v)) {
            a[(v, l.edge(d))] += 1.0;
        }
    }
    a
}

/// `x - A^T (A A^T)^+ A x`.
pub(crate) fn project(a: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    let aat = a * a.transpose();
    let pinv = aat.clone().pseudo_inverse(1e-12).unwrap_or_else(|_| DMatrix::zeros(aat.nrows(), aat.ncols()));
    x - a.transpose() * (pinv * (a * x))
}

/// The walk of triangulation corners around one vertex of `eta`.
#[derive(Debug, Clone)]
pub(crate) struct CuspWalk {
    /// Triangulation darts leaving the vertex in rotation order, starting at
    /// the lowest `eta` dart.
    darts: Vec<Dart>,
    edges: Vec<usize>,
    /// Positions in `darts` of the `eta` darts.
    eta_pos: Vec<usize>,
    /// `eta` darts in rotation order.
    eta_darts: Vec<Dart>,
}

impl CuspWalk {
    pub(crate) fn new(t: &IdealTriangulation, v: usize) -> Self {
        let eta = t.eta();
        let l = t.lambda();
        let start_eta = eta.vertex_darts(v)[0];
        let start = t.lambda_dart(start_eta);
        let mut darts = vec![start];
        let mut x = l.rot(start);
        while x != start {
            darts.push(x);
            x = l.rot(x);
        }
        let edges: Vec<usize> = darts.iter().map(|&d| l.edge(d)).collect();
        let eta_pos: Vec<usize> = (0..darts.len()).filter(|&i| t.is_eta_edge(edges[i])).collect();
        let mut eta_darts = vec![start_eta];
        let mut y = eta.rot(start_eta);
        while y != start_eta {
            eta_darts.push(y);
            y = eta.rot(y);
        }
        debug_assert_eq!(eta_darts.len(), eta_pos.len());
        CuspWalk { darts, edges, eta_pos, eta_darts }
    }

    pub(crate) fn eta_darts(&self) -> &[Dart] {
        &self.eta_darts
    }

    /// Log of the running corner arcs; entry `i` is the corner after dart `i`.
    fn log_arcs(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.darts.len());
        let mut acc = 0.0;
        out.push(acc);
        for i in 1..self.darts.len() {
            acc += x[self.edges[i]];
            out.push(acc);
        }
        out
    }

    /// Log of the product around the vertex.
    pub(crate) fn log_product(&self, x: &[f64]) -> f64 {
        self.edges.iter().map(|&e| x[e]).sum()
    }

    /// Cusp angle tuple, not normalized.
    pub(crate) fn raw_phi(&self, x: &[f64]) -> Vec<f64> {
        let arcs = self.log_arcs(x);
        let k = self.eta_pos.len();
        (0..k)
            .map(|j| {
                let hi = if j + 1 < k { self.eta_pos[j + 1] } else { self.darts.len() };
                (self.eta_pos[j]..hi).map(|i| arcs[i].exp()).sum()
            })
            .collect()
    }

    /// Derivative of `raw_phi[j]` with respect to each edge.
    fn raw_phi_grad(&self, x: &[f64], ne: usize) -> Vec<Vec<f64>> {
        let arcs = self.log_arcs(x);
        let k = self.eta_pos.len();
        let mut grads = vec![vec![0.0; ne]; k];
        for (j, g) in grads.iter_mut().enumerate() {
            let hi = if j + 1 < k { self.eta_pos[j + 1] } else { self.darts.len() };
            for i in self.eta_pos[j]..hi {
                let a = arcs[i].exp();
                for t in 1..=i {
                    g[self.edges[t]] += a;
                }
            }
        }
        grads
    }
}

/// Normalized cusp angles at `eta` vertex `v` (first entry one).
pub fn cusp_angles(t: &IdealTriangulation, s: &ShearPoint, v: usize) -> Result<Vec<f64>, TeichError> {
    let x = s.logs(t)?;
    let walk = CuspWalk::new(t, v);
    let lp = walk.log_product(&x);
    if lp.abs() > 1e-10 {
        return Err(TeichError::IncompleteCusp { vertex: v, product: lp.exp() });
    }
    let phi = walk.raw_phi(&x);
    Ok(phi.iter().map(|p| p / phi[0]).collect())
}

/// Closing sum of a cusp-angle tuple with exterior angles `turns`, where
/// `turns[m]` is the turn before side `m` (entry 0 unused).
pub fn polygon_closing(phi: &[f64], turns: &[f64]) -> Complex64 {
    let mut acc = 0.0;
    let mut z = Complex64::new(0.0, 0.0);
    for (j, p) in phi.iter().enumerate() {
        if j > 0 {
            acc += turns[j];
        }
        z += Complex64::from_polar(*p, acc);
    }
    z
}

/// `(phi_1 - phi_3, phi_2 - phi_4)` for a degree-4 tuple.
pub fn kappa_pair(phi: &[f64]) -> Result<[f64; 2], TeichError> {
    if phi.len() != 4 {
        return Err(TeichError::DegreeNotFour { vertex: usize::MAX, degree: phi.len() });
    }
    Ok([phi[0] - phi[2], phi[1] - phi[3]])
}

/// Per-vertex pair `(phi_1 - phi_3, phi_2 - phi_4)` on normalized tuples.
pub fn kappa_balance_residual(t: &IdealTriangulation, s: &ShearPoint) -> Result<Vec<f64>, TeichError> {
    let mut out = Vec::new();
    for v in 0..t.eta().num_vertices() {
        let deg = t.eta().degree(v);
        if deg != 4 {
            return Err(TeichError::DegreeNotFour { vertex: v, degree: deg });
        }
        let phi = cusp_angles(t, s, v)?;
        out.extend(kappa_pair(&phi)?);
    }
    Ok(out)
}

/// The residual system over log-shears: cusp log-products then closing
/// residuals (real and imaginary parts) per vertex.
#[derive(Debug, Clone)]
pub struct BalanceSystem {
    walks: Vec<CuspWalk>,
    turns: Vec<Vec<f64>>,
    ne: usize,
}

impl BalanceSystem {
    pub fn new(t: &IdealTriangulation, theta: &AngleFunction) -> Result<Self, TeichError> {
        let eta = t.eta();
        let walks: Vec<CuspWalk> = (0..eta.num_vertices()).map(|v| CuspWalk::new(t, v)).collect();
        let mut turns = Vec::with_capacity(walks.len());
        for w in &walks {
            let mut tv = Vec::with_capacity(w.eta_darts.len());
            for &d in &w.eta_darts {
                tv.push(theta.get(eta.label(d))?.radians());
            }
            turns.push(tv);
        }
        Ok(BalanceSystem { walks, turns, ne: t.lambda().num_edges() })
    }

    pub fn num_unknowns(&self) -> usize {
        self.ne
    }

    pub fn num_residuals(&self) -> usize {
        3 * self.walks.len()
    }

    pub fn residual(&self, x: &[f64]) -> DVector<f64> {
        let n = self.walks.len();
        let mut r = DVector::zeros(3 * n);
        for (v, w) in self.walks.iter().enumerate() {
            r[v] = w.log_product(x);
            let phi = w.raw_phi(x);
            let z = polygon_closing(&phi, &self.turns[v]) / phi[0];
            r[n + 2 * v] = z.re;
            r[n + 2 * v + 1] = z.im;
        }
        r
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.walks.len();
        let mut jac = DMatrix::zeros(3 * n, self.ne);
        for (v, w) in self.walks.iter().enumerate() {
            for &e in &w.edges {
                jac[(v, e)] += 1.0;
            }
            let phi = w.raw_phi(x);
            let grads = w.raw_phi_grad(x, self.ne);
            let dirs: Vec<Complex64> = {
                let mut acc = 0.0;
                (0..phi.len())
                    .map(|j| {
                        if j > 0 {
                            acc += self.turns[v][j];
                        }
                        Complex64::from_polar(1.0, acc)
                    })
                    .collect()
            };
            let num: Complex64 = phi.iter().zip(&dirs).map(|(p, d)| d * *p).sum();
            let p0 = phi[0];
            for e in 0..self.ne {
                let dnum: Complex64 = grads.iter().zip(&dirs).map(|(g, d)| d * g[e]).sum();
                let dz = (dnum * p0 - num * grads[0][e]) / (p0 * p0);
                jac[(n + 2 * v, e)] = dz.re;
                jac[(n + 2 * v + 1, e)] = dz.im;
            }
        }
        jac
    }
}

/// Closing residuals only, two reals per vertex.
pub fn closing_residual(t: &IdealTriangulation, theta: &AngleFunction, s: &ShearPoint) -> Result<Vec<f64>, TeichError> {
    let sys = BalanceSystem::new(t, theta)?;
    let x = s.logs(t)?;
    for (v, w) in sys.walks.iter().enumerate() {
        let lp = w.log_product(&x);
        if lp.abs() > 1e-10 {
            return Err(TeichError::IncompleteCusp { vertex: v, product: lp.exp() });
        }
    }
    let r = sys.residual(&x);
    let n = sys.walks.len();
    Ok(r.as_slice()[n..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn closing_of_simple_polygons() {
        let rect = polygon_closing(&[1.0, 0.3, 1.0, 0.3], &[0.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2]);
        assert!(rect.norm() < 1e-15);
        let t = 2.0 * PI / 3.0;
        assert!(polygon_closing(&[1.0, 1.0, 1.0], &[0.0, t, t]).norm() < 1e-15);
        assert!(polygon_closing(&[1.0, 1.0, 2.0], &[0.0, t, t]).norm() > 0.5);
    }
}
