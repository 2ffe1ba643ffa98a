//! Damped Gauss-Newton on the stacked balance residual.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::admissibility::{check_admissible, AngleFunction};

use super::shear::{cusp_matrix, project, BalanceSystem, ShearPoint};
use super::triangulation::IdealTriangulation;
use super::TeichError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub step_tol: f64,
    /// Initial line-search step length.
    pub damping: f64,
    pub seed: u64,
    /// Random restarts after a failed run from the initial point.
    pub restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, max_iter: 500, step_tol: 1e-14, damping: 1.0, seed: 0, restarts: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub shears: ShearPoint,
    pub iterations: usize,
    pub restarts_used: usize,
    /// Euclidean norm of the stacked residual.
    pub residual_norm: f64,
    pub cusp_residual: f64,
    pub closing_residual: f64,
}

fn split_norms(r: &DVector<f64>, n: usize) -> (f64, f64) {
    let cusp = r.rows(0, n).norm();
    let closing = r.rows(n, 2 * n).norm();
    (cusp, closing)
}

/// Min-norm least-squares step `-J^+ r`.
fn gauss_newton_step(jac: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
    let svd = jac.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cutoff = smax * 1e-12;
    match svd.solve(r, cutoff) {
        Ok(s) => -s,
        Err(_) => DVector::zeros(jac.ncols()),
    }
}

/// Runs Gauss-Newton from `x0`; returns the final point, residual and iterations.
fn run(sys: &BalanceSystem, x0: DVector<f64>, opts: &SolverOptions) -> (DVector<f64>, DVector<f64>, usize, bool) {
    let mut x = x0;
    let mut r = sys.residual(x.as_slice());
    let mut f = r.norm();
    for it in 0..opts.max_iter {
        if f < opts.tol {
            return (x, r, it, true);
        }
        let jac = sys.jacobian(x.as_slice());
        let step = gauss_newton_step(&jac, &r);
        if step.norm() < opts.step_tol {
            return (x, r, it, false);
        }
        let mut alpha = opts.damping;
        let mut accepted = false;
        while alpha > 1e-10 {
            let trial = &x + &step * alpha;
            let rt = sys.residual(trial.as_slice());
            let ft = rt.norm();
            if ft.is_finite() && ft < f {
                x = trial;
                r = rt;
                f = ft;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return (x, r, it + 1, f < opts.tol);
        }
    }
    let ok = f < opts.tol;
    (x, r, opts.max_iter, ok)
}

/// Finds shears with complete cusps and closing residuals below `opts.tol`.
pub fn solve_balanced(
    t: &IdealTriangulation,
    theta: &AngleFunction,
    init: Option<&ShearPoint>,
    opts: &SolverOptions,
) -> Result<SolveReport, TeichError> {
    let verdict = check_admissible(t.eta(), theta)?;
    if !verdict.admissible {
        return Err(TeichError::NotAdmissible);
    }
    solve_unchecked(t, theta, init, opts)
}

/// As [`solve_balanced`] without the admissibility gate.
pub fn solve_unchecked(
    t: &IdealTriangulation,
    theta: &AngleFunction,
    init: Option<&ShearPoint>,
    opts: &SolverOptions,
) -> Result<SolveReport, TeichError> {
    let sys = BalanceSystem::new(t, theta)?;
    let n = t.eta().num_vertices();
    let ne = sys.num_unknowns();
    let a = cusp_matrix(t);
    let x0 = match init {
        Some(s) => DVector::from_vec(s.logs(t)?),
        None => project(&a, &DVector::zeros(ne)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(DVector<f64>, DVector<f64>, usize)> = None;
    let mut start = x0;
    for attempt in 0..=opts.restarts {
        let (x, r, it, ok) = run(&sys, start.clone(), opts);
        if ok {
            let (cusp, closing) = split_norms(&r, n);
            return Ok(SolveReport {
                shears: ShearPoint::from_logs(t, x.as_slice()),
                iterations: it,
                restarts_used: attempt,
                residual_norm: r.norm(),
                cusp_residual: cusp,
                closing_residual: closing,
            });
        }
        if best.as_ref().is_none_or(|b| r.norm() < b.1.norm()) {
            best = Some((x, r, it));
        }
        let noise = DVector::from_fn(ne, |_, _| rng.random_range(-0.5..0.5));
        start = project(&a, &noise);
    }
    let (_, r, it) = best.expect("at least one attempt ran");
    Err(TeichError::NoConvergence { iterations: it, residual: r.norm() })
}

/// Numerical dimension of the solution set at `s`: unknowns minus the rank
/// of the residual Jacobian (singular values below `1e-6 * max` dropped).
pub fn tangent_dimension(t: &IdealTriangulation, theta: &AngleFunction, s: &ShearPoint) -> Result<usize, TeichError> {
    tangent_dimension_with(t, theta, s, 1e-8, 0)
}

/// `duplicate_rows` appends copies of the first residual rows (rank test hook).
pub fn tangent_dimension_with(
    t: &IdealTriangulation,
    theta: &AngleFunction,
    s: &ShearPoint,
    residual_tol: f64,
    duplicate_rows: usize,
) -> Result<usize, TeichError> {
    let sys = BalanceSystem::new(t, theta)?;
    let x = s.logs(t)?;
    let r = sys.residual(&x);
    if r.norm() > residual_tol {
        return Err(TeichError::NotASolution { residual: r.norm() });
    }
    let mut jac = sys.jacobian(&x);
    if duplicate_rows > 0 {
        let rows = jac.nrows();
        let extra = duplicate_rows.min(rows);
        let mut bigger = DMatrix::zeros(rows + extra, jac.ncols());
        bigger.rows_mut(0, rows).copy_from(&jac);
        for k in 0..extra {
            let row = jac.row(k).clone_owned();
            bigger.row_mut(rows + k).copy_from(&row);
        }
        jac = bigger;
    }
    let sv = jac.singular_values();
    let smax = sv.max();
    let rank = sv.iter().filter(|&&v| v > 1e-6 * smax).count();
    Ok(sys.num_unknowns() - rank)
}

/// `#coordinates - #cusp conditions - #closing conditions`.
pub fn formal_dimension(t: &IdealTriangulation) -> i64 {
    let n = t.eta().num_vertices() as i64;
    t.lambda().num_edges() as i64 - n - 2 * n
}
