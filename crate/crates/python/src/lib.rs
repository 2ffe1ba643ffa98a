//! Python bindings: cell complexes, admissibility, the balance solver,
//! development and ideal hulls.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use cplab_core::admissibility::{check_admissible, AngleFunction, AngleValue};
use cplab_core::develop::{develop as develop_surface, extract_pattern, face_shapes, hull_pattern, ideal_hull, verify_delaunay};
use cplab_core::hyp::{intersection_angle, CPoint, Isometry, OrientedCircle};
use cplab_core::io::{self, PatternFile};
use cplab_core::surface::{self, validate_polygonal};
use cplab_core::teich::{complete_triangulation, solve_balanced, tangent_dimension, ShearPoint, SolverOptions};

create_exception!(cplab, CplabError, PyException);
create_exception!(cplab, NotAdmissibleError, CplabError);
create_exception!(cplab, NoConvergenceError, CplabError);
create_exception!(cplab, GeometryError, CplabError);

fn err(e: impl std::fmt::Display) -> PyErr {
    CplabError::new_err(e.to_string())
}

fn teich_err(e: cplab_core::teich::TeichError) -> PyErr {
    use cplab_core::teich::TeichError as T;
    match e {
        T::NotAdmissible => NotAdmissibleError::new_err(e.to_string()),
        T::NoConvergence { .. } => NoConvergenceError::new_err(e.to_string()),
        T::IncompleteCusp { .. } | T::NotASolution { .. } => GeometryError::new_err(e.to_string()),
        _ => err(e),
    }
}

fn develop_err(e: cplab_core::develop::DevelopError) -> PyErr {
    use cplab_core::develop::DevelopError as D;
    match e {
        D::TooFewPoints { .. } | D::Degenerate | D::BadPath => PyValueError::new_err(e.to_string()),
        D::Teich(t) => teich_err(t),
        D::Angle(_) | D::ShapeMismatch { .. } | D::Hyp(_) => err(e),
        _ => GeometryError::new_err(e.to_string()),
    }
}

/// Serializes through JSON into plain Python objects.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn point(z: Option<Complex64>) -> CPoint {
    match z {
        Some(z) => CPoint::Finite(z),
        None => CPoint::Infinity,
    }
}

fn unpoint(p: CPoint) -> Option<Complex64> {
    p.finite()
}

#[derive(FromPyObject)]
enum AngleArg {
    PiRational((i64, i64)),
    Radians(f64),
}

/// Angles keyed by edge label: a float in radians or `(p, q)` for `p/q * pi`.
fn theta_from(map: BTreeMap<u64, AngleArg>) -> AngleFunction {
    AngleFunction::new(
        map.into_iter()
            .map(|(k, v)| {
                let a = match v {
                    AngleArg::PiRational((p, q)) => AngleValue::pi_rational(p, q),
                    AngleArg::Radians(x) => AngleValue::Radians(x),
                };
                (k, a)
            })
            .collect(),
    )
}

/// Closed oriented surface glued from polygons.
#[pyclass(name = "CellComplex", module = "cplab", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCellComplex {
    inner: surface::CellComplex,
}

#[pymethods]
impl PyCellComplex {
    /// `faces` lists signed edge ids per face; each id appears twice.
    #[new]
    #[pyo3(signature = (faces, genus=None))]
    fn new(faces: Vec<Vec<i64>>, genus: Option<usize>) -> PyResult<Self> {
        let inner = surface::CellComplex::from_gluing(&faces, genus).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyCellComplex { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = io::parse_complex(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyCellComplex { inner })
    }

    fn to_json(&self) -> String {
        io::complex_to_json(&self.inner)
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    #[getter]
    fn num_faces(&self) -> usize {
        self.inner.num_faces()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn faces(&self) -> Vec<Vec<i64>> {
        self.inner.to_gluing()
    }

    fn dual(&self) -> Self {
        PyCellComplex { inner: surface::dual(&self.inner) }
    }

    fn midpoint_decomposition(&self) -> Self {
        PyCellComplex { inner: surface::midpoint_decomposition(&self.inner) }
    }

    /// Polygonal decomposition report as a dict.
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &validate_polygonal(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "CellComplex(genus={}, vertices={}, edges={}, faces={})",
            self.inner.genus(),
            self.inner.num_vertices(),
            self.inner.num_edges(),
            self.inner.num_faces()
        )
    }
}

/// Orientation-preserving Möbius map given by a 2x2 complex matrix.
#[pyclass(name = "Mobius", module = "cplab", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyMobius {
    inner: Isometry,
}

#[pymethods]
impl PyMobius {
    #[new]
    fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> PyResult<Self> {
        let m = cplab_core::hyp::Mat2::new(a, b, c, d);
        Ok(PyMobius { inner: Isometry::from_matrix(m).map_err(|e| PyValueError::new_err(e.to_string()))? })
    }

    /// The map sending three distinct points to three distinct points.
    #[staticmethod]
    fn from_three_points(src: [Option<Complex64>; 3], dst: [Option<Complex64>; 3]) -> PyResult<Self> {
        let inner = Isometry::from_three_points(src.map(point), dst.map(point))
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyMobius { inner })
    }

    fn __call__(&self, z: Option<Complex64>) -> Option<Complex64> {
        unpoint(self.inner.apply(point(z)))
    }

    fn __matmul__(&self, other: &PyMobius) -> Self {
        PyMobius { inner: self.inner.compose(&other.inner) }
    }

    fn inverse(&self) -> Self {
        PyMobius { inner: self.inner.inverse() }
    }

    fn matrix(&self) -> [Complex64; 4] {
        let m = self.inner.as_array();
        m.map(|[re, im]| Complex64::new(re, im))
    }

    fn distance_from_identity(&self) -> f64 {
        self.inner.distance_from_identity()
    }
}

/// Exterior intersection angle of the circles through `p` and `q`.
#[pyfunction]
fn circle_angle(p: [Option<Complex64>; 3], q: [Option<Complex64>; 3]) -> PyResult<f64> {
    let through = |t: [Option<Complex64>; 3]| {
        OrientedCircle::through(point(t[0]), point(t[1]), point(t[2])).map_err(|e| PyValueError::new_err(e.to_string()))
    };
    intersection_angle(&through(p)?, &through(q)?).map_err(err)
}

/// Admissibility verdict for angles on `complex` as a dict.
#[pyfunction]
fn check<'py>(py: Python<'py>, complex: &PyCellComplex, theta: BTreeMap<u64, AngleArg>) -> PyResult<Bound<'py, PyAny>> {
    let t = theta_from(theta);
    t.validate(&complex.inner).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &check_admissible(&complex.inner, &t).map_err(err)?)
}

/// Shears of a balanced metric with residuals and the tangent dimension.
#[pyfunction]
#[pyo3(signature = (complex, theta, tol=1e-10, max_iter=500, seed=0, warm_start=None))]
fn solve<'py>(
    py: Python<'py>,
    complex: &PyCellComplex,
    theta: BTreeMap<u64, AngleArg>,
    tol: f64,
    max_iter: usize,
    seed: u64,
    warm_start: Option<BTreeMap<u64, f64>>,
) -> PyResult<Bound<'py, PyDict>> {
    let t = theta_from(theta);
    t.validate(&complex.inner).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let tri = complete_triangulation(&complex.inner).map_err(teich_err)?;
    let opts = SolverOptions { tol, max_iter, seed, ..Default::default() };
    let init = warm_start.map(|shears| ShearPoint { shears });
    let report = py.detach(|| solve_balanced(&tri, &t, init.as_ref(), &opts)).map_err(teich_err)?;
    let dim = tangent_dimension(&tri, &t, &report.shears).map_err(teich_err)?;
    let out = PyDict::new(py);
    out.set_item("shears", report.shears.shears)?;
    out.set_item("iterations", report.iterations)?;
    out.set_item("residual_norm", report.residual_norm)?;
    out.set_item("cusp_residual", report.cusp_residual)?;
    out.set_item("closing_residual", report.closing_residual)?;
    out.set_item("tangent_dimension", dim)?;
    Ok(out)
}

/// Develops a solution; returns the pattern and its Delaunay report.
#[pyfunction]
fn develop<'py>(
    py: Python<'py>,
    complex: &PyCellComplex,
    theta: BTreeMap<u64, AngleArg>,
    shears: BTreeMap<u64, f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let t = theta_from(theta);
    let c = &complex.inner;
    let tri = complete_triangulation(c).map_err(teich_err)?;
    let s = ShearPoint { shears };
    let shapes = face_shapes(&tri, &s).map_err(develop_err)?;
    let dev = develop_surface(c, &t, &shapes).map_err(develop_err)?;
    let pattern = extract_pattern(&dev).map_err(develop_err)?;
    let out = PyDict::new(py);
    out.set_item("pattern", to_py(py, &PatternFile::from_pattern(&pattern))?)?;
    out.set_item("delaunay", to_py(py, &verify_delaunay(&pattern, c))?)?;
    out.set_item("edge_angles", pattern.edge_angles().map_err(develop_err)?)?;
    Ok(out)
}

/// Ideal convex hull of points on the sphere (`None` is infinity).
#[pyfunction]
fn hull<'py>(py: Python<'py>, points: Vec<Option<Complex64>>) -> PyResult<Bound<'py, PyDict>> {
    let pts: Vec<CPoint> = points.into_iter().map(point).collect();
    let h = ideal_hull(&pts).map_err(develop_err)?;
    let pattern = hull_pattern(&h);
    let out = PyDict::new(py);
    out.set_item("complex", PyCellComplex { inner: h.complex.clone() })?;
    out.set_item("angles", h.angles_by_label())?;
    out.set_item("vertex_angle_sums", h.vertex_angle_sums())?;
    out.set_item("vertex_point", h.vertex_point.clone())?;
    out.set_item("pattern", to_py(py, &PatternFile::from_pattern(&pattern))?)?;
    out.set_item("delaunay", to_py(py, &verify_delaunay(&pattern, &h.complex))?)?;
    Ok(out)
}

#[pymodule]
fn cplab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("CplabError", py.get_type::<CplabError>())?;
    m.add("NotAdmissibleError", py.get_type::<NotAdmissibleError>())?;
    m.add("NoConvergenceError", py.get_type::<NoConvergenceError>())?;
    m.add("GeometryError", py.get_type::<GeometryError>())?;
    m.add_class::<PyCellComplex>()?;
    m.add_class::<PyMobius>()?;
    m.add_function(wrap_pyfunction!(circle_angle, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(develop, m)?)?;
    m.add_function(wrap_pyfunction!(hull, m)?)?;
    Ok(())
}
