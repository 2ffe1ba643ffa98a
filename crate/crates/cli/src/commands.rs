use std::path::Path;

use serde::Serialize;

use cplab::admissibility::{check_admissible, AdmissibilityVerdict, AngleFunction};
use cplab::develop::{
    develop as develop_surface, extract_pattern, face_shapes, hull_pattern, ideal_hull, verify_delaunay,
    DelaunayReport, HullEdge, HOLONOMY_TOL,
};
use cplab::io::{self, ComplexFile, PatternFile};
use cplab::surface::{validate_polygonal, CellComplex, ValidationReport};
use cplab::teich::{
    closing_residual, complete_triangulation, cusp_products, formal_dimension, solve_balanced, tangent_dimension,
    ShearPoint, SolverOptions,
};

use crate::error::CliError;
use crate::output::{emit, read_input, write_atomic, InputHash, Report};
use crate::render::{self, View};
use crate::ViewArgs;

/// Solutions are re-verified against this closing residual before developing.
const SOLUTION_TOL: f64 = 1e-8;

fn load_complex(path: &Path) -> Result<(CellComplex, InputHash), CliError> {
    let (text, hash) = read_input(path)?;
    Ok((io::parse_complex(&text)?, hash))
}

fn load_theta(path: &Path, c: &CellComplex) -> Result<(AngleFunction, InputHash), CliError> {
    let (text, hash) = read_input(path)?;
    let theta = io::parse_theta(&text)?;
    theta.validate(c)?;
    Ok((theta, hash))
}

#[derive(Serialize)]
struct ValidateResult {
    validation: ValidationReport,
}

pub fn validate(complex: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let (c, h) = load_complex(complex)?;
    let validation = validate_polygonal(&c);
    let passes = validation.passes;
    emit(&Report::new("validate", vec![h], &[], ValidateResult { validation }), out)?;
    if passes {
        Ok(())
    } else {
        Err(CliError::Domain("complex is not a polygonal cell decomposition".into()))
    }
}

#[derive(Serialize)]
struct CheckResult {
    verdict: AdmissibilityVerdict,
}

pub fn check(complex: &Path, theta: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let (c, hc) = load_complex(complex)?;
    let (t, ht) = load_theta(theta, &c)?;
    let verdict = check_admissible(&c, &t)?;
    let admissible = verdict.admissible;
    emit(&Report::new("check", vec![hc, ht], &[], CheckResult { verdict }), out)?;
    if admissible {
        Ok(())
    } else {
        Err(CliError::Domain("angle data is not admissible".into()))
    }
}

#[derive(Serialize)]
struct SolveResult {
    #[serde(flatten)]
    shears: ShearPoint,
    iterations: usize,
    restarts_used: usize,
    residual_norm: f64,
    cusp_residual: f64,
    closing_residual: f64,
    tangent_dimension: usize,
    formal_dimension: i64,
}

pub fn solve(
    complex: &Path,
    theta: &Path,
    warm_start: Option<&Path>,
    opts: &SolverOptions,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if !(opts.tol > 0.0) || !(opts.damping > 0.0) {
        return Err(CliError::Input("--tol and --damping must be positive".into()));
    }
    let (c, hc) = load_complex(complex)?;
    let (t, ht) = load_theta(theta, &c)?;
    let mut inputs = vec![hc, ht];
    let init = match warm_start {
        Some(p) => {
            let (text, h) = read_input(p)?;
            inputs.push(h);
            Some(io::parse_shears(&text)?)
        }
        None => None,
    };
    let tri = complete_triangulation(&c)?;
    let report = solve_balanced(&tri, &t, init.as_ref(), opts)?;
    let tangent = tangent_dimension(&tri, &t, &report.shears)?;
    let result = SolveResult {
        tangent_dimension: tangent,
        formal_dimension: formal_dimension(&tri),
        iterations: report.iterations,
        restarts_used: report.restarts_used,
        residual_norm: report.residual_norm,
        cusp_residual: report.cusp_residual,
        closing_residual: report.closing_residual,
        shears: report.shears,
    };
    emit(&Report::new("solve", inputs, &[("tol", opts.tol)], result), out)
}

#[derive(Serialize)]
struct DevelopResult {
    cusp_residual: f64,
    closing_residual: f64,
    gluing_error: f64,
    max_holonomy: f64,
    /// Largest gap between recovered intersection angles and the input angles.
    max_angle_error: f64,
    delaunay: DelaunayReport,
    pattern: PatternFile,
}

pub fn develop(
    complex: &Path,
    theta: &Path,
    shears: &Path,
    svg: Option<&Path>,
    view: &ViewArgs,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let view = View::from_args(view)?;
    let (c, hc) = load_complex(complex)?;
    let (t, ht) = load_theta(theta, &c)?;
    let (text, hs) = read_input(shears)?;
    let s = io::parse_shears(&text)?;
    let tri = complete_triangulation(&c)?;

    let cusp = cusp_products(&tri, &s)?.iter().map(|p| p.ln().powi(2)).sum::<f64>().sqrt();
    let closing = closing_residual(&tri, &t, &s)?.iter().map(|r| r * r).sum::<f64>().sqrt();
    let shapes = face_shapes(&tri, &s)?;
    let dev = develop_surface(&c, &t, &shapes)?;
    let max_holonomy =
        (0..c.num_vertices()).map(|v| dev.vertex_holonomy(v).distance_from_identity()).fold(0.0, f64::max);
    let pattern = extract_pattern(&dev)?;
    let delaunay = verify_delaunay(&pattern, &c);
    let target = t.per_edge(&c)?;
    let max_angle_error = pattern
        .edge_angles()?
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let file = PatternFile::from_pattern(&pattern);

    if let Some(path) = svg {
        let figure = render::svg(&pattern.circles, &pattern.vertex_points, &file.generator_maps()?, &view);
        write_atomic(Some(path), &figure)?;
    }
    let ok = closing < SOLUTION_TOL && delaunay.passes && max_angle_error < SOLUTION_TOL;
    let result = DevelopResult {
        cusp_residual: cusp,
        closing_residual: closing,
        gluing_error: dev.gluing_error(),
        max_holonomy,
        max_angle_error,
        delaunay,
        pattern: file,
    };
    emit(
        &Report::new("develop", vec![hc, ht, hs], &[("solution", SOLUTION_TOL), ("holonomy", HOLONOMY_TOL)], result),
        out,
    )?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Geometry("developed pattern fails verification".into()))
    }
}

#[derive(Serialize)]
struct HullResult {
    complex: ComplexFile,
    theta: AngleFunction,
    edges: Vec<HullEdge>,
    vertex_angle_sums: Vec<f64>,
    /// Input point index of each vertex of the complex.
    vertex_point: Vec<usize>,
    delaunay: DelaunayReport,
    pattern: PatternFile,
}

pub fn hull(points: &Path, svg: Option<&Path>, view: &ViewArgs, out: Option<&Path>) -> Result<(), CliError> {
    let view = View::from_args(view)?;
    let (text, h) = read_input(points)?;
    let pts = io::parse_points(&text)?;
    let hull = ideal_hull(&pts)?;
    let pattern = hull_pattern(&hull);
    let delaunay = verify_delaunay(&pattern, &hull.complex);
    let theta = AngleFunction::new(
        hull.angles_by_label().into_iter().map(|(l, a)| (l, cplab::admissibility::AngleValue::Radians(a))).collect(),
    );
    if let Some(path) = svg {
        write_atomic(Some(path), &render::svg(&pattern.circles, &pattern.vertex_points, &[], &view))?;
    }
    let passes = delaunay.passes;
    let result = HullResult {
        complex: ComplexFile::from_complex(&hull.complex),
        theta,
        edges: hull.edges.clone(),
        vertex_angle_sums: hull.vertex_angle_sums(),
        vertex_point: hull.vertex_point.clone(),
        delaunay,
        pattern: PatternFile::from_pattern(&pattern),
    };
    emit(&Report::new("hull", vec![h], &[], result), out)?;
    if passes {
        Ok(())
    } else {
        Err(CliError::Geometry("hull pattern fails verification".into()))
    }
}

/// Accepts a bare pattern file or any report carrying one under `"pattern"`.
fn parse_any_pattern(text: &str) -> Result<PatternFile, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let inner = match value {
        serde_json::Value::Object(mut m) if m.contains_key("pattern") => m.remove("pattern").unwrap_or_default(),
        v => v,
    };
    serde_json::from_value(inner).map_err(|e| CliError::Input(format!("not a pattern: {e}")))
}

pub fn render(pattern: &Path, view: &ViewArgs, out: Option<&Path>) -> Result<(), CliError> {
    let view = View::from_args(view)?;
    let (text, _) = read_input(pattern)?;
    let file = parse_any_pattern(&text)?;
    let figure = render::svg(&file.circles()?, &file.points()?, &file.generator_maps()?, &view);
    write_atomic(out, &figure)
}
