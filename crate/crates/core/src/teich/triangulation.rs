use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::surface::{CellComplex, Dart};

use super::TeichError;

/// Fan of one face of `eta` inside the triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceFan {
    /// Triangles of the fan, in order, as faces of the triangulation.
    pub triangles: Vec<usize>,
    /// Labels of the added diagonals, in fan order.
    pub diagonals: Vec<u64>,
}

/// Triangulation completing the 1-skeleton of `eta`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealTriangulation {
    eta: CellComplex,
    lambda: CellComplex,
    is_eta_edge: Vec<bool>,
    eta_dart: Vec<Dart>,
    vertex_map: Vec<usize>,
    fans: Vec<FaceFan>,
    corner: Vec<(usize, usize)>,
}

impl IdealTriangulation {
    pub fn eta(&self) -> &CellComplex {
        &self.eta
    }

    pub fn lambda(&self) -> &CellComplex {
        &self.lambda
    }

    /// Whether triangulation edge `e` comes from `eta`.
    pub fn is_eta_edge(&self, e: usize) -> bool {
        self.is_eta_edge[e]
    }

    /// Triangulation dart carrying the same signed label as `eta` dart `d`.
    pub fn lambda_dart(&self, d: Dart) -> Dart {
        self.eta_dart[d]
    }

    /// Triangulation vertex of `eta` vertex `v`.
    pub fn lambda_vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn fan(&self, f: usize) -> &FaceFan {
        &self.fans[f]
    }

    pub fn num_edges(&self) -> usize {
        self.lambda.num_edges()
    }

    /// For a triangulation dart, the `eta` face containing it and the corner
    /// index (in that face's dart order) of its tail.
    pub fn corner_of(&self, x: Dart) -> (usize, usize) {
        self.corner[x]
    }

    pub fn num_vertices(&self) -> usize {
        self.lambda.num_vertices()
    }
}

/// Fans every face of `eta` from its lowest dart's tail. Diagonals are
/// labelled after the largest existing label, in face order.
pub fn complete_triangulation(eta: &CellComplex) -> Result<IdealTriangulation, TeichError> {
    let n = eta.num_vertices();
    if eta.genus() == 0 && n < 3 {
        return Err(TeichError::Unfillable { genus: 0, vertices: n });
    }
    if let Some(f) = (0..eta.num_faces()).find(|&f| eta.face_len(f) < 3) {
        return Err(TeichError::ShortFace { face: f });
    }
    let mut next_label = eta.max_label() as i64 + 1;
    let mut triangles: Vec<Vec<i64>> = Vec::new();
    let mut fan_tris = Vec::new();
    let mut fan_diags = Vec::new();
    for f in 0..eta.num_faces() {
        let labels: Vec<i64> = eta.face_darts(f).iter().map(|&d| eta.signed_label(d)).collect();
        let k = labels.len();
        let mut tris = Vec::new();
        let mut diags = Vec::new();
        if k == 3 {
            tris.push(triangles.len());
            triangles.push(labels);
        } else {
            // diagonal j runs from corner 0 to corner j, for j = 2..k-2
            let diag: Vec<i64> = (0..k - 3).map(|i| next_label + i as i64).collect();
            next_label += (k - 3) as i64;
            tris.push(triangles.len());
            triangles.push(vec![labels[0], labels[1], -diag[0]]);
            for j in 2..k - 2 {
                tris.push(triangles.len());
                triangles.push(vec![diag[j - 2], labels[j], -diag[j - 1]]);
            }
            tris.push(triangles.len());
            triangles.push(vec![diag[k - 4], labels[k - 2], labels[k - 1]]);
            diags = diag.iter().map(|&l| l as u64).collect();
        }
        fan_tris.push(tris);
        fan_diags.push(diags);
    }
    let lambda = CellComplex::from_gluing(&triangles, Some(eta.genus()))?;

    // triangle order in the gluing equals face order, since each triangle's
    // first dart is new when it is reached
    let mut face_of_triangle = vec![0; triangles.len()];
    let mut start = 0;
    for (t, tri) in triangles.iter().enumerate() {
        face_of_triangle[t] = lambda.face(start);
        start += tri.len();
    }
    let fans: Vec<FaceFan> = fan_tris
        .into_iter()
        .zip(fan_diags)
        .map(|(tris, diagonals)| FaceFan { triangles: tris.iter().map(|&t| face_of_triangle[t]).collect(), diagonals })
        .collect();

    let by_label: HashMap<i64, Dart> = lambda.darts().map(|d| (lambda.signed_label(d), d)).collect();
    let eta_dart: Vec<Dart> = eta.darts().map(|d| by_label[&eta.signed_label(d)]).collect();
    let vertex_map = (0..n).map(|v| lambda.tail(eta_dart[eta.vertex_darts(v)[0]])).collect();
    let max_eta = eta.max_label();
    let is_eta_edge = (0..lambda.num_edges()).map(|e| lambda.edge_label(e) <= max_eta).collect();
    let mut corner = vec![(usize::MAX, usize::MAX); lambda.num_darts()];
    for f in 0..eta.num_faces() {
        for (j, &d) in eta.face_darts(f).iter().enumerate() {
            corner[eta_dart[d]] = (f, j);
        }
        for (i, &label) in fans[f].diagonals.iter().enumerate() {
            let pd = by_label[&(label as i64)];
            corner[pd] = (f, 0);
            corner[lambda.twin(pd)] = (f, i + 2);
        }
    }
    let tri = IdealTriangulation { eta: eta.clone(), lambda, is_eta_edge, eta_dart, vertex_map, fans, corner };
    debug_assert_eq!(tri.lambda.num_vertices(), n);
    Ok(tri)
}

/// `6g - 6 + 3n`.
pub fn expected_edge_count(genus: usize, vertices: usize) -> i64 {
    6 * genus as i64 - 6 + 3 * vertices as i64
}
