use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::ComplexError;

/// Index of a directed edge side.
pub type Dart = usize;

/// Oriented polygonal cell decomposition of a closed surface, stored as a
/// rotation system.
///
/// Darts are numbered in the order they appear in the face cycles. The
/// vertex at the tail of `d` is the orbit of `rot = twin . prev`, which turns
/// counterclockwise; the corner between `d` and `rot(d)` lies in `face(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellComplex {
    next: Vec<Dart>,
    prev: Vec<Dart>,
    twin: Vec<Dart>,
    signed: Vec<i64>,
    edge_of: Vec<usize>,
    edge_darts: Vec<Dart>,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    vertex_darts: Vec<Vec<Dart>>,
    face_darts: Vec<Vec<Dart>>,
    genus: usize,
}

impl CellComplex {
    /// Builds the complex from signed face cycles. Each label must occur
    /// exactly twice, once with each sign.
    pub fn from_gluing(faces: &[Vec<i64>], genus_hint: Option<usize>) -> Result<Self, ComplexError> {
        if faces.is_empty() {
            return Err(ComplexError::Empty);
        }
        let mut next = Vec::new();
        let mut signed = Vec::new();
        for (fi, face) in faces.iter().enumerate() {
            if face.is_empty() {
                return Err(ComplexError::EmptyFace { face: fi });
            }
            let start = signed.len();
            for (k, &l) in face.iter().enumerate() {
                if l == 0 {
                    return Err(ComplexError::ZeroLabel);
                }
                signed.push(l);
                next.push(start + (k + 1) % face.len());
            }
        }
        let mut seen: BTreeMap<i64, Vec<Dart>> = BTreeMap::new();
        for (d, &l) in signed.iter().enumerate() {
            seen.entry(l.abs()).or_default().push(d);
        }
        let mut twin = vec![usize::MAX; signed.len()];
        for (label, ds) in &seen {
            if ds.len() != 2 || signed[ds[0]] != -signed[ds[1]] {
                return Err(ComplexError::MissingTwin { label: *label });
            }
            twin[ds[0]] = ds[1];
            twin[ds[1]] = ds[0];
        }
        Self::from_permutations(next, twin, signed, genus_hint)
    }

    /// Builds the complex from explicit permutations. `signed[d]` is the
    /// signed edge label of dart `d`; twins carry opposite signs.
    pub fn from_permutations(
        next: Vec<Dart>,
        twin: Vec<Dart>,
        signed: Vec<i64>,
        genus_hint: Option<usize>,
    ) -> Result<Self, ComplexError> {
        let n = next.len();
        if n == 0 {
            return Err(ComplexError::Empty);
        }
        if twin.len() != n || signed.len() != n {
            return Err(ComplexError::BadPermutation);
        }
        let mut prev = vec![usize::MAX; n];
        for (d, &e) in next.iter().enumerate() {
            if e >= n || prev[e] != usize::MAX {
                return Err(ComplexError::BadPermutation);
            }
            prev[e] = d;
        }
        for d in 0..n {
            let t = twin[d];
            if t >= n || t == d || twin[t] != d || signed[t] != -signed[d] || signed[d] == 0 {
                return Err(ComplexError::BadPermutation);
            }
        }

        let mut face_of = vec![usize::MAX; n];
        let mut face_darts = Vec::new();
        for d in 0..n {
            if face_of[d] != usize::MAX {
                continue;
            }
            let f = face_darts.len();
            let mut cyc = Vec::new();
            let mut x = d;
            loop {
                face_of[x] = f;
                cyc.push(x);
                x = next[x];
                if x == d {
                    break;
                }
            }
            face_darts.push(cyc);
        }

        let mut vertex_of = vec![usize::MAX; n];
        let mut vertex_darts = Vec::new();
        for d in 0..n {
            if vertex_of[d] != usize::MAX {
                continue;
            }
            let v = vertex_darts.len();
            let mut cyc = Vec::new();
            let mut x = d;
            loop {
                vertex_of[x] = v;
                cyc.push(x);
                x = twin[prev[x]];
                if x == d {
                    break;
                }
            }
            vertex_darts.push(cyc);
        }

        let mut edge_of = vec![usize::MAX; n];
        let mut edge_darts = Vec::new();
        for d in 0..n {
            if edge_of[d] != usize::MAX {
                continue;
            }
            let e = edge_darts.len();
            edge_of[d] = e;
            edge_of[twin[d]] = e;
            edge_darts.push(if signed[d] > 0 { d } else { twin[d] });
        }
        let mut labels: Vec<i64> = edge_darts.iter().map(|&d| signed[d]).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::MissingTwin { label: labels[0] });
        }

        // connectivity over darts via next and twin
        let mut reached = vec![false; n];
        let mut queue = VecDeque::from([0]);
        reached[0] = true;
        let mut count = 1;
        while let Some(d) = queue.pop_front() {
            for e in [next[d], twin[d]] {
                if !reached[e] {
                    reached[e] = true;
                    count += 1;
                    queue.push_back(e);
                }
            }
        }
        if count != n {
            return Err(ComplexError::Disconnected);
        }

        let chi = vertex_darts.len() as i64 - edge_darts.len() as i64 + face_darts.len() as i64;
        if chi > 2 || chi % 2 != 0 {
            return Err(ComplexError::InvalidEuler { chi });
        }
        let genus = ((2 - chi) / 2) as usize;
        if let Some(g) = genus_hint {
            if g != genus {
                return Err(ComplexError::GenusMismatch { expected: g, found: genus });
            }
        }

        Ok(CellComplex {
            next,
            prev,
            twin,
            signed,
            edge_of,
            edge_darts,
            vertex_of,
            face_of,
            vertex_darts,
            face_darts,
            genus,
        })
    }

    pub fn num_darts(&self) -> usize {
        self.next.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_darts.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_darts.len()
    }

    pub fn num_faces(&self) -> usize {
        self.face_darts.len()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn next(&self, d: Dart) -> Dart {
        self.next[d]
    }

    pub fn prev(&self, d: Dart) -> Dart {
        self.prev[d]
    }

    pub fn twin(&self, d: Dart) -> Dart {
        self.twin[d]
    }

    /// Counterclockwise successor among darts leaving the same vertex.
    pub fn rot(&self, d: Dart) -> Dart {
        self.twin[self.prev[d]]
    }

    /// Inverse of [`rot`](Self::rot).
    pub fn rot_inv(&self, d: Dart) -> Dart {
        self.next[self.twin[d]]
    }

    pub fn tail(&self, d: Dart) -> usize {
        self.vertex_of[d]
    }

    pub fn head(&self, d: Dart) -> usize {
        self.vertex_of[self.next[d]]
    }

    pub fn face(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    pub fn edge(&self, d: Dart) -> usize {
        self.edge_of[d]
    }

    /// Signed edge label of a dart.
    pub fn signed_label(&self, d: Dart) -> i64 {
        self.signed[d]
    }

    /// Positive edge label.
    pub fn label(&self, d: Dart) -> u64 {
        self.signed[d].unsigned_abs()
    }

    pub fn edge_label(&self, e: usize) -> u64 {
        self.signed[self.edge_darts[e]].unsigned_abs()
    }

    /// The positively signed dart of edge `e`.
    pub fn edge_dart(&self, e: usize) -> Dart {
        self.edge_darts[e]
    }

    pub fn edge_by_label(&self, label: u64) -> Option<usize> {
        self.edge_darts.iter().position(|&d| self.signed[d].unsigned_abs() == label)
    }

    /// Darts leaving `v` in counterclockwise order, starting at the lowest.
    pub fn vertex_darts(&self, v: usize) -> &[Dart] {
        &self.vertex_darts[v]
    }

    /// Boundary darts of `f` in order, starting at the lowest.
    pub fn face_darts(&self, f: usize) -> &[Dart] {
        &self.face_darts[f]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_darts[v].len()
    }

    pub fn face_len(&self, f: usize) -> usize {
        self.face_darts[f].len()
    }

    pub fn darts(&self) -> std::ops::Range<Dart> {
        0..self.num_darts()
    }

    pub fn max_label(&self) -> u64 {
        (0..self.num_edges()).map(|e| self.edge_label(e)).max().unwrap_or(0)
    }

    /// Face cycles with signed labels, the inverse of [`from_gluing`](Self::from_gluing).
    pub fn to_gluing(&self) -> Vec<Vec<i64>> {
        self.face_darts.iter().map(|f| f.iter().map(|&d| self.signed[d]).collect()).collect()
    }

    pub fn next_perm(&self) -> &[Dart] {
        &self.next
    }

    pub fn twin_perm(&self) -> &[Dart] {
        &self.twin
    }

    pub fn signed_labels(&self) -> &[i64] {
        &self.signed
    }
}

/// Sequence of darts, each starting where the previous one ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgePath {
    darts: Vec<Dart>,
    closed: bool,
}

impl EdgePath {
    pub fn new(c: &CellComplex, darts: Vec<Dart>, closed: bool) -> Result<Self, ComplexError> {
        if darts.is_empty() {
            return Err(ComplexError::EmptyPath);
        }
        if let Some(&d) = darts.iter().find(|&&d| d >= c.num_darts()) {
            return Err(ComplexError::NoSuchDart { dart: d });
        }
        for i in 1..darts.len() {
            if c.head(darts[i - 1]) != c.tail(darts[i]) {
                return Err(ComplexError::DiscontinuousPath { index: i });
            }
        }
        if closed && c.head(*darts.last().unwrap()) != c.tail(darts[0]) {
            return Err(ComplexError::DiscontinuousPath { index: darts.len() });
        }
        Ok(EdgePath { darts, closed })
    }

    /// Closed path along the boundary of face `f`.
    pub fn face_boundary(c: &CellComplex, f: usize) -> Self {
        EdgePath { darts: c.face_darts(f).to_vec(), closed: true }
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_non_backtracking(&self, c: &CellComplex) -> bool {
        let n = self.darts.len();
        let pairs = if self.closed { n } else { n.saturating_sub(1) };
        (0..pairs).all(|i| c.twin(self.darts[i]) != self.darts[(i + 1) % n])
    }

    pub fn reversed(&self, c: &CellComplex) -> EdgePath {
        EdgePath { darts: self.darts.iter().rev().map(|&d| c.twin(d)).collect(), closed: self.closed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tetrahedron() -> CellComplex {
        CellComplex::from_gluing(&[vec![1, 2, 3], vec![-1, 4, -5], vec![-2, 5, 6], vec![-3, -6, -4]], None)
            .unwrap()
    }

    #[test]
    fn octagon_counts() {
        let c = CellComplex::from_gluing(&[vec![1, 2, -1, -2, 3, 4, -3, -4]], Some(2)).unwrap();
        assert_eq!((c.num_vertices(), c.num_edges(), c.num_faces(), c.genus()), (1, 4, 1, 2));
    }

    #[test]
    fn torus_counts() {
        let c = CellComplex::from_gluing(&[vec![1, 2, -1, -2]], None).unwrap();
        assert_eq!(c.genus(), 1);
        assert_eq!(c.degree(0), 4);
    }

    #[test]
    fn tetrahedron_counts_and_rotation() {
        let c = tetrahedron();
        assert_eq!((c.num_vertices(), c.num_edges(), c.num_faces(), c.genus()), (4, 6, 4, 0));
        for v in 0..4 {
            assert_eq!(c.degree(v), 3);
        }
        for d in c.darts() {
            assert_eq!(c.rot_inv(c.rot(d)), d);
            assert_eq!(c.tail(c.rot(d)), c.tail(d));
            assert_eq!(c.head(d), c.tail(c.twin(d)));
        }
        assert_eq!(c.to_gluing()[1], vec![-1, 4, -5]);
    }

    #[test]
    fn gluing_errors() {
        assert_eq!(
            CellComplex::from_gluing(&[vec![1, 2, -1]], None),
            Err(ComplexError::MissingTwin { label: 2 })
        );
        assert_eq!(
            CellComplex::from_gluing(&[vec![1, 1, -2, -2]], None),
            Err(ComplexError::MissingTwin { label: 1 })
        );
        assert_eq!(
            CellComplex::from_gluing(&[vec![1, -1], vec![2, -2]], None),
            Err(ComplexError::Disconnected)
        );
        assert!(matches!(
            CellComplex::from_gluing(&[vec![1, 2, -1, -2]], Some(2)),
            Err(ComplexError::GenusMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn path_checks() {
        let c = tetrahedron();
        let f = EdgePath::face_boundary(&c, 0);
        assert!(f.is_non_backtracking(&c));
        let back = EdgePath::new(&c, vec![0, c.twin(0)], true).unwrap();
        assert!(!back.is_non_backtracking(&c));
        assert!(EdgePath::new(&c, vec![0, 0], false).is_err());
    }
}
