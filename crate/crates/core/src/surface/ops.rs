use std::collections::VecDeque;

use super::complex::{CellComplex, Dart};

/// Poincaré dual. Dual vertex `i` is face `i`, dual face `i` is vertex `i`,
/// and darts and edge labels are shared, so `dual(dual(c)) == c`.
pub fn dual(c: &CellComplex) -> CellComplex {
    let next: Vec<Dart> = c.darts().map(|d| c.next(c.twin(d))).collect();
    CellComplex::from_permutations(next, c.twin_perm().to_vec(), c.signed_labels().to_vec(), Some(c.genus()))
        .expect("dual of a valid complex is valid")
}

/// Midpoint decomposition: vertices at edge midpoints, one edge per corner,
/// one face per face and per vertex of `tau`.
///
/// The corner at the head of dart `d` (between `d` and `next(d)`) yields the
/// edge labelled `d + 1`. Its dart `2d` runs inside the face polygon and
/// `2d + 1` inside the polygon around the vertex.
pub fn midpoint_decomposition(tau: &CellComplex) -> CellComplex {
    let n = tau.num_darts();
    let mut next = vec![0; 2 * n];
    let mut twin = vec![0; 2 * n];
    let mut signed = vec![0i64; 2 * n];
    for d in tau.darts() {
        next[2 * d] = 2 * tau.next(d);
        next[2 * d + 1] = 2 * tau.prev(tau.twin(d)) + 1;
        twin[2 * d] = 2 * d + 1;
        twin[2 * d + 1] = 2 * d;
        signed[2 * d] = d as i64 + 1;
        signed[2 * d + 1] = -(d as i64 + 1);
    }
    CellComplex::from_permutations(next, twin, signed, Some(tau.genus()))
        .expect("midpoint decomposition of a valid complex is valid")
}

/// Two-coloring of the vertices with no monochromatic edge, vertex 0 colored 0.
pub fn bipartition(c: &CellComplex) -> Option<Vec<u8>> {
    let nv = c.num_vertices();
    let mut color = vec![u8::MAX; nv];
    for start in 0..nv {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &d in c.vertex_darts(v) {
                let w = c.head(d);
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

/// Relabels darts by `perm` (dart `d` becomes `perm[d]`), keeping edge labels.
pub fn relabel_darts(c: &CellComplex, perm: &[Dart]) -> CellComplex {
    let n = c.num_darts();
    let mut next = vec![0; n];
    let mut twin = vec![0; n];
    let mut signed = vec![0; n];
    for d in c.darts() {
        next[perm[d]] = perm[c.next(d)];
        twin[perm[d]] = perm[c.twin(d)];
        signed[perm[d]] = c.signed_label(d);
    }
    CellComplex::from_permutations(next, twin, signed, Some(c.genus())).expect("relabeling preserves validity")
}

/// Orientation-preserving combinatorial isomorphism `a -> b` as a dart map,
/// ignoring edge labels.
pub fn find_isomorphism(a: &CellComplex, b: &CellComplex) -> Option<Vec<Dart>> {
    if a.num_darts() != b.num_darts()
        || a.num_vertices() != b.num_vertices()
        || a.num_faces() != b.num_faces()
    {
        return None;
    }
    'candidate: for target in b.darts() {
        let mut map = vec![usize::MAX; a.num_darts()];
        let mut used = vec![false; b.num_darts()];
        map[0] = target;
        used[target] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(d) = queue.pop_front() {
            let img = map[d];
            for (x, y) in [(a.next(d), b.next(img)), (a.twin(d), b.twin(img))] {
                if map[x] == usize::MAX {
                    if used[y] {
                        continue 'candidate;
                    }
                    map[x] = y;
                    used[y] = true;
                    queue.push_back(x);
                } else if map[x] != y {
                    continue 'candidate;
                }
            }
        }
        return Some(map);
    }
    None
}
