//! Fundamental group words via tree-cotree decomposition, evaluated in a
//! discrete faithful representation built from a regular polygon.

use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::hyp::{CPoint, Isometry, C64};

use super::complex::{CellComplex, Dart};
use super::Homotopy;

/// Letter `k` (1-based) is a generator, `-k` its inverse.
pub type Letter = i32;

/// Products farther than this from the identity are certainly nontrivial.
const SEPARATION: f64 = 1e-3;

pub fn free_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(word: &[Letter]) -> Vec<Letter> {
    let w = free_reduce(word);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

pub fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| -l).collect()
}

#[derive(Debug, Clone)]
struct Tiling {
    relator: Vec<Letter>,
    gens: Vec<Isometry>,
    /// side index carrying `+x` and `-x` for generator `x`
    plus_side: Vec<usize>,
    minus_side: Vec<usize>,
}

impl Tiling {
    fn new(relator: Vec<Letter>, genus: usize) -> Self {
        let m = relator.len();
        let corners: Vec<CPoint> = if genus == 1 {
            (0..m)
                .map(|k| {
                    let a = PI / 4.0 + 2.0 * PI * k as f64 / m as f64;
                    CPoint::Finite(C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, a))
                })
                .collect()
        } else {
            let t = 1.0 / (PI / m as f64).tan();
            let cosh_r: f64 = t * t;
            let rho = (cosh_r.acosh() / 2.0).tanh();
            (0..m).map(|k| CPoint::Finite(C64::from_polar(rho, 2.0 * PI * k as f64 / m as f64))).collect()
        };
        let ngen = m / 2;
        let mut plus_side = vec![0; ngen];
        let mut minus_side = vec![0; ngen];
        for (k, &l) in relator.iter().enumerate() {
            let x = l.unsigned_abs() as usize - 1;
            if l > 0 {
                plus_side[x] = k;
            } else {
                minus_side[x] = k;
            }
        }
        let third = |p: CPoint| -> CPoint {
            if genus == 1 {
                CPoint::Infinity
            } else {
                let z = p.finite().unwrap();
                CPoint::Finite(C64::new(1.0, 0.0) / z.conj())
            }
        };
        let gens = (0..ngen)
            .map(|x| {
                let (i, j) = (plus_side[x], minus_side[x]);
                let src = corners[(j + 1) % m];
                let dst = corners[i];
                Isometry::from_three_points(
                    [src, corners[j], third(src)],
                    [dst, corners[(i + 1) % m], third(dst)],
                )
                .expect("polygon corners are distinct")
            })
            .collect();
        Tiling { relator, gens, plus_side, minus_side }
    }

    /// Steps counterclockwise around the current vertex of the tiling.
    fn rotate(&self, g: &mut Isometry, k: &mut usize) {
        let m = self.relator.len();
        let l = self.relator[*k];
        let x = l.unsigned_abs() as usize - 1;
        if l > 0 {
            *g = g.compose(&self.gens[x]);
            *k = (self.minus_side[x] + 1) % m;
        } else {
            *g = g.compose(&self.gens[x].inverse());
            *k = (self.plus_side[x] + 1) % m;
        }
    }

    fn evaluate(&self, word: &[Letter]) -> (Isometry, f64) {
        let m = self.relator.len();
        let mut g = Isometry::IDENTITY;
        let mut k = 0usize;
        let mut scale: f64 = 1.0;
        for &y in word {
            let mut moved = false;
            for _ in 0..=m {
                if self.relator[k] == y {
                    k = (k + 1) % m;
                    moved = true;
                    break;
                }
                let before = (k + m - 1) % m;
                if self.relator[before] == -y {
                    k = before;
                    moved = true;
                    break;
                }
                self.rotate(&mut g, &mut k);
            }
            assert!(moved, "letter {y} not found around a vertex");
            scale = scale.max(g.matrix().norm());
        }
        for _ in 0..m {
            if k == 0 {
                break;
            }
            self.rotate(&mut g, &mut k);
        }
        scale = scale.max(g.matrix().norm());
        (g, scale)
    }
}

/// Presentation of the fundamental group with a word for every dart.
#[derive(Debug, Clone)]
pub struct SurfaceGroup {
    genus: usize,
    words: Vec<Vec<Letter>>,
    relator: Vec<Letter>,
    tiling: Option<Tiling>,
}

impl SurfaceGroup {
    pub fn new(c: &CellComplex) -> Self {
        let ne = c.num_edges();
        let mut in_tree = vec![false; ne];
        let mut seen_v = vec![false; c.num_vertices()];
        seen_v[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &d in c.vertex_darts(v) {
                let w = c.head(d);
                if !seen_v[w] {
                    seen_v[w] = true;
                    in_tree[c.edge(d)] = true;
                    queue.push_back(w);
                }
            }
        }

        let mut in_cotree = vec![false; ne];
        let mut parent = vec![usize::MAX; c.num_faces()];
        let mut order = vec![0];
        let mut seen_f = vec![false; c.num_faces()];
        seen_f[0] = true;
        let mut head = 0;
        while head < order.len() {
            let f = order[head];
            head += 1;
            for &d in c.face_darts(f) {
                let e = c.edge(d);
                let g = c.face(c.twin(d));
                if in_tree[e] || seen_f[g] {
                    continue;
                }
                seen_f[g] = true;
                in_cotree[e] = true;
                parent[g] = c.twin(d);
                order.push(g);
            }
        }

        let mut words: Vec<Option<Vec<Letter>>> = vec![None; c.num_darts()];
        let mut ngen = 0;
        for e in 0..ne {
            let d = c.edge_dart(e);
            if in_tree[e] {
                words[d] = Some(Vec::new());
                words[c.twin(d)] = Some(Vec::new());
            } else if !in_cotree[e] {
                ngen += 1;
                words[d] = Some(vec![ngen]);
                words[c.twin(d)] = Some(vec![-ngen]);
            }
        }
        for &f in order.iter().skip(1).rev() {
            let p = parent[f];
            let mut rest = Vec::new();
            let mut d = c.next(p);
            while d != p {
                rest.extend(words[d].as_ref().expect("children are resolved first"));
                d = c.next(d);
            }
            let w = free_reduce(&invert(&rest));
            words[c.twin(p)] = Some(invert(&w));
            words[p] = Some(w);
        }
        let words: Vec<Vec<Letter>> = words.into_iter().map(|w| w.expect("every dart has a word")).collect();

        let mut boundary = Vec::new();
        for &d in c.face_darts(0) {
            boundary.extend(&words[d]);
        }
        let relator = cyclic_reduce(&boundary);
        assert_eq!(ngen as usize, 2 * c.genus());
        assert_eq!(relator.len(), 4 * c.genus(), "tree-cotree relator has unexpected length");
        let tiling = (c.genus() >= 1).then(|| Tiling::new(relator.clone(), c.genus()));
        SurfaceGroup { genus: c.genus(), words, relator, tiling }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn relator(&self) -> &[Letter] {
        &self.relator
    }

    pub fn dart_word(&self, d: Dart) -> &[Letter] {
        &self.words[d]
    }

    /// Reduced word of a closed dart sequence.
    pub fn path_word(&self, darts: &[Dart]) -> Vec<Letter> {
        let mut w = Vec::new();
        for &d in darts {
            w.extend(&self.words[d]);
        }
        cyclic_reduce(&w)
    }

    /// Image of a word in the representation.
    pub fn represent(&self, word: &[Letter]) -> Isometry {
        match &self.tiling {
            Some(t) => t.evaluate(word).0,
            None => Isometry::IDENTITY,
        }
    }

    /// Deck generators in the representation.
    pub fn generators(&self) -> Vec<Isometry> {
        self.tiling.as_ref().map(|t| t.gens.clone()).unwrap_or_default()
    }

    /// Matrix verdict on a closed dart sequence.
    pub fn classify(&self, darts: &[Dart]) -> Homotopy {
        let word = self.path_word(darts);
        if word.is_empty() {
            return Homotopy::Trivial;
        }
        let Some(t) = &self.tiling else {
            return Homotopy::Trivial;
        };
        let (g, scale) = t.evaluate(&word);
        let dist = g.distance_from_identity();
        let tol = 1e-9 * scale * scale;
        if dist <= tol {
            Homotopy::Trivial
        } else if dist > SEPARATION.max(10.0 * tol) {
            Homotopy::Nontrivial
        } else {
            Homotopy::Indeterminate
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(cyclic_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
        assert_eq!(invert(&[1, -2]), vec![2, -1]);
    }

    #[test]
    fn relator_maps_to_identity() {
        for faces in [vec![vec![1, 2, -1, -2]], vec![vec![1, 2, -1, -2, 3, 4, -3, -4]]] {
            let c = CellComplex::from_gluing(&faces, None).unwrap();
            let g = SurfaceGroup::new(&c);
            assert!(g.represent(g.relator()).distance_from_identity() < 1e-9);
            for x in 0..2 * c.genus() as i32 {
                assert!(g.represent(&[x + 1]).distance_from_identity() > 0.1);
            }
        }
    }

    #[test]
    fn torus_commutator_is_nontrivial_but_face_is_trivial() {
        let c = CellComplex::from_gluing(&[vec![1, 2, -1, -2]], None).unwrap();
        let g = SurfaceGroup::new(&c);
        assert_eq!(g.classify(c.face_darts(0)), Homotopy::Trivial);
        assert_eq!(g.classify(&[0]), Homotopy::Nontrivial);
        assert_eq!(g.classify(&[0, 1]), Homotopy::Nontrivial);
    }
}
