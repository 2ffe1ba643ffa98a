//! Finite pieces of the universal cover, grown by gluing lifted faces.

use super::complex::{CellComplex, Dart};
use super::{ComplexError, Homotopy};

const NONE: usize = usize::MAX;

/// Default cap on cover darts.
pub const DEFAULT_DART_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Chain {
    first: usize,
    last: usize,
    len: usize,
    closed: bool,
}

/// Face-glued portion of the universal cover around a base dart.
#[derive(Debug, Clone)]
pub struct CoverBall<'a> {
    c: &'a CellComplex,
    base: Dart,
    root: usize,
    radius: usize,
    lift: Vec<Dart>,
    next: Vec<usize>,
    prev: Vec<usize>,
    twin: Vec<usize>,
    face_start: Vec<usize>,
    budget: usize,
    exhausted: bool,
}

impl<'a> CoverBall<'a> {
    /// Ball of the given radius around the lift of `base`; radius counts
    /// layers of faces sharing a vertex with the previous layer.
    pub fn build(c: &'a CellComplex, base: Dart, radius: usize, budget: usize) -> Result<Self, ComplexError> {
        if radius < 1 {
            return Err(ComplexError::BadRadius);
        }
        if base >= c.num_darts() {
            return Err(ComplexError::NoSuchDart { dart: base });
        }
        if !is_polygonal(c) {
            return Err(ComplexError::NotPolygonal);
        }
        let mut ball = Self::seed(c, base, budget);
        ball.grow(radius).map_err(|_| ComplexError::ResourceCap { budget })?;
        Ok(ball)
    }

    /// Just the lifted base face.
    pub(crate) fn seed(c: &'a CellComplex, base: Dart, budget: usize) -> Self {
        let mut ball = CoverBall {
            c,
            base,
            root: 0,
            radius: 0,
            lift: Vec::new(),
            next: Vec::new(),
            prev: Vec::new(),
            twin: Vec::new(),
            face_start: Vec::new(),
            budget,
            exhausted: false,
        };
        ball.root = ball.add_face(base);
        ball
    }

    /// Adds layers until `radius` is reached; stops early when the budget is
    /// exhausted, leaving a valid partial ball.
    pub(crate) fn grow(&mut self, radius: usize) -> Result<(), ()> {
        while self.radius < radius {
            if self.exhausted {
                return Err(());
            }
            let darts = self.lift.len();
            for x in 0..darts {
                if self.complete_star(x).is_err() {
                    self.exhausted = true;
                    return Err(());
                }
            }
            self.radius += 1;
        }
        Ok(())
    }

    /// Lifts `path` growing the ball layer by layer until the verdict is
    /// conclusive, the lift is provably inside, or the budget runs out.
    pub(crate) fn classify(&mut self, path: &[Dart]) -> Homotopy {
        // a closed lift stays within half its length of the start; one extra
        // layer completes the stars at both ends
        let target = path.len() / 2 + 2;
        loop {
            let verdict = self.lift_closed_path(path);
            if verdict != Homotopy::Indeterminate || self.radius >= target || self.exhausted {
                return verdict;
            }
            let _ = self.grow(self.radius + 1);
        }
    }

    pub fn base(&self) -> Dart {
        self.base
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Cover dart lifting the base dart.
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn num_darts(&self) -> usize {
        self.lift.len()
    }

    pub fn num_faces(&self) -> usize {
        self.face_start.len()
    }

    pub fn lift(&self, x: usize) -> Dart {
        self.lift[x]
    }

    pub fn next(&self, x: usize) -> usize {
        self.next[x]
    }

    pub fn twin(&self, x: usize) -> Option<usize> {
        (self.twin[x] != NONE).then_some(self.twin[x])
    }

    /// True if every dart around the tail of `x` is present and glued.
    pub fn star_complete(&self, x: usize) -> bool {
        self.chain(x).closed
    }

    /// Canonical id of the cover vertex at the tail of `x`: the smallest dart
    /// in its partial rotation.
    pub fn vertex_id(&self, x: usize) -> usize {
        self.chain_darts(x).into_iter().min().unwrap()
    }

    /// Base darts of the faces around the tail of the root dart.
    pub fn faces_at_root_vertex(&self) -> Vec<Dart> {
        self.chain_darts(self.root).into_iter().map(|x| self.lift[x]).collect()
    }

    fn add_face(&mut self, b: Dart) -> usize {
        let start = self.lift.len();
        let cycle_len = self.c.face_len(self.c.face(b));
        let mut d = b;
        for k in 0..cycle_len {
            self.lift.push(d);
            self.next.push(start + (k + 1) % cycle_len);
            self.prev.push(start + (k + cycle_len - 1) % cycle_len);
            self.twin.push(NONE);
            d = self.c.next(d);
        }
        self.face_start.push(start);
        start
    }

    fn chain(&self, z: usize) -> Chain {
        let mut y = z;
        loop {
            let t = self.twin[y];
            if t == NONE {
                break;
            }
            let w = self.next[t];
            if w == z {
                let mut len = 1;
                let mut x = self.twin[self.prev[z]];
                while x != z {
                    len += 1;
                    x = self.twin[self.prev[x]];
                }
                return Chain { first: z, last: self.next[self.twin[z]], len, closed: true };
            }
            y = w;
        }
        let first = y;
        let mut x = first;
        let mut len = 1;
        loop {
            let t = self.twin[self.prev[x]];
            if t == NONE {
                break;
            }
            x = t;
            len += 1;
        }
        Chain { first, last: x, len, closed: false }
    }

    fn chain_darts(&self, z: usize) -> Vec<usize> {
        let ch = self.chain(z);
        let mut out = vec![ch.first];
        let mut x = ch.first;
        for _ in 1..ch.len {
            x = self.twin[self.prev[x]];
            out.push(x);
        }
        out
    }

    fn glue(&mut self, x: usize, y: usize) {
        let mut work = vec![(x, y)];
        while let Some((x, y)) = work.pop() {
            debug_assert_eq!(self.lift[y], self.c.twin(self.lift[x]));
            if self.twin[x] == y {
                continue;
            }
            debug_assert!(self.twin[x] == NONE && self.twin[y] == NONE);
            self.twin[x] = y;
            self.twin[y] = x;
            for z in [x, y] {
                let ch = self.chain(z);
                let deg = self.c.degree(self.c.tail(self.lift[z]));
                if !ch.closed && ch.len == deg {
                    work.push((self.prev[ch.last], ch.first));
                }
            }
        }
    }

    fn complete_star(&mut self, x: usize) -> Result<(), ()> {
        loop {
            let ch = self.chain(x);
            if ch.closed {
                return Ok(());
            }
            if self.lift.len() >= self.budget {
                return Err(());
            }
            let f = ch.first;
            let y = self.add_face(self.c.twin(self.lift[f]));
            self.glue(f, y);
        }
    }

    /// Lifts a closed base path starting at the root dart and reports whether
    /// the lift closes up.
    pub fn lift_closed_path(&self, path: &[Dart]) -> Homotopy {
        if path.is_empty() || path[0] != self.base {
            return Homotopy::Indeterminate;
        }
        let mut cur = self.root;
        for &p in &path[1..] {
            let candidates = self.chain_darts(self.next[cur]);
            match candidates.into_iter().find(|&x| self.lift[x] == p) {
                Some(x) => cur = x,
                None => return Homotopy::Indeterminate,
            }
        }
        let end = self.chain(self.next[cur]);
        let end_darts = self.chain_darts(self.next[cur]);
        if end_darts.contains(&self.root) {
            Homotopy::Trivial
        } else if end.closed && self.chain(self.root).closed {
            Homotopy::Nontrivial
        } else {
            Homotopy::Indeterminate
        }
    }
}

/// Star gluing assumes every vertex star and face is at least a triangle.
pub(crate) fn is_polygonal(c: &CellComplex) -> bool {
    (0..c.num_vertices()).all(|v| c.degree(v) >= 3) && (0..c.num_faces()).all(|f| c.face_len(f) >= 3)
}

/// Cover-ball verdict on a closed path, growing the ball as far as the
/// budget allows.
pub fn cover_ball_homotopy(c: &CellComplex, path: &[Dart], budget: usize) -> Homotopy {
    if path.is_empty() {
        return Homotopy::Trivial;
    }
    CoverBall::seed(c, path[0], budget).classify(path)
}
