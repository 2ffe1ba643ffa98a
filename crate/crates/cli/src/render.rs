use std::fmt::Write;

use cplab::hyp::{CPoint, Isometry, OrientedCircle, C64};

use crate::error::CliError;
use crate::ViewArgs;

const SIZE: f64 = 800.0;
/// Deck images beyond this many group elements are not drawn.
const MAX_IMAGES: usize = 400;

pub struct View {
    center: C64,
    scale: f64,
    copies: usize,
}

impl View {
    pub fn from_args(v: &ViewArgs) -> Result<Self, CliError> {
        let parts: Vec<&str> = v.center.split(',').map(str::trim).collect();
        let bad = || CliError::Input(format!("--center expects re,im, got {:?}", v.center));
        if parts.len() != 2 {
            return Err(bad());
        }
        let re: f64 = parts[0].parse().map_err(|_| bad())?;
        let im: f64 = parts[1].parse().map_err(|_| bad())?;
        if !(v.scale > 0.0) || !v.scale.is_finite() {
            return Err(CliError::Input("--scale must be positive".into()));
        }
        Ok(View { center: C64::new(re, im), scale: v.scale, copies: v.copies })
    }

    fn screen(&self, z: C64) -> (f64, f64) {
        (SIZE / 2.0 + (z.re - self.center.re) * self.scale, SIZE / 2.0 - (z.im - self.center.im) * self.scale)
    }
}

/// Group elements given by reduced words of length `1..=k` in the generators.
fn deck_images(gens: &[Isometry], k: usize) -> Vec<Isometry> {
    let mut letters = Vec::with_capacity(2 * gens.len());
    for g in gens {
        letters.push(*g);
        letters.push(g.inverse());
    }
    let mut out = Vec::new();
    // (element, last letter index)
    let mut frontier: Vec<(Isometry, usize)> = vec![(Isometry::IDENTITY, usize::MAX)];
    for _ in 0..k {
        let mut next = Vec::new();
        for (m, last) in &frontier {
            for (i, l) in letters.iter().enumerate() {
                if *last != usize::MAX && i == (*last ^ 1) {
                    continue;
                }
                let w = m.compose(l);
                if out.len() >= MAX_IMAGES {
                    return out;
                }
                out.push(w);
                next.push((w, i));
            }
        }
        frontier = next;
    }
    out
}

fn draw_circle(svg: &mut String, view: &View, c: &OrientedCircle) {
    match c.euclidean() {
        Some((m, r)) => {
            let (x, y) = view.screen(m);
            let rr = r * view.scale;
            if rr < 0.25 || rr > 1e7 {
                return;
            }
            let _ = writeln!(svg, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{rr:.3}\"/>");
        }
        None => {
            let b = c.b();
            if b.norm() == 0.0 {
                return;
            }
            let z0 = -b * c.c() / (2.0 * b.norm_sqr());
            let dir = C64::new(0.0, 1.0) * b / b.norm();
            let reach = SIZE / view.scale + (z0 - view.center).norm();
            let (x1, y1) = view.screen(z0 - dir * reach);
            let (x2, y2) = view.screen(z0 + dir * reach);
            let _ = writeln!(svg, "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\"/>");
        }
    }
}

/// Circles, with optional deck copies, and finite vertex points.
pub fn svg(circles: &[OrientedCircle], points: &[CPoint], gens: &[Isometry], view: &View) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    if view.copies > 0 && !gens.is_empty() {
        let _ = writeln!(s, "<g fill=\"none\" stroke=\"#9bb7d4\" stroke-width=\"0.8\">");
        for g in deck_images(gens, view.copies) {
            for c in circles {
                draw_circle(&mut s, view, &c.apply(&g));
            }
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "<g fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.2\">");
    for c in circles {
        draw_circle(&mut s, view, c);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "<g fill=\"#c0392b\">");
    for p in points {
        if let CPoint::Finite(z) = p {
            let (x, y) = view.screen(*z);
            let _ = writeln!(s, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2.5\"/>");
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
