//! Orbit iteration and plotting.

use std::fmt::Write;

use moebius_core::extended_plane::format_real;
use moebius_core::{Complex64, ExtendedComplex, MoebiusMap};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// `z, f(z), …, fⁿ(z)`.
pub fn iterate(f: &MoebiusMap, z0: ExtendedComplex, n: usize) -> Vec<ExtendedComplex> {
    let mut out = Vec::with_capacity(n + 1);
    let mut z = z0;
    out.push(z);
    for _ in 0..n {
        z = f.apply(z);
        out.push(z);
    }
    out
}

pub fn render_csv(points: &[ExtendedComplex]) -> String {
    let mut s = String::from("k,re,im,infinite\n");
    for (k, p) in points.iter().enumerate() {
        match p {
            ExtendedComplex::Finite(z) => {
                let _ = writeln!(s, "{k},{},{},false", format_real(z.re), format_real(z.im));
            }
            ExtendedComplex::Infinity => {
                let _ = writeln!(s, "{k},,,true");
            }
        }
    }
    s
}

/// Square viewport around the finite points, padded by 10% per side.
struct Viewport {
    min: Complex64,
    extent: f64,
}

impl Viewport {
    fn fit(points: &[Complex64]) -> Viewport {
        if points.is_empty() {
            return Viewport {
                min: Complex64::new(-1.2, -1.2),
                extent: 2.4,
            };
        }
        let (mut lo, mut hi) = (points[0], points[0]);
        for z in points {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let mut span = (hi.re - lo.re).max(hi.im - lo.im);
        if span <= 0.0 {
            span = lo.norm().max(1.0);
        }
        let center = (lo + hi) / 2.0;
        let extent = span * 1.2;
        Viewport {
            min: center - Complex64::new(extent, extent) / 2.0,
            extent,
        }
    }

    fn to_canvas(&self, z: Complex64) -> (f64, f64) {
        let inner = SIZE - 2.0 * MARGIN;
        let x = MARGIN + (z.re - self.min.re) / self.extent * inner;
        let y = SIZE - MARGIN - (z.im - self.min.im) / self.extent * inner;
        (x, y)
    }

    /// Where a ray from the center towards `dir` leaves the frame.
    fn boundary_towards(&self, dir: Complex64) -> (f64, f64) {
        let (cx, cy) = (SIZE / 2.0, SIZE / 2.0);
        let (dx, dy) = if dir.norm() > 0.0 { (dir.re, -dir.im) } else { (1.0, -1.0) };
        let half = SIZE / 2.0 - MARGIN;
        let t = half / dx.abs().max(dy.abs());
        (cx + dx * t, cy + dy * t)
    }

    fn center(&self) -> Complex64 {
        self.min + Complex64::new(self.extent, self.extent) / 2.0
    }
}

/// An SVG plot: a polyline through consecutive finite points, a dot per
/// point, and `∞` drawn as a labeled marker on the frame.
pub fn render_svg(f: &MoebiusMap, points: &[ExtendedComplex]) -> String {
    let finite: Vec<Complex64> = points.iter().filter_map(|p| p.as_finite()).collect();
    let vp = Viewport::fit(&finite);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>orbit of {f}</title>");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let edge = SIZE - 2.0 * MARGIN;
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{edge}" height="{edge}" fill="none" stroke="#999"/>"##
    );
    axes(&vp, &mut s);

    let canvas: Vec<Option<(f64, f64)>> = points
        .iter()
        .enumerate()
        .map(|(k, p)| match p {
            ExtendedComplex::Finite(z) => Some(vp.to_canvas(*z)),
            ExtendedComplex::Infinity => {
                let near = neighbour_direction(points, k).map(|z| z - vp.center()).unwrap_or_default();
                Some(vp.boundary_towards(near))
            }
        })
        .collect();

    // Polyline runs between finite points only.
    let mut run: Vec<(f64, f64)> = Vec::new();
    for (p, c) in points.iter().zip(&canvas) {
        match (p, c) {
            (ExtendedComplex::Finite(_), Some(xy)) => run.push(*xy),
            _ => flush_run(&mut run, &mut s),
        }
    }
    flush_run(&mut run, &mut s);

    for (k, (p, c)) in points.iter().zip(&canvas).enumerate() {
        let Some((x, y)) = c else { continue };
        match p {
            ExtendedComplex::Finite(_) => {
                let fill = if k == 0 { "#c0392b" } else { "#2c3e50" };
                let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="{fill}"/>"#);
            }
            ExtendedComplex::Infinity => {
                let _ = writeln!(
                    s,
                    r##"<rect x="{:.3}" y="{:.3}" width="8" height="8" fill="#8e44ad"/>"##,
                    x - 4.0,
                    y - 4.0
                );
                let (lx, ly) = (x.clamp(MARGIN + 4.0, SIZE - MARGIN - 24.0), y.clamp(MARGIN + 14.0, SIZE - MARGIN - 4.0));
                let _ = writeln!(
                    s,
                    r#"<text x="{lx:.3}" y="{ly:.3}" font-size="12" font-family="sans-serif">∞ (k={k})</text>"#
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Nearest finite orbit point, looking backwards first.
fn neighbour_direction(points: &[ExtendedComplex], k: usize) -> Option<Complex64> {
    points[..k]
        .iter()
        .rev()
        .chain(points[k + 1..].iter())
        .find_map(|p| p.as_finite())
}

fn flush_run(run: &mut Vec<(f64, f64)>, s: &mut String) {
    if run.len() > 1 {
        let coords: Vec<String> = run.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#2980b9" stroke-width="1.5"/>"##,
            coords.join(" ")
        );
    }
    run.clear();
}

fn axes(vp: &Viewport, s: &mut String) {
    let lo = vp.min;
    let hi = vp.min + Complex64::new(vp.extent, vp.extent);
    if lo.im <= 0.0 && 0.0 <= hi.im {
        let (x0, y) = vp.to_canvas(Complex64::new(lo.re, 0.0));
        let (x1, _) = vp.to_canvas(Complex64::new(hi.re, 0.0));
        let _ = writeln!(s, r##"<line x1="{x0:.3}" y1="{y:.3}" x2="{x1:.3}" y2="{y:.3}" stroke="#ccc"/>"##);
    }
    if lo.re <= 0.0 && 0.0 <= hi.re {
        let (x, y0) = vp.to_canvas(Complex64::new(0.0, lo.im));
        let (_, y1) = vp.to_canvas(Complex64::new(0.0, hi.im));
        let _ = writeln!(s, r##"<line x1="{x:.3}" y1="{y0:.3}" x2="{x:.3}" y2="{y1:.3}" stroke="#ccc"/>"##);
    }
}
