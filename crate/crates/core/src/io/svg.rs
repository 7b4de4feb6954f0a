use std::collections::BTreeSet;
use std::fmt::Write;

use super::files::Dump;
use crate::lorentz::{DiskPoint, HPoint, LorentzIsometry};

/// The geodesic through two disk points: a diameter or a circle orthogonal
/// to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arc {
    Line,
    Circle { center: [f64; 2], radius: f64 },
}

pub fn geodesic_arc(p: [f64; 2], q: [f64; 2]) -> Arc {
    let det = p[0] * q[1] - p[1] * q[0];
    let scale = (p[0].hypot(p[1]) * q[0].hypot(q[1])).max(1e-300);
    if det.abs() <= 1e-12 * scale {
        return Arc::Line;
    }
    // |c - p|² = |c|² - 1  ⇔  c·p = (|p|² + 1) / 2, and likewise for q.
    let a = 0.5 * (p[0] * p[0] + p[1] * p[1] + 1.0);
    let b = 0.5 * (q[0] * q[0] + q[1] * q[1] + 1.0);
    let center = [(a * q[1] - b * p[1]) / det, (p[0] * b - q[0] * a) / det];
    let radius = (center[0] * center[0] + center[1] * center[1] - 1.0).max(0.0).sqrt();
    Arc::Circle { center, radius }
}

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub size: u32,
    pub sites: bool,
    pub centroids: bool,
    /// Draw the cells translated by every tile of the dump.
    pub tiles: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { size: 800, sites: true, centroids: true, tiles: true }
    }
}

const EDGE: &str = "#1f4fd1";
const CENTROID: &str = "#1a9641";

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" { "0.000000".into() } else { s }
}

fn segment(out: &mut String, p: [f64; 2], q: [f64; 2], first: bool) {
    if first {
        let _ = write!(out, "M{} {}", num(p[0]), num(p[1]));
    }
    match geodesic_arc(p, q) {
        Arc::Line => {
            let _ = write!(out, " L{} {}", num(q[0]), num(q[1]));
        }
        Arc::Circle { center, radius } => {
            let cross = (p[0] - center[0]) * (q[1] - center[1]) - (p[1] - center[1]) * (q[0] - center[0]);
            let sweep = u8::from(cross > 0.0);
            let _ = write!(out, " A{} {} 0 0 {sweep} {} {}", num(radius), num(radius), num(q[0]), num(q[1]));
        }
    }
}

fn path(chain: &[[f64; 2]]) -> String {
    let mut d = String::new();
    for (k, w) in chain.windows(2).enumerate() {
        segment(&mut d, w[0], w[1], k == 0);
    }
    d
}

fn key(p: [f64; 2]) -> (i64, i64) {
    ((p[0] * 1e9).round() as i64, (p[1] * 1e9).round() as i64)
}

fn map_point(m: &LorentzIsometry, p: [f64; 2]) -> Option<[f64; 2]> {
    let h = HPoint::from_disk(DiskPoint::new(p[0], p[1]).ok()?).ok()?;
    let d = m.apply(&h).to_disk();
    Some([d.u, d.v])
}

/// Interior cell edges of the dump (each drawn once), optionally translated.
fn edges(dump: &Dump, m: Option<&LorentzIsometry>) -> Vec<([f64; 2], [f64; 2])> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for cell in &dump.cells {
        let n = cell.vertices.len();
        for i in 0..n {
            if cell.neighbors.get(i).copied().flatten().is_none() {
                continue;
            }
            let (mut p, mut q) = (cell.vertices[i], cell.vertices[(i + 1) % n]);
            if let Some(m) = m {
                match (map_point(m, p), map_point(m, q)) {
                    (Some(a), Some(b)) => (p, q) = (a, b),
                    _ => continue,
                }
            }
            let (a, b) = (key(p), key(q));
            if a == b || !seen.insert(if a < b { (a, b) } else { (b, a) }) {
                continue;
            }
            out.push((p, q));
        }
    }
    out
}

/// Deterministic SVG of a dump in the Poincaré disk: unit circle, domain
/// boundary, cell edges in blue, sites in black and centroids in green.
pub fn render_svg(dump: &Dump, opts: &RenderOptions) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"-1.05 -1.05 2.1 2.1\">",
        opts.size
    );
    s.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-linecap=\"round\">\n");
    s.push_str("<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\" stroke=\"#000000\" stroke-width=\"0.004\"/>\n");
    if opts.tiles {
        for t in dump.tiles.iter().flatten().skip(1) {
            let m = nalgebra::Matrix3::from_row_slice(t);
            let Ok(m) = LorentzIsometry::with_tolerance(m, 1e-6) else { continue };
            for (p, q) in edges(dump, Some(&m)) {
                let _ = writeln!(
                    s,
                    "<path class=\"tile-edge\" d=\"{}\" stroke=\"#9db3e8\" stroke-width=\"0.002\"/>",
                    path(&[p, q])
                );
            }
        }
    }
    for chain in &dump.domain {
        let _ = writeln!(s, "<path class=\"domain\" d=\"{}\" stroke=\"#000000\" stroke-width=\"0.006\"/>", path(chain));
    }
    for (p, q) in edges(dump, None) {
        let _ = writeln!(s, "<path class=\"edge\" d=\"{}\" stroke=\"{EDGE}\" stroke-width=\"0.003\"/>", path(&[p, q]));
    }
    if opts.sites {
        for site in &dump.sites {
            let _ = writeln!(
                s,
                "<circle class=\"site\" cx=\"{}\" cy=\"{}\" r=\"0.006\" fill=\"#000000\"/>",
                num(site.u),
                num(site.v)
            );
        }
    }
    if opts.centroids {
        for c in dump.centroids.iter().flatten() {
            let _ = writeln!(
                s,
                "<circle class=\"centroid\" cx=\"{}\" cy=\"{}\" r=\"0.008\" fill=\"{CENTROID}\"/>",
                num(c[0]),
                num(c[1])
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diameter_through_origin() {
        assert_eq!(geodesic_arc([-0.5, 0.0], [0.3, 0.0]), Arc::Line);
        assert_eq!(geodesic_arc([0.0, 0.0], [0.3, 0.4]), Arc::Line);
        let mut d = String::new();
        segment(&mut d, [-0.5, -0.5], [0.5, 0.5], true);
        assert!(d.contains(" L") && !d.contains(" A"));
    }

    #[test]
    fn arcs_are_orthogonal_to_the_boundary() {
        let p = [0.9 * 0.3f64.cos(), 0.9 * 0.3f64.sin()];
        let q = [0.9 * 2.0f64.cos(), 0.9 * 2.0f64.sin()];
        let Arc::Circle { center, radius } = geodesic_arc(p, q) else { panic!("expected an arc") };
        let c2 = center[0] * center[0] + center[1] * center[1];
        assert!(c2 > 1.0);
        assert!((c2 - radius * radius - 1.0).abs() < 1e-9);
        for x in [p, q] {
            assert!(((x[0] - center[0]).hypot(x[1] - center[1]) - radius).abs() < 1e-12);
        }
    }

    #[test]
    fn arc_follows_the_geodesic() {
        // The hyperbolic midpoint lies on the drawn circle.
        let (a, b) = (HPoint::from_polar(1.5, 0.2).unwrap(), HPoint::from_polar(2.0, 1.9).unwrap());
        let mid = crate::lorentz::geodesic_point(&a, &b, 0.5).unwrap().to_disk();
        let (p, q) = (a.to_disk(), b.to_disk());
        let Arc::Circle { center, radius } = geodesic_arc([p.u, p.v], [q.u, q.v]) else { panic!() };
        assert!(((mid.u - center[0]).hypot(mid.v - center[1]) - radius).abs() < 1e-12);
    }
}
