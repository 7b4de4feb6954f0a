//! Quadrature rules on intervals and on geodesic triangles.

use crate::lorentz::{triangle_area_points, HPoint, MinkowskiVec};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { p0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` panels of `per_panel` nodes.
pub fn composite_gauss(a: f64, b: f64, panels: usize, per_panel: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(per_panel);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * per_panel);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((lo + 0.5 * h * (xi + 1.0), 0.5 * h * wi));
        }
    }
    out
}

/// Symmetric 7-point degree-5 rule on the reference triangle: barycentric
/// coordinates and weights summing to one.
pub fn triangle_rule_7() -> [([f64; 3], f64); 7] {
    let a1 = 0.059_715_871_789_769_82;
    let b1 = 0.470_142_064_105_115_1;
    let a2 = 0.797_426_985_353_087_3;
    let b2 = 0.101_286_507_323_456_3;
    let w1 = 0.132_394_152_788_506_2;
    let w2 = 0.125_939_180_544_827_2;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
        ([a1, b1, b1], w1),
        ([b1, a1, b1], w1),
        ([b1, b1, a1], w1),
        ([a2, b2, b2], w2),
        ([b2, a2, b2], w2),
        ([b2, b2, a2], w2),
    ]
}

/// A quadrature point on the hyperboloid with its hyperbolic area weight.
#[derive(Debug, Clone, Copy)]
pub struct AreaSample {
    pub point: HPoint,
    pub weight: f64,
}

/// Longest hyperbolic edge of the leaf triangles in [`geodesic_triangle_samples`].
pub const SUBDIVISION_LENGTH: f64 = 0.25;

/// Pure boost taking the apex to `p`, and its inverse.
fn boost(p: &HPoint) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let (x, y, z) = (p.x1(), p.x2(), p.x3());
    let f = 1.0 / (1.0 + z);
    let m = [[1.0 + x * x * f, x * y * f, x], [x * y * f, 1.0 + y * y * f, y], [x, y, z]];
    let inv = [[m[0][0], m[0][1], -x], [m[1][0], m[1][1], -y], [-x, -y, z]];
    (m, inv)
}

fn apply(m: &[[f64; 3]; 3], v: &MinkowskiVec) -> MinkowskiVec {
    MinkowskiVec::new(
        m[0][0] * v.x1 + m[0][1] * v.x2 + m[0][2] * v.x3,
        m[1][0] * v.x1 + m[1][1] * v.x2 + m[1][2] * v.x3,
        m[2][0] * v.x1 + m[2][1] * v.x2 + m[2][2] * v.x3,
    )
}

/// Samples the geodesic triangle `abc` with the 7-point rule. The triangle
/// is split at geodesic midpoints until every edge is at most
/// [`SUBDIVISION_LENGTH`]; each leaf is moved to the apex, where the Klein
/// model makes it straight with the nearly constant area density
/// `(1 - |k|²)^(-3/2)`, and the rule is pulled back.
pub fn geodesic_triangle_samples(a: &HPoint, b: &HPoint, c: &HPoint, out: &mut Vec<AreaSample>) {
    let longest = a.distance(b).max(b.distance(c)).max(c.distance(a));
    if longest > SUBDIVISION_LENGTH {
        let mid = |p: &HPoint, q: &HPoint| HPoint::normalize(p.vec() + q.vec());
        let (Ok(ab), Ok(bc), Ok(ca)) = (mid(a, b), mid(b, c), mid(c, a)) else { return };
        geodesic_triangle_samples(a, &ab, &ca, out);
        geodesic_triangle_samples(&ab, b, &bc, out);
        geodesic_triangle_samples(&ca, &bc, c, out);
        geodesic_triangle_samples(&ab, &bc, &ca, out);
        return;
    }
    let Ok(center) = HPoint::normalize(a.vec() + b.vec() + c.vec()) else { return };
    let (to_center, from_center) = boost(&center);
    let local = |p: &HPoint| {
        let v = apply(&from_center, &p.vec());
        [v.x1 / v.x3, v.x2 / v.x3]
    };
    let (p, q, r) = (local(a), local(b), local(c));
    let area2 = ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])).abs();
    if area2 == 0.0 {
        return;
    }
    let first = out.len();
    for (bary, w) in triangle_rule_7() {
        let k = [
            bary[0] * p[0] + bary[1] * q[0] + bary[2] * r[0],
            bary[0] * p[1] + bary[1] * q[1] + bary[2] * r[1],
        ];
        let s = 1.0 / (1.0 - k[0] * k[0] - k[1] * k[1]).sqrt();
        let v = apply(&to_center, &MinkowskiVec::new(k[0] * s, k[1] * s, s));
        let point = HPoint::normalize(v).unwrap_or(center);
        out.push(AreaSample { point, weight: 0.5 * area2 * w * s * s * s });
    }
    // Match the exact leaf area; this removes the leading density error.
    let approx: f64 = out[first..].iter().map(|x| x.weight).sum();
    let exact = triangle_area_points(a, b, c);
    if approx > 0.0 {
        out[first..].iter_mut().for_each(|x| x.weight *= exact / approx);
    }
}

/// Collapsed (Duffy) tensor Gauss rule of `n × n` nodes on a geodesic
/// triangle, for reference integrals.
pub fn geodesic_triangle_samples_tensor(
    a: &HPoint,
    b: &HPoint,
    c: &HPoint,
    n: usize,
) -> Vec<AreaSample> {
    let (ka, kb, kc) = (a.to_klein(), b.to_klein(), c.to_klein());
    let area2 = ((kb[0] - ka[0]) * (kc[1] - ka[1]) - (kc[0] - ka[0]) * (kb[1] - ka[1])).abs();
    let (x, w) = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * n);
    for (xi, wi) in x.iter().zip(&w) {
        let s = 0.5 * (xi + 1.0);
        for (xj, wj) in x.iter().zip(&w) {
            let t = 0.5 * (xj + 1.0);
            let k = [
                ka[0] + s * (kb[0] - ka[0]) + s * t * (kc[0] - kb[0]),
                ka[1] + s * (kb[1] - ka[1]) + s * t * (kc[1] - kb[1]),
            ];
            let q = 1.0 - k[0] * k[0] - k[1] * k[1];
            let dens = q.powf(-1.5);
            let point = HPoint::from_klein(k).unwrap_or(HPoint::APEX);
            out.push(AreaSample { point, weight: 0.25 * wi * wj * s * area2 * dens });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 8, 16, 33] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}");
            let deg = 2 * n - 1;
            let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((integral - exact).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn seven_point_rule_is_degree_five() {
        let rule = triangle_rule_7();
        let total: f64 = rule.iter().map(|r| r.1).sum();
        assert!((total - 1.0).abs() < 1e-15);
        // Mean of x^2 y over the unit right triangle (0,0),(1,0),(0,1): 1/60 / (1/2).
        let mean: f64 = rule
            .iter()
            .map(|(b, w)| {
                let (x, y) = (b[1], b[2]);
                w * x * x * y
            })
            .sum();
        assert!((mean - 1.0 / 30.0).abs() < 1e-15);
    }
}
