//! Transport cost, cell quadrature and the convex energy.

use super::newton::DiagramSource;
use super::target::TargetMeasure;
use crate::error::{Error, Result};
use crate::lorentz::{HPoint, MinkowskiVec};
use crate::power::{Cell, PowerDiagram};
use crate::quadrature::{composite_gauss, geodesic_triangle_samples, AreaSample};

/// `c(x, y) = ln cosh d(x, y) = ln(-<x, y>)`.
pub fn transport_cost(x: &HPoint, y: &HPoint) -> f64 {
    (-x.inner(y)).max(1.0).ln()
}

/// Quadrature samples of a cell: a fan from its first vertex.
pub fn cell_samples(cell: &Cell, out: &mut Vec<AreaSample>) {
    let v = &cell.vertices;
    if cell.unbounded || v.len() < 3 {
        return;
    }
    for i in 1..v.len() - 1 {
        geodesic_triangle_samples(&v[0], &v[i], &v[i + 1], out);
    }
}

/// `∫_{W_i} ln cosh d(x, p_i) dμ` with the canonical copy of site `i`.
pub fn cell_cost(pd: &PowerDiagram, i: usize) -> f64 {
    let center = pd.copies.points[pd.copies.canonical[i]];
    let mut samples = Vec::new();
    cell_samples(&pd.cells[i], &mut samples);
    samples.iter().map(|s| s.weight * transport_cost(&s.point, &center)).sum()
}

pub fn total_cost(pd: &PowerDiagram) -> f64 {
    (0..pd.num_sites()).map(|i| cell_cost(pd, i)).sum()
}

/// Lorentz-normalized area-weighted mean of a cell.
pub fn cell_centroid(cell: &Cell) -> Result<HPoint> {
    let mut samples = Vec::new();
    cell_samples(cell, &mut samples);
    if samples.is_empty() {
        return Err(Error::Degenerate(format!("cell {} is empty", cell.site)));
    }
    let sum = samples
        .iter()
        .fold(MinkowskiVec::default(), |acc, s| acc + s.point.vec() * s.weight);
    HPoint::normalize(sum)
}

/// `F(φ) = ∫ min_i (c(x, p_i) - φ_i) dμ`. Its gradient is `-ω`, so the
/// energy equals `F(0) - F(φ) - Σ φ_i ν_i`.
pub fn dual_functional(pd: &PowerDiagram) -> f64 {
    (0..pd.num_sites()).map(|i| cell_cost(pd, i) - pd.heights[i] * pd.cells[i].area).sum()
}

/// `E(φ) = ∫₀¹ Σ ω_i(tφ) φ_i dt - Σ φ_i ν_i`, integrated along the straight
/// segment with composite Gauss–Legendre using `panels × 8` nodes.
pub fn kantorovich_energy(
    source: &dyn DiagramSource,
    target: &TargetMeasure,
    heights: &[f64],
    panels: usize,
) -> Result<f64> {
    let mut integral = 0.0;
    for (t, w) in composite_gauss(0.0, 1.0, panels.max(1), 8) {
        let scaled: Vec<f64> = heights.iter().map(|h| t * h).collect();
        let pd = source.diagram(&scaled)?;
        if let Some(i) = pd.first_degenerate() {
            return Err(Error::Inadmissible(i));
        }
        integral += w * pd.cells.iter().zip(heights).map(|(c, h)| c.area * h).sum::<f64>();
    }
    Ok(integral - heights.iter().zip(target.masses()).map(|(h, m)| h * m).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::DiskPoint;

    #[test]
    fn cost_examples() {
        let p = HPoint::from_disk(DiskPoint::new(0.5, 0.0).unwrap()).unwrap();
        assert_eq!(transport_cost(&p, &p), 0.0);
        assert!((transport_cost(&HPoint::APEX, &p) - (5.0f64 / 3.0).ln()).abs() < 1e-15);
        let q = HPoint::from_polar(2.3, 1.0).unwrap();
        let d = p.distance(&q);
        assert!((transport_cost(&p, &q) - d.cosh().ln()).abs() < 1e-12);
    }
}
