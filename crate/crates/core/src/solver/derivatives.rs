use super::linalg::SymmetricSparse;
use super::target::TargetMeasure;
use crate::error::{Error, Result};
use crate::power::{hessian_edge_geometry, Label, PowerDiagram};

/// `ω(φ) - ν`, the gradient of the convex energy.
pub fn gradient(pd: &PowerDiagram, target: &TargetMeasure) -> Result<Vec<f64>> {
    if target.len() != pd.num_sites() {
        return Err(Error::InvalidTarget(format!(
            "{} masses for {} sites",
            target.len(),
            pd.num_sites()
        )));
    }
    if let Some(i) = pd.first_degenerate() {
        return Err(Error::Inadmissible(i));
    }
    Ok(pd.cells.iter().zip(target.masses()).map(|(c, m)| c.area - m).collect())
}

/// `∂ω_i/∂φ_j`: each pair is evaluated once, from the cell of the smaller
/// index, summed over all copies of the other site, and mirrored. Bisectors
/// with a site's own copies do not move and are skipped.
pub fn hessian(pd: &PowerDiagram) -> Result<SymmetricSparse> {
    if let Some(i) = pd.first_degenerate() {
        return Err(Error::Inadmissible(i));
    }
    let mut h = SymmetricSparse::new(pd.num_sites());
    for cell in &pd.cells {
        let i = cell.site;
        let si = pd.site(pd.copies.canonical[i]);
        for (label, p, q) in cell.edges() {
            let Label::Site(c) = label else { continue };
            let j = pd.copies.owner[c];
            if j <= i {
                continue;
            }
            if let Ok(g) = hessian_edge_geometry(&si, &pd.site(c), p, q) {
                let v = g.hessian_entry();
                if v.is_finite() {
                    h.add_pair(i, j, v);
                }
            }
        }
    }
    h.fill_diagonal_from_rows();
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::HPoint;
    use crate::power::{ConvexDomain, Site};

    #[test]
    fn two_sites_give_the_rank_one_shape() {
        let domain = ConvexDomain::regular(4, 1.5).unwrap();
        let sites = vec![
            Site::new(HPoint::from_polar(0.4, 0.3).unwrap(), 0.0),
            Site::new(HPoint::from_polar(0.4, 3.0).unwrap(), 0.1),
        ];
        let pd = PowerDiagram::planar(&sites, &domain).unwrap();
        let h = hessian(&pd).unwrap();
        let v = h.get(0, 1);
        assert!(v < 0.0);
        assert_eq!(h.get(1, 0), v);
        assert_eq!(h.get(0, 0), -v);
        assert_eq!(h.get(1, 1), -v);
    }
}
