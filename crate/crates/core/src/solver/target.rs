use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Target masses `ν_i > 0`, one per site, summing to the source mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetMeasure {
    masses: Vec<f64>,
}

const MASS_TOL: f64 = 1e-9;

impl TargetMeasure {
    /// Validates positivity and `Σ ν = total` to 1e-9 relative.
    pub fn new(masses: Vec<f64>, total: f64) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidTarget("no masses".into()));
        }
        if let Some(i) = masses.iter().position(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidTarget(format!("mass {i} is not positive: {}", masses[i])));
        }
        let sum: f64 = masses.iter().sum();
        if (sum - total).abs() > MASS_TOL * total.abs() {
            return Err(Error::InvalidTarget(format!("masses sum to {sum}, expected {total}")));
        }
        Ok(Self { masses })
    }

    /// Rescales positive weights to sum to `total`; returns the scale factor.
    pub fn normalized(weights: Vec<f64>, total: f64) -> Result<(Self, f64)> {
        if let Some(i) = weights.iter().position(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidTarget(format!("weight {i} is not positive: {}", weights[i])));
        }
        let sum: f64 = weights.iter().sum();
        let scale = total / sum;
        let mut masses: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        // Push the rounding residue into the largest mass.
        let drift = total - masses.iter().sum::<f64>();
        if let Some(big) = (0..masses.len()).max_by(|&a, &b| masses[a].total_cmp(&masses[b])) {
            masses[big] += drift;
        }
        Ok((Self::new(masses, total)?, scale))
    }

    pub fn uniform(k: usize, total: f64) -> Result<Self> {
        Self::normalized(vec![1.0; k], total).map(|t| t.0)
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// How target masses are derived from a mesh or site set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetMode {
    /// One third of the Euclidean area of the incident faces.
    EuclideanFaceArea,
    /// One third of the hyperbolic area of the incident faces.
    HyperbolicFaceArea,
    Uniform,
    /// Read from a target JSON file.
    File,
}

impl FromStr for TargetMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean-face-area" => Ok(Self::EuclideanFaceArea),
            "hyperbolic-face-area" => Ok(Self::HyperbolicFaceArea),
            "uniform" => Ok(Self::Uniform),
            "file" => Ok(Self::File),
            other => Err(Error::Input(format!("unknown target mode '{other}'"))),
        }
    }
}

impl fmt::Display for TargetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::EuclideanFaceArea => "euclidean-face-area",
            Self::HyperbolicFaceArea => "hyperbolic-face-area",
            Self::Uniform => "uniform",
            Self::File => "file",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TargetMeasure::new(vec![1.0, 2.0], 3.0).is_ok());
        assert!(matches!(TargetMeasure::new(vec![1.0, 0.0], 1.0), Err(Error::InvalidTarget(_))));
        assert!(matches!(TargetMeasure::new(vec![1.0, 2.0], 3.1), Err(Error::InvalidTarget(_))));
    }

    #[test]
    fn normalization_reports_scale() {
        let (t, s) = TargetMeasure::normalized(vec![1.0, 3.0], 2.0).unwrap();
        assert_eq!(s, 0.5);
        assert_eq!(t.masses(), &[0.5, 1.5]);
        let u = TargetMeasure::uniform(7, 4.0 * std::f64::consts::PI).unwrap();
        assert!((u.total() - 4.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [
            TargetMode::EuclideanFaceArea,
            TargetMode::HyperbolicFaceArea,
            TargetMode::Uniform,
            TargetMode::File,
        ] {
            assert_eq!(m.to_string().parse::<TargetMode>().unwrap(), m);
        }
        assert!("area".parse::<TargetMode>().is_err());
    }
}
