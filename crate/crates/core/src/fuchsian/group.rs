use super::embed::FundamentalDomain;
use super::mesh::SideLabel;
use crate::error::{Error, Result};
use crate::lorentz::{HPoint, LorentzIsometry};

/// Paired sides must agree in length to this tolerance.
pub const PAIRING_TOLERANCE: f64 = 1e-6;

/// The side-pairing generators. Letter `2k` is generator `k`, letter
/// `2k + 1` its inverse; generator `2(i-1)` pairs `a_i`, `2(i-1) + 1` pairs `b_i`.
#[derive(Debug, Clone)]
pub struct FuchsianGroup {
    letters: Vec<LorentzIsometry>,
}

impl FuchsianGroup {
    pub fn num_generators(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn generator(&self, k: usize) -> &LorentzIsometry {
        &self.letters[2 * k]
    }

    pub fn letter(&self, l: usize) -> &LorentzIsometry {
        &self.letters[l]
    }

    pub fn inverse_letter(l: usize) -> usize {
        l ^ 1
    }

    /// Product of letters, leftmost applied last.
    pub fn word(&self, letters: &[usize]) -> LorentzIsometry {
        letters.iter().fold(LorentzIsometry::identity(), |acc, &l| acc.compose(&self.letters[l]))
    }

    /// `∏ᵢ αᵢ⁻¹ βᵢ αᵢ βᵢ⁻¹` in the normalization produced by
    /// [`side_pairing_generators`]; the identity for a valid domain.
    pub fn relator(&self) -> LorentzIsometry {
        let g = self.num_generators() / 2;
        let mut word = Vec::with_capacity(4 * g);
        for i in 0..g {
            let (a, b) = (4 * i, 4 * i + 2);
            word.extend([a ^ 1, b, a, b ^ 1]);
        }
        self.word(&word)
    }
}

/// For each pair `(s, s⁻¹)` of sides, the isometry taking the chain of `s`
/// onto the reversed chain of `s⁻¹`.
pub fn side_pairing_generators(dom: &FundamentalDomain) -> Result<FuchsianGroup> {
    let g = dom.genus;
    let find = |label: SideLabel| {
        dom.sides
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| Error::Pairing(format!("side {label} is missing")))
    };
    let mut letters = Vec::with_capacity(4 * g);
    for k in 0..2 * g {
        let side = find(SideLabel { generator: k, inverse: false })?;
        let partner = find(SideLabel { generator: k, inverse: true })?;
        let pts = |ix: &[usize]| ix.iter().map(|&v| dom.positions[v]).collect::<Vec<HPoint>>();
        let (src, dst) = (pts(&side.vertices), pts(&partner.vertices));
        let (p, q) = (src[0], src[src.len() - 1]);
        let (r, s) = (dst[0], dst[dst.len() - 1]);
        let (la, lb) = (p.distance(&q), r.distance(&s));
        if (la - lb).abs() > PAIRING_TOLERANCE {
            return Err(Error::Pairing(format!(
                "sides {} and {} have lengths {la} and {lb}",
                side.label, partner.label
            )));
        }
        let m = LorentzIsometry::from_point_pairs(&p, &q, &s, &r)?;
        let m = LorentzIsometry::with_tolerance(*m.matrix(), 1e-8)
            .map_err(|e| Error::Pairing(format!("generator for {}: {e}", side.label)))?
            .reorthonormalized();
        for (a, b) in src.iter().zip(dst.iter().rev()) {
            let err = m.apply(a).distance(b);
            if err > PAIRING_TOLERANCE {
                return Err(Error::Pairing(format!(
                    "generator for {} misses the partner chain by {err:.3e}",
                    side.label
                )));
            }
        }
        letters.push(m);
        letters.push(m.inverse());
    }
    Ok(FuchsianGroup { letters })
}
