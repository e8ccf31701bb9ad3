//! Kinematical nodes of Chern–Simons theory on a closed surface `Σ_s`.
//!
//! Over a surface the system collapses to `sum_i m~_i c_i = 0` for the
//! charges `alpha_i = c_i γ`, with `γ` the generator of `H^2(Σ_s)`. Every
//! stratum with a nonzero charge vector is a kinematical node. The converse
//! is not claimed, so `nodal == false` means only that the criterion does
//! not apply.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cohomology::{odometer, CohClass1ModG};
use crate::error::{Error, Result};
use crate::howe::HoweSignature;
use crate::intlin::{combine_rows, kernel_basis};
use crate::solver::OrbitTypeLabel;
use crate::{Int, ManifoldModel, Rational};

/// Charges `c_i` of the elementary factors.
pub type ChargeVector = Vec<Int>;

/// Hermite basis of `G_m~ = {c : sum m~_i c_i = 0}`.
pub fn charge_lattice(j: &HoweSignature) -> Vec<ChargeVector> {
    let d = j.derived();
    let row: Vec<Int> = d.m_tilde.iter().map(|&x| x as Int).collect();
    kernel_basis(&vec![row], j.r())
}

/// `sum_j (m_j / k_j) c_j²`; the energy shift carries a further `4π` factor.
pub fn node_coefficient(j: &HoweSignature, c: &[Int]) -> Rational {
    j.pairs()
        .zip(c)
        .map(|((k, m), &cj)| Rational::new(m as Int * cj * cj, k as Int))
        .fold(Rational::zero(), |acc, x| acc + x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeStratum {
    pub xi: CohClass1ModG,
    /// Coordinates in the Hermite basis of the charge lattice.
    pub coordinates: Vec<Int>,
    pub charge: ChargeVector,
    pub nodal: bool,
    pub coefficient: Rational,
}

/// Strata over `Σ_s` with charge-lattice coordinates in `[-bound, bound]`:
/// `xi` outermost in lexicographic order, then coordinates ascending.
pub fn enumerate_strata(j: &HoweSignature, genus: u32, bound: Int) -> Result<Vec<NodeStratum>> {
    if bound < 0 {
        return Err(Error::InvalidInput(format!("bound must be >= 0, got {bound}")));
    }
    let g = j.g() as Int;
    let basis = charge_lattice(j);
    let r = j.r();
    let side = vec![2 * bound + 1; basis.len()];
    let coords: Vec<Vec<Int>> =
        odometer(&side).into_iter().map(|v| v.into_iter().map(|x| x - bound).collect()).collect();
    let mut out = Vec::new();
    for components in odometer(&vec![g; 2 * genus as usize]) {
        let xi = CohClass1ModG { g, components };
        for coordinates in &coords {
            let charge = combine_rows(&basis, coordinates, r);
            out.push(NodeStratum {
                xi: xi.clone(),
                coordinates: coordinates.clone(),
                nodal: charge.iter().any(|&c| c != 0),
                coefficient: node_coefficient(j, &charge),
                charge,
            });
        }
    }
    Ok(out)
}

/// Whether the label carries a nonzero magnetic charge.
pub fn is_node(label: &OrbitTypeLabel, model: &ManifoldModel) -> Result<bool> {
    if !model.is_surface() {
        return Err(Error::InvalidInput(format!(
            "node criterion needs a surface, {} has dimension {}",
            model.name(),
            model.dim()
        )));
    }
    Ok(label.alpha2.iter().any(|a| !a.is_zero()))
}
