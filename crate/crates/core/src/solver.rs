//! The characteristic-class system for a Howe signature `J` over a base
//! manifold `M` in the sector `c2(P)`:
//!
//! ```text
//! sum_i m~_i alpha_i^(2)                                   = beta_g(xi)   in H^2(M,Z)
//! sum_i m_i alpha_i^(4) + sum_i m_i(m_i-1)/2 alpha_i^(2)^2
//!                       + sum_{i<j} m_i m_j alpha_i^(2) alpha_j^(2) = c2(P)  in H^4(M,Z)
//! ```
//!
//! with `alpha_i^(4) = 0` whenever `k_i = 1`. The solver separates the
//! problem into a finite part (the class `xi` and the torsion coordinates of
//! `alpha^(2)`) and a lattice part (free coordinates of `alpha^(2)` and the
//! degree-four classes). The lattice part does not depend on the finite part,
//! so it is solved once.
//!
//! Free coordinates are parametrized by `t in Z^rho`, `rho = (r-1) b2`: if
//! `B` is the Hermite basis of `G_m~ = ker(m~)`, then
//! `free(alpha_i)_p = sum_a B[a][i] t[a b2 + p]`. On that lattice the
//! quadratic part equals `q(t) = ½ tᵀ ((B M Bᵀ) ⊗ ω) t` with
//! `M_ii = m_i(m_i - 1)`, `M_ij = m_i m_j`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cohomology::{odometer, CohClass1ModG, CohClass2, CohClass4, ManifoldModel};
use crate::error::{Error, Result};
use crate::howe::{enumerate_classes, HomotopyGroup, HoweSignature, SignatureDerived};
use crate::intlin::{column_hermite, hnf_rows, kernel_basis, reduce_mod_hnf, transpose};
use crate::quadratic::{form_value, level_set, LevelSet};
use crate::{Int, IntMatrix};

/// The bundle `P` enters only through its second Chern class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BundleSector {
    pub c2: CohClass4,
}

impl BundleSector {
    pub fn new(c2: Int) -> Self {
        Self { c2: CohClass4::new(c2) }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    /// Rejects nonzero `c2` over bases without a fourth cohomology group.
    pub fn check(&self, model: &ManifoldModel) -> Result<()> {
        if model.h4_rank() == 0 && self.c2.coeff != 0 {
            return Err(Error::InconsistentSector(format!(
                "c2 = {} but H^4({}) = 0",
                self.c2.coeff,
                model.name()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Sup-norm bound on the free parameters of infinite families.
    pub bound: Int,
    /// Cap on the number of representatives listed per infinite family.
    pub max_representatives: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { bound: 10, max_representatives: 1_000 }
    }
}

impl SolveOptions {
    pub fn with_bound(bound: Int) -> Self {
        Self { bound, ..Self::default() }
    }
}

/// `(J; alpha, xi)`: one element of `K(P)_J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitTypeLabel {
    pub j: HoweSignature,
    pub alpha2: Vec<CohClass2>,
    pub alpha4: Vec<CohClass4>,
    pub xi: CohClass1ModG,
}

impl OrbitTypeLabel {
    pub fn zero(j: &HoweSignature, model: &ManifoldModel) -> Self {
        let g = j.g() as Int;
        Self {
            j: j.clone(),
            alpha2: vec![model.zero2(); j.r()],
            alpha4: vec![CohClass4::default(); j.r()],
            xi: CohClass1ModG { g, components: vec![0; model.h1_mod_orders(g).len()] },
        }
    }

    /// Free coordinates, torsion coordinates and the degree-four coefficient
    /// of index `i`, concatenated.
    pub fn encode(&self, i: usize) -> Vec<Int> {
        let a = &self.alpha2[i];
        a.free.iter().chain(&a.torsion).copied().chain([self.alpha4[i].coeff]).collect()
    }

    /// Applies `perm` to the indices: position `p` of the result holds index
    /// `perm[p]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            j: self.j.permuted(perm),
            alpha2: perm.iter().map(|&i| self.alpha2[i].clone()).collect(),
            alpha4: perm.iter().map(|&i| self.alpha4[i]).collect(),
            xi: self.xi.clone(),
        }
    }

    /// Representative of the class under simultaneous permutation: indices
    /// sorted descending by `(k_i, m_i, encoded alpha_i)`.
    pub fn canonical(&self) -> Self {
        let k = self.j.k();
        let m = self.j.m();
        let mut perm: Vec<usize> = (0..self.j.r()).collect();
        perm.sort_by(|&a, &b| (k[b], m[b], self.encode(b)).cmp(&(k[a], m[a], self.encode(a))));
        self.permuted(&perm)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha2.iter().all(CohClass2::is_zero)
            && self.alpha4.iter().all(|a| a.coeff == 0)
            && self.xi.is_zero()
    }
}

/// `E_a^(2)(alpha) = sum_i a_i alpha_i`.
pub fn e2(
    j: &HoweSignature,
    weights: &[Int],
    alpha2: &[CohClass2],
    model: &ManifoldModel,
) -> Result<CohClass2> {
    if weights.len() != j.r() || alpha2.len() != j.r() {
        return Err(Error::CoordinateMismatch(format!(
            "{j} has r = {}, got {} weights and {} classes",
            j.r(),
            weights.len(),
            alpha2.len()
        )));
    }
    model.weighted_sum2(weights, alpha2)
}

/// `E_m^(4)(alpha)`, with every cup product evaluated by the model.
pub fn e4(
    j: &HoweSignature,
    alpha2: &[CohClass2],
    alpha4: &[CohClass4],
    model: &ManifoldModel,
) -> Result<CohClass4> {
    let r = j.r();
    if alpha2.len() != r || alpha4.len() != r {
        return Err(Error::CoordinateMismatch(format!(
            "{j} has r = {r}, got {} degree-2 and {} degree-4 classes",
            alpha2.len(),
            alpha4.len()
        )));
    }
    for (i, (&k, a)) in j.k().iter().zip(alpha4).enumerate() {
        if a.coeff != 0 && (k == 1 || model.h4_rank() == 0) {
            return Err(Error::InvalidInput(format!(
                "alpha4[{i}] = {} must vanish (k = {k}, h4_rank = {})",
                a.coeff,
                model.h4_rank()
            )));
        }
    }
    let m: Vec<Int> = j.m().iter().map(|&x| x as Int).collect();
    let mut total: Int = m.iter().zip(alpha4).map(|(mi, a)| mi * a.coeff).sum();
    for i in 0..r {
        total += m[i] * (m[i] - 1) / 2 * model.cup22(&alpha2[i], &alpha2[i])?.coeff;
        for jj in i + 1..r {
            total += m[i] * m[jj] * model.cup22(&alpha2[i], &alpha2[jj])?.coeff;
        }
    }
    Ok(CohClass4::new(total))
}

/// Checks both equations, the vanishing of `alpha4` on `k = 1` slots and
/// the redundant identity `E_m^(2)(alpha) = 0`.
pub fn verify_label(
    label: &OrbitTypeLabel,
    model: &ManifoldModel,
    sector: &BundleSector,
) -> Result<bool> {
    let j = &label.j;
    let g = j.g() as Int;
    model.check1(&label.xi, g)?;
    for a in &label.alpha2 {
        model.check2(a)?;
    }
    if label.alpha2.len() != j.r() || label.alpha4.len() != j.r() {
        return Err(Error::CoordinateMismatch(format!("label arity does not match {j}")));
    }
    let degree4_slots_ok = j
        .k()
        .iter()
        .zip(&label.alpha4)
        .all(|(&k, a)| a.coeff == 0 || (k > 1 && model.h4_rank() == 1));
    if !degree4_slots_ok {
        return Ok(false);
    }
    let m: Vec<Int> = j.m().iter().map(|&x| x as Int).collect();
    let m_tilde: Vec<Int> = m.iter().map(|x| x / g).collect();
    let lhs2 = e2(j, &m_tilde, &label.alpha2, model)?;
    let rhs2 = model.bockstein(g).apply(&label.xi);
    let redundant = e2(j, &m, &label.alpha2, model)?;
    let lhs4 = e4(j, &label.alpha2, &label.alpha4, model)?;
    Ok(lhs2 == rhs2 && redundant.is_zero() && lhs4 == sector.c2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Empty,
    Finite,
    Infinite,
}

/// A choice of `xi` together with torsion coordinates of `alpha^(2)`
/// solving the torsion part of the degree-2 equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscretePart {
    pub xi: CohClass1ModG,
    /// `torsion[i]` are the torsion coordinates of `alpha_i^(2)`.
    pub torsion: Vec<Vec<Int>>,
}

/// The constraint cutting the free parameters `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyCondition {
    /// Every `t` is allowed (no fourth cohomology).
    Unconstrained,
    /// `q(t) = c2` (all `k_i = 1`).
    Quadratic { c2: Int },
    /// `q(t) ≡ c2 (mod h)` with `h = gcd{m_i : k_i > 1}`; the degree-four
    /// classes are then `((c2 - q(t))/h) u + sum_b s_b kernel_b`.
    Congruence { c2: Int, modulus: Int },
}

/// Lattice description of an infinite solution set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFamily {
    pub j: HoweSignature,
    pub b2: usize,
    /// Intersection form of the base (zero below dimension four).
    pub intersection_form: IntMatrix,
    /// Hermite basis of `G_m~`, rows in `Z^r`.
    pub charge_basis: IntMatrix,
    /// Gram matrix of `q` in the parameters `t`.
    pub gram: IntMatrix,
    pub condition: FamilyCondition,
    /// `u` with `sum_i m_i u_i = h`, supported on `k_i > 1` (empty if unused).
    pub degree4_offset: Vec<Int>,
    /// Hermite basis of the degree-four lattice directions, rows in `Z^r`.
    pub degree4_kernel: IntMatrix,
    pub discrete: Vec<DiscretePart>,
    /// A verified member.
    pub witness: OrbitTypeLabel,
}

impl SolutionFamily {
    /// Number of integer parameters: `rho` free degree-2 parameters plus the
    /// degree-four lattice directions.
    pub fn rank(&self) -> usize {
        self.free_params() + self.degree4_kernel.len()
    }

    pub fn free_params(&self) -> usize {
        self.charge_basis.len() * self.b2
    }

    /// Free coordinates of `alpha^(2)` for parameters `t`.
    pub fn free_coordinates(&self, t: &[Int]) -> Vec<Vec<Int>> {
        let r = self.j.r();
        let mut out = vec![vec![0; self.b2]; r];
        for (a, row) in self.charge_basis.iter().enumerate() {
            for (i, &bi) in row.iter().enumerate() {
                for p in 0..self.b2 {
                    out[i][p] += bi * t[a * self.b2 + p];
                }
            }
        }
        out
    }

    /// The label with discrete part `d`, free parameters `t` and degree-four
    /// lattice parameters `s`, or `None` when `t` violates the condition.
    pub fn point(&self, d: usize, t: &[Int], s: &[Int]) -> Option<OrbitTypeLabel> {
        let disc = self.discrete.get(d)?;
        if t.len() != self.free_params() || s.len() != self.degree4_kernel.len() {
            return None;
        }
        let r = self.j.r();
        let q = form_value(&self.gram, t);
        let mut alpha4 = vec![0; r];
        match self.condition {
            FamilyCondition::Unconstrained => {}
            FamilyCondition::Quadratic { c2 } => {
                if q != c2 as i128 {
                    return None;
                }
            }
            FamilyCondition::Congruence { c2, modulus } => {
                let gap = c2 as i128 - q;
                if gap % modulus as i128 != 0 {
                    return None;
                }
                let lead = (gap / modulus as i128) as Int;
                for i in 0..r {
                    alpha4[i] = lead * self.degree4_offset[i];
                }
                for (row, &sb) in self.degree4_kernel.iter().zip(s) {
                    for i in 0..r {
                        alpha4[i] += sb * row[i];
                    }
                }
            }
        }
        let free = self.free_coordinates(t);
        Some(OrbitTypeLabel {
            j: self.j.clone(),
            alpha2: free
                .into_iter()
                .zip(&disc.torsion)
                .map(|(f, tor)| CohClass2 { free: f, torsion: tor.clone() })
                .collect(),
            alpha4: alpha4.into_iter().map(CohClass4::new).collect(),
            xi: disc.xi.clone(),
        })
    }

    /// Parameters `t` of a label's free coordinates, if it lies on the
    /// parametrized lattice.
    pub fn parameters(&self, label: &OrbitTypeLabel) -> Option<Vec<Int>> {
        let r = self.j.r();
        let mut t = vec![0; self.free_params()];
        for p in 0..self.b2 {
            let column: Vec<Int> = (0..r).map(|i| label.alpha2[i].free[p]).collect();
            let coords = crate::intlin::lattice_coordinates(&self.charge_basis, &column)?;
            for (a, c) in coords.into_iter().enumerate() {
                t[a * self.b2 + p] = c;
            }
        }
        Some(t)
    }

    /// Whether `label` is a point of the family.
    pub fn contains(&self, label: &OrbitTypeLabel) -> bool {
        if label.j != self.j || label.alpha2.len() != self.j.r() || label.alpha4.len() != self.j.r()
        {
            return false;
        }
        let Some(t) = self.parameters(label) else {
            return false;
        };
        let Some(d) = self.discrete.iter().position(|disc| {
            disc.xi == label.xi
                && disc.torsion.iter().zip(&label.alpha2).all(|(tor, a)| *tor == a.torsion)
        }) else {
            return false;
        };
        let alpha4: Vec<Int> = label.alpha4.iter().map(|a| a.coeff).collect();
        let s = match self.condition {
            FamilyCondition::Unconstrained | FamilyCondition::Quadratic { .. } => {
                if alpha4.iter().any(|&a| a != 0) {
                    return false;
                }
                vec![]
            }
            FamilyCondition::Congruence { c2, modulus } => {
                let gap = c2 as i128 - form_value(&self.gram, &t);
                if gap % modulus as i128 != 0 {
                    return false;
                }
                let lead = (gap / modulus as i128) as Int;
                let rest: Vec<Int> =
                    alpha4.iter().zip(&self.degree4_offset).map(|(a, o)| a - lead * o).collect();
                match crate::intlin::lattice_coordinates(&self.degree4_kernel, &rest) {
                    Some(s) => s,
                    None => return false,
                }
            }
        };
        self.point(d, &t, &s).as_ref() == Some(label)
    }
}

/// The solution set `K(P)_J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub j: HoweSignature,
    pub kind: SolutionKind,
    /// All solutions when finite; representatives within the bound when
    /// infinite.
    pub labels: Vec<OrbitTypeLabel>,
    pub family: Option<SolutionFamily>,
    /// Set when the representative list hit `max_representatives`.
    pub truncated: bool,
    pub empty_reason: Option<String>,
}

impl SolutionSet {
    fn empty(j: &HoweSignature, why: impl Into<String>) -> Self {
        Self {
            j: j.clone(),
            kind: SolutionKind::Empty,
            labels: vec![],
            family: None,
            truncated: false,
            empty_reason: Some(why.into()),
        }
    }

    pub fn family_rank(&self) -> usize {
        self.family.as_ref().map_or(0, SolutionFamily::rank)
    }
}

enum LatticePart {
    Empty(String),
    Finite(Vec<(Vec<Int>, Vec<Int>)>),
    Infinite { witness_t: Vec<Int> },
}

struct Setup {
    charge_basis: IntMatrix,
    gram: IntMatrix,
    condition: FamilyCondition,
    offset: Vec<Int>,
    kernel: IntMatrix,
}

fn setup(j: &HoweSignature, model: &ManifoldModel, c2: Int) -> Setup {
    let r = j.r();
    let m: Vec<Int> = j.m().iter().map(|&x| x as Int).collect();
    let g = j.g() as Int;
    let m_tilde: Vec<Int> = m.iter().map(|x| x / g).collect();
    let charge_basis = kernel_basis(&vec![m_tilde], r);
    let form = model.intersection_form().to_vec();
    let gram = gram_matrix(&charge_basis, &m, &form);
    let slots: Vec<usize> = (0..r).filter(|&i| j.k()[i] > 1).collect();
    let (condition, offset, kernel) = if model.h4_rank() == 0 {
        (FamilyCondition::Unconstrained, vec![], vec![])
    } else if slots.is_empty() {
        (FamilyCondition::Quadratic { c2 }, vec![], vec![])
    } else {
        let row: Vec<Int> = slots.iter().map(|&i| m[i]).collect();
        let ch = column_hermite(&vec![row], slots.len());
        let h = ch.hermite[0][0];
        let embed = |v: Vec<Int>| {
            let mut full = vec![0; r];
            for (&i, x) in slots.iter().zip(v) {
                full[i] = x;
            }
            full
        };
        let vt = transpose(&ch.transform, slots.len());
        let offset = embed(vt[0].clone());
        let kernel = hnf_rows(&vt[1..].iter().cloned().map(embed).collect::<Vec<_>>(), r);
        (FamilyCondition::Congruence { c2, modulus: h }, offset, kernel)
    };
    Setup { charge_basis, gram, condition, offset, kernel }
}

fn lattice_part(s: &Setup) -> Result<LatticePart> {
    let rho = s.gram.len();
    match s.condition {
        FamilyCondition::Unconstrained => Ok(if rho == 0 {
            LatticePart::Finite(vec![(vec![], vec![])])
        } else {
            LatticePart::Infinite { witness_t: vec![0; rho] }
        }),
        FamilyCondition::Quadratic { c2 } => Ok(match level_set(&s.gram, c2)? {
            LevelSet::Empty(why) => LatticePart::Empty(why),
            LevelSet::Finite(points) => {
                LatticePart::Finite(points.into_iter().map(|t| (t, vec![])).collect())
            }
            LevelSet::Infinite(t) => LatticePart::Infinite { witness_t: t },
        }),
        FamilyCondition::Congruence { c2, modulus } => {
            let Some(t0) = congruence_witness(&s.gram, c2, modulus)? else {
                return Ok(LatticePart::Empty(format!(
                    "q(t) never takes the value {c2} modulo gcd{{m_i : k_i > 1}} = {modulus}"
                )));
            };
            if rho + s.kernel.len() == 0 {
                let alpha4 = s.offset.iter().map(|u| c2 / modulus * u).collect();
                Ok(LatticePart::Finite(vec![(vec![], alpha4)]))
            } else {
                Ok(LatticePart::Infinite { witness_t: t0 })
            }
        }
    }
}

const RESIDUE_BUDGET: i128 = 2_000_000;

/// Some `t` with `q(t) ≡ c2 (mod h)`, or `None` if there is none.
fn congruence_witness(gram: &IntMatrix, c2: Int, h: Int) -> Result<Option<Vec<Int>>> {
    let rho = gram.len();
    let hits = |t: &[Int]| (c2 as i128 - form_value(gram, t)) % h as i128 == 0;
    if hits(&vec![0; rho]) {
        return Ok(Some(vec![0; rho]));
    }
    // q mod h only depends on t mod h
    if (h as i128).checked_pow(rho as u32).is_some_and(|n| n <= RESIDUE_BUDGET) {
        return Ok(odometer(&vec![h; rho]).into_iter().find(|t| hits(t)));
    }
    for a in 0..rho {
        for b in a..rho {
            for x in 0..h {
                for y in 0..h {
                    let mut t = vec![0; rho];
                    t[a] = x;
                    t[b] += y;
                    if hits(&t) {
                        return Ok(Some(t));
                    }
                }
            }
        }
    }
    Err(Error::Undecided(format!(
        "q(t) ≡ {c2} (mod {h}) over {rho} parameters: no residue found by the sparse search"
    )))
}

/// Solutions of the torsion part of the degree-2 equation for every `xi`,
/// sorted.
fn discrete_parts(j: &HoweSignature, model: &ManifoldModel) -> Vec<DiscretePart> {
    let r = j.r();
    let g = j.g() as Int;
    let m_tilde: Vec<Int> = j.m().iter().map(|&x| x as Int / g).collect();
    // m~ V = (1, 0, ..., 0) with V unimodular, so x = V y solves m~ x = y_1
    let v = column_hermite(&vec![m_tilde], r).transform;
    let beta = model.bockstein(g);
    let factors = model.h2_torsion().to_vec();
    let mut out = Vec::new();
    for xi in model.h1_mod_elements(g) {
        let target = beta.apply(&xi).torsion;
        // per factor: all x in Z_d^r with m~ x ≡ target
        let per_factor: Vec<Vec<Vec<Int>>> = factors
            .iter()
            .zip(&target)
            .map(|(&d, &rhs)| {
                odometer(&vec![d; r - 1])
                    .into_iter()
                    .map(|rest| {
                        let y: Vec<Int> = std::iter::once(rhs).chain(rest).collect();
                        (0..r)
                            .map(|i| {
                                let x: Int = (0..r).map(|c| v[i][c] * y[c]).sum();
                                x.rem_euclid(d)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut combos: Vec<Vec<Vec<Int>>> = vec![vec![Vec::new(); r]];
        for sols in &per_factor {
            let mut next = Vec::with_capacity(combos.len() * sols.len());
            for combo in &combos {
                for x in sols {
                    let mut c = combo.clone();
                    for i in 0..r {
                        c[i].push(x[i]);
                    }
                    next.push(c);
                }
            }
            combos = next;
        }
        for torsion in combos {
            out.push(DiscretePart { xi: xi.clone(), torsion });
        }
    }
    out.sort();
    out
}

/// Solves the system for `J` over `model` in `sector`.
pub fn solve_system(
    j: &HoweSignature,
    model: &ManifoldModel,
    sector: &BundleSector,
    opts: &SolveOptions,
) -> Result<SolutionSet> {
    if opts.bound < 1 {
        return Err(Error::InvalidInput(format!("bound must be >= 1, got {}", opts.bound)));
    }
    let c2 = sector.c2.coeff;
    if model.h4_rank() == 0 && c2 != 0 {
        return Ok(SolutionSet::empty(
            j,
            format!("c2 = {c2} cannot be realized: H^4({}) = 0", model.name()),
        ));
    }
    let s = setup(j, model, c2);
    let part = lattice_part(&s)?;
    let discrete = discrete_parts(j, model);
    let b2 = model.b2();
    let mut family = SolutionFamily {
        j: j.clone(),
        b2,
        intersection_form: model.intersection_form().to_vec(),
        charge_basis: s.charge_basis.clone(),
        gram: s.gram.clone(),
        condition: s.condition.clone(),
        degree4_offset: s.offset.clone(),
        degree4_kernel: s.kernel.clone(),
        discrete,
        witness: OrbitTypeLabel::zero(j, model),
    };
    match part {
        LatticePart::Empty(why) => Ok(SolutionSet::empty(j, why)),
        LatticePart::Finite(points) => {
            let mut labels = Vec::new();
            for d in 0..family.discrete.len() {
                for (t, alpha4) in &points {
                    let mut label = family
                        .point(d, t, &[])
                        .expect("finite lattice points satisfy the condition");
                    if !alpha4.is_empty() {
                        label.alpha4 = alpha4.iter().map(|&x| CohClass4::new(x)).collect();
                    }
                    labels.push(label);
                }
            }
            labels.sort();
            Ok(SolutionSet {
                j: j.clone(),
                kind: SolutionKind::Finite,
                labels,
                family: None,
                truncated: false,
                empty_reason: None,
            })
        }
        LatticePart::Infinite { witness_t } => {
            let zeros = vec![0; family.degree4_kernel.len()];
            family.witness =
                family.point(0, &witness_t, &zeros).expect("witness satisfies condition");
            let (labels, truncated) = representatives(&family, opts, &witness_t);
            Ok(SolutionSet {
                j: j.clone(),
                kind: SolutionKind::Infinite,
                labels,
                family: Some(family),
                truncated,
                empty_reason: None,
            })
        }
    }
}

/// Parameter points examined per family before the listing is cut short.
const REPRESENTATIVE_BUDGET: usize = 50_000;

/// The witness plus points whose parameters `(t, s)` have sup-norm at most
/// `bound`, visited shell by shell (sup-norm 0, 1, ...) so that a capped list
/// keeps the smallest parameters.
fn representatives(
    family: &SolutionFamily,
    opts: &SolveOptions,
    witness_t: &[Int],
) -> (Vec<OrbitTypeLabel>, bool) {
    let cap = opts.max_representatives.max(1);
    let rho = family.free_params();
    let kdim = family.degree4_kernel.len();
    let mut seen = BTreeSet::new();
    if let Some(w) = family.point(0, witness_t, &vec![0; kdim]) {
        seen.insert(w);
    }
    let mut visited = 0usize;
    for radius in 0..=opts.bound {
        for d in 0..family.discrete.len() {
            for params in shell(rho + kdim, radius) {
                visited += 1;
                if visited > REPRESENTATIVE_BUDGET {
                    return (seen.into_iter().collect(), true);
                }
                let (t, s) = params.split_at(rho);
                if let Some(label) = family.point(d, t, s) {
                    if seen.len() >= cap && !seen.contains(&label) {
                        return (seen.into_iter().collect(), true);
                    }
                    seen.insert(label);
                }
            }
        }
    }
    (seen.into_iter().collect(), false)
}

/// Integer vectors of length `dims` with sup-norm exactly `radius`, grouped
/// by the first coordinate of absolute value `radius`.
fn shell(dims: usize, radius: Int) -> Box<dyn Iterator<Item = Vec<Int>>> {
    if radius == 0 {
        return Box::new(std::iter::once(vec![0; dims]));
    }
    Box::new((0..dims).flat_map(move |p| {
        [-radius, radius].into_iter().flat_map(move |pivot| {
            let mut sides = vec![2 * radius - 1; p];
            sides.extend(std::iter::repeat_n(2 * radius + 1, dims - p - 1));
            TupleIter::new(&sides).map(move |v| {
                let mut out = Vec::with_capacity(dims);
                out.extend(v[..p].iter().map(|x| x - (radius - 1)));
                out.push(pivot);
                out.extend(v[p..].iter().map(|x| x - radius));
                out
            })
        })
    }))
}

/// Lazy odometer over `0 <= v_i < sides[i]`, last coordinate fastest.
struct TupleIter {
    sides: Vec<Int>,
    next: Option<Vec<Int>>,
}

impl TupleIter {
    fn new(sides: &[Int]) -> Self {
        let start = sides.iter().all(|&s| s > 0).then(|| vec![0; sides.len()]);
        Self { sides: sides.to_vec(), next: start }
    }
}

impl Iterator for TupleIter {
    type Item = Vec<Int>;

    fn next(&mut self) -> Option<Vec<Int>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.sides[i] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// `K̂(P)_J`: solutions modulo permutations of indices with equal `(k, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumClasses {
    /// Canonical signature.
    pub j: HoweSignature,
    pub kind: SolutionKind,
    /// Canonical labels, deduplicated and sorted; all classes when finite.
    pub classes: Vec<OrbitTypeLabel>,
    /// Family description in the canonical index order.
    pub family: Option<SolutionFamily>,
    pub truncated: bool,
    pub empty_reason: Option<String>,
}

impl StratumClasses {
    pub fn family_rank(&self) -> usize {
        self.family.as_ref().map_or(0, SolutionFamily::rank)
    }
}

fn canonical_family(f: &SolutionFamily, perm: &[usize]) -> SolutionFamily {
    let r = f.j.r();
    let permute = |v: &Vec<Int>| perm.iter().map(|&i| v[i]).collect::<Vec<_>>();
    let kernel = hnf_rows(&f.degree4_kernel.iter().map(permute).collect::<Vec<_>>(), r);
    let offset = if f.degree4_offset.is_empty() {
        vec![]
    } else {
        reduce_mod_hnf(&permute(&f.degree4_offset), &kernel)
    };
    let charge_basis = hnf_rows(&f.charge_basis.iter().map(permute).collect::<Vec<_>>(), r);
    let mut canonical = SolutionFamily {
        j: f.j.permuted(perm),
        b2: f.b2,
        intersection_form: f.intersection_form.clone(),
        charge_basis,
        gram: vec![],
        condition: f.condition.clone(),
        degree4_offset: offset,
        degree4_kernel: kernel,
        discrete: {
            let mut d: Vec<DiscretePart> = f
                .discrete
                .iter()
                .map(|p| DiscretePart {
                    xi: p.xi.clone(),
                    torsion: perm.iter().map(|&i| p.torsion[i].clone()).collect(),
                })
                .collect();
            d.sort();
            d
        },
        witness: f.witness.permuted(perm),
    };
    let m: Vec<Int> = canonical.j.m().iter().map(|&x| x as Int).collect();
    canonical.gram = gram_matrix(&canonical.charge_basis, &m, &canonical.intersection_form);
    canonical
}

/// Gram matrix `(B M Bᵀ) ⊗ ω` of the quadratic part in the parameters `t`.
fn gram_matrix(charge_basis: &IntMatrix, m: &[Int], form: &IntMatrix) -> IntMatrix {
    let r = m.len();
    let b2 = form.len();
    let rho = charge_basis.len() * b2;
    let weight = |i: usize, l: usize| {
        if i == l {
            m[i] * (m[i] - 1)
        } else {
            m[i] * m[l]
        }
    };
    let mut gram = vec![vec![0; rho]; rho];
    for (a, ba) in charge_basis.iter().enumerate() {
        for (b, bb) in charge_basis.iter().enumerate() {
            let mut coupling = 0;
            for i in 0..r {
                for l in 0..r {
                    coupling += ba[i] * weight(i, l) * bb[l];
                }
            }
            for p in 0..b2 {
                for q in 0..b2 {
                    gram[a * b2 + p][b * b2 + q] = coupling * form[p][q];
                }
            }
        }
    }
    gram
}

/// Quotients each solution set by simultaneous permutations of its indices.
/// Sets whose signatures agree up to permutation are merged; the output is
/// sorted by the canonical signature's pair sequence.
pub fn quotient_classes(sets: &[SolutionSet]) -> Vec<StratumClasses> {
    let mut merged: Vec<StratumClasses> = Vec::new();
    for set in sets {
        let perm = set.j.canonical_permutation();
        let j = set.j.permuted(&perm);
        let mut classes: Vec<OrbitTypeLabel> =
            set.labels.iter().map(OrbitTypeLabel::canonical).collect();
        classes.sort();
        classes.dedup();
        let entry = StratumClasses {
            j: j.clone(),
            kind: set.kind,
            classes,
            family: set.family.as_ref().map(|f| canonical_family(f, &perm)),
            truncated: set.truncated,
            empty_reason: set.empty_reason.clone(),
        };
        match merged.iter_mut().find(|e| e.j == j) {
            None => merged.push(entry),
            Some(existing) => {
                existing.classes.extend(entry.classes);
                existing.classes.sort();
                existing.classes.dedup();
                existing.truncated |= entry.truncated;
            }
        }
    }
    merged.sort_by_key(|e| pair_key(&e.j));
    merged
}

fn pair_key(j: &HoweSignature) -> Vec<(u32, u32)> {
    j.pairs().collect()
}

/// One stratum type of the catalog with its structural data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub j: HoweSignature,
    pub derived: SignatureDerived,
    pub homotopy: Vec<HomotopyGroup>,
    pub solutions: StratumClasses,
}

/// `K̂(P)` for all Howe signatures of a given `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub n: u32,
    pub manifold: String,
    pub c2: Int,
    pub strata: Vec<Stratum>,
}

impl Catalog {
    /// The stratum of the canonical form of `j`, if listed.
    pub fn stratum(&self, j: &HoweSignature) -> Option<&Stratum> {
        let j = j.canonicalize();
        self.strata.iter().find(|s| s.j == j)
    }
}

/// Classifies the strata for `SU(n)` over `model` in `sector`.
pub fn classify(
    n: u32,
    model: &ManifoldModel,
    sector: &BundleSector,
    opts: &SolveOptions,
) -> Result<Catalog> {
    let sigs = enumerate_classes(n)?;
    classify_signatures(&sigs, model, sector, opts)
}

/// As [`classify`] for an explicit list of signatures of a common `n`, in
/// any order and with repetitions allowed.
pub fn classify_signatures(
    sigs: &[HoweSignature],
    model: &ManifoldModel,
    sector: &BundleSector,
    opts: &SolveOptions,
) -> Result<Catalog> {
    let Some(first) = sigs.first() else {
        return Err(Error::InvalidInput("no signatures to classify".into()));
    };
    let n = first.n();
    if let Some(bad) = sigs.iter().find(|j| j.n() != n) {
        return Err(Error::InvalidInput(format!("{bad} has n = {}, expected {n}", bad.n())));
    }
    sector.check(model)?;
    if n == 1 && sector.c2.coeff != 0 {
        return Err(Error::InconsistentSector("SU(1)-bundles have c2 = 0".into()));
    }
    let mut canonical: Vec<HoweSignature> = sigs.iter().map(HoweSignature::canonicalize).collect();
    canonical.sort_by_key(pair_key);
    canonical.dedup();
    let sets = canonical
        .iter()
        .map(|j| solve_system(j, model, sector, opts))
        .collect::<Result<Vec<_>>>()?;
    let strata = quotient_classes(&sets)
        .into_iter()
        .map(|solutions| Stratum {
            j: solutions.j.clone(),
            derived: solutions.j.derived(),
            homotopy: solutions.j.homotopy_groups(),
            solutions,
        })
        .collect();
    Ok(Catalog { n: n as u32, manifold: model.name().to_string(), c2: sector.c2.coeff, strata })
}
