//! Structural data of the classifying space `B SU(J)`: its fifth Postnikov
//! stage, ring presentations of its integral and mod-`g` cohomology, and the
//! cohomology of the Eilenberg–MacLane factors that occur.
//!
//! Presentations are data (generators with degrees, relations as integer
//! combinations of monomials); no ring arithmetic is performed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohomology::FinAbGroup;
use crate::error::{Error, Result};
use crate::howe::HoweSignature;
use crate::Int;

/// `(B SU J)_5 = K(Z_g,1) × K(Z,2)^{r-1} × K(Z,4)^{r*}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostnikovDecomposition {
    /// `1` when `g > 1`, else `0`.
    pub km_zg1_count: u32,
    pub modulus: u32,
    pub kz2_count: usize,
    pub kz4_count: usize,
}

pub fn postnikov5(j: &HoweSignature) -> PostnikovDecomposition {
    let g = j.g();
    let d = j.derived();
    PostnikovDecomposition {
        km_zg1_count: u32::from(g > 1),
        modulus: g,
        kz2_count: j.r() - 1,
        kz4_count: d.r_star,
    }
}

impl fmt::Display for PostnikovDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        if self.km_zg1_count == 1 {
            factors.push(format!("K(Z{},1)", subscript(&self.modulus.to_string())));
        }
        for (count, space) in [(self.kz2_count, "K(Z,2)"), (self.kz4_count, "K(Z,4)")] {
            match count {
                0 => {}
                1 => factors.push(space.to_string()),
                c => factors.push(format!("{space}^{c}")),
            }
        }
        if factors.is_empty() {
            f.write_str("pt")
        } else {
            f.write_str(&factors.join(" × "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientRing {
    Integers,
    Mod(u32),
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => f.write_str("Z"),
            CoefficientRing::Mod(g) => write!(f, "Z{}", subscript(&g.to_string())),
        }
    }
}

/// Generator `x` (degree 1) or `x_ij` (degree `2j`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    /// `(i, j)` for `x_ij`, absent for `x`.
    pub index: Option<(usize, usize)>,
    pub degree: u32,
}

impl Generator {
    fn x() -> Self {
        Self { name: "x".into(), index: None, degree: 1 }
    }

    fn chern(i: usize, j: usize) -> Self {
        let sub = if i < 10 && j < 10 { format!("{i}{j}") } else { format!("{i},{j}") };
        Self { name: format!("x{}", subscript(&sub)), index: Some((i, j)), degree: 2 * j as u32 }
    }
}

/// `coeff * prod gens[g]^e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Int,
    /// Pairs `(generator position, exponent)`.
    pub powers: Vec<(usize, u32)>,
}

/// A relation `sum terms = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub terms: Vec<Term>,
}

impl Relation {
    /// Degree of the first term; relations are homogeneous.
    pub fn degree(&self, generators: &[Generator]) -> u32 {
        self.terms
            .first()
            .map_or(0, |t| t.powers.iter().map(|&(g, e)| generators[g].degree * e).sum())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub coefficient_ring: CoefficientRing,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl RingPresentation {
    fn render_term(&self, t: &Term, first: bool) -> String {
        let mono: String = t
            .powers
            .iter()
            .map(|&(g, e)| {
                let name = &self.generators[g].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}{}", superscript(&e.to_string()))
                }
            })
            .collect();
        let mag = t.coeff.abs();
        let body = if mag == 1 { mono } else { format!("{mag}{mono}") };
        match (first, t.coeff < 0) {
            (true, false) => body,
            (true, true) => format!("−{body}"),
            (false, false) => format!(" + {body}"),
            (false, true) => format!(" − {body}"),
        }
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        write!(f, "{}[{}]", self.coefficient_ring, gens.join(","))?;
        if self.relations.is_empty() {
            return Ok(());
        }
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| r.terms.iter().enumerate().map(|(i, t)| self.render_term(t, i == 0)).collect())
            .collect();
        write!(f, "/({})", rels.join(", "))
    }
}

fn chern_generators(j: &HoweSignature) -> Vec<Generator> {
    j.k()
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| (1..=k as usize).map(move |l| Generator::chern(i + 1, l)))
        .collect()
}

/// Position of `x_{i1}` among the Chern generators.
fn first_chern_positions(j: &HoweSignature) -> Vec<usize> {
    let mut pos = 0;
    j.k()
        .iter()
        .map(|&k| {
            let here = pos;
            pos += k as usize;
            here
        })
        .collect()
}

/// `H*(B SU J, Z)` in degrees up to four is presented by the `x_ij` subject to
/// `m_1 x_11 + ... + m_r x_r1 = 0`.
pub fn integral_ring(j: &HoweSignature) -> RingPresentation {
    let generators = chern_generators(j);
    let terms = first_chern_positions(j)
        .into_iter()
        .zip(j.m())
        .map(|(p, &m)| Term { coeff: m as Int, powers: vec![(p, 1)] })
        .collect();
    RingPresentation {
        coefficient_ring: CoefficientRing::Integers,
        generators,
        relations: vec![Relation { terms }],
    }
}

/// Mod-`g` presentation: `x` of degree one and the `x_ij`, with `x² = 0` for
/// odd `g` and `x² = l (m~_1 x_11 + ... + m~_r x_r1)` for `g = 2l`. Terms with
/// even `m~_i` vanish modulo `g` and are dropped. For `g = 1` the integral
/// presentation is returned over the zero ring `Z₁`, without `x`.
pub fn modg_ring(j: &HoweSignature) -> RingPresentation {
    let g = j.g();
    if g == 1 {
        let mut ring = integral_ring(j);
        ring.coefficient_ring = CoefficientRing::Mod(1);
        return ring;
    }
    let mut generators = vec![Generator::x()];
    generators.extend(chern_generators(j));
    let mut terms = vec![Term { coeff: 1, powers: vec![(0, 2)] }];
    if g.is_multiple_of(2) {
        let l = (g / 2) as Int;
        let d = j.derived();
        for (p, &mt) in first_chern_positions(j).into_iter().zip(&d.m_tilde) {
            if mt % 2 == 1 {
                terms.push(Term { coeff: -l, powers: vec![(p + 1, 1)] });
            }
        }
    }
    RingPresentation {
        coefficient_ring: CoefficientRing::Mod(g),
        generators,
        relations: vec![Relation { terms }],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmSpace {
    /// `K(Z,2)`, modelled by `CP^∞`.
    KZ2,
    /// `K(Z_g,1)`, `g >= 2`.
    KZg1(u32),
}

/// `H^i(space, Z)`.
pub fn em_cohomology(space: EmSpace, i: u32) -> Result<FinAbGroup> {
    match space {
        EmSpace::KZ2 => {
            Ok(if i.is_multiple_of(2) { FinAbGroup::free(1) } else { FinAbGroup::trivial() })
        }
        EmSpace::KZg1(g) if g < 2 => {
            Err(Error::InvalidInput(format!("K(Z_g,1) needs g >= 2, got {g}")))
        }
        EmSpace::KZg1(g) => Ok(match i {
            0 => FinAbGroup::free(1),
            _ if i.is_multiple_of(2) => FinAbGroup::from_cyclic(0, &[g as Int]),
            _ => FinAbGroup::trivial(),
        }),
    }
}

fn map_digits(s: &str, table: &[char; 10]) -> String {
    s.chars().map(|c| c.to_digit(10).map_or(c, |d| table[d as usize])).collect()
}

pub(crate) fn subscript(s: &str) -> String {
    map_digits(s, &['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'])
}

fn superscript(s: &str) -> String {
    map_digits(s, &['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'])
}
