//! Serializable reports produced by the command-line front end.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::classifying::{
    integral_ring, modg_ring, postnikov5, PostnikovDecomposition, RingPresentation,
};
use crate::error::Result;
use crate::howe::{HomotopyGroup, HoweSignature};
use crate::nodes::{enumerate_strata, is_node};
use crate::solver::{Catalog, OrbitTypeLabel, SolutionKind};
use crate::{Int, ManifoldModel, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureRecord {
    pub k: Vec<u32>,
    pub m: Vec<u32>,
}

impl From<&HoweSignature> for SignatureRecord {
    fn from(j: &HoweSignature) -> Self {
        Self { k: j.k().to_vec(), m: j.m().to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldRecord {
    pub name: String,
    pub params: Vec<Int>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub free: Vec<Int>,
    pub torsion: Vec<Int>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiRecord {
    pub degree: u32,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl From<&HomotopyGroup> for PiRecord {
    fn from(h: &HomotopyGroup) -> Self {
        Self { degree: h.degree, free_rank: h.free_rank, torsion: h.torsion_factors.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    #[serde(rename = "J")]
    pub j: SignatureRecord,
    pub alpha2: Vec<ClassRecord>,
    pub alpha4: Vec<Int>,
    pub xi: Vec<Int>,
    pub kind: SolutionKind,
    pub family_rank: usize,
    pub dim: u64,
    pub pi: Vec<PiRecord>,
    pub nodal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CountValue {
    Finite(usize),
    Infinite(String),
}

impl std::fmt::Display for CountValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountValue::Finite(n) => write!(f, "{n}"),
            CountValue::Infinite(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub manifold: ManifoldRecord,
    pub n: u32,
    pub c2: Int,
    pub strata: Vec<StratumRecord>,
    pub counts: IndexMap<String, CountValue>,
}

impl ClassificationReport {
    /// Builds the report. Finite strata list every class; infinite strata
    /// list the catalog's representatives, at most `shown` of them; a stratum
    /// without solutions appears once with kind `empty` and no coordinates.
    pub fn build(
        catalog: &Catalog,
        model: &ManifoldModel,
        params: &[Int],
        shown: usize,
    ) -> Result<Self> {
        let mut strata = Vec::new();
        let mut counts = IndexMap::new();
        for s in &catalog.strata {
            let sol = &s.solutions;
            let pi: Vec<PiRecord> = s.homotopy.iter().map(PiRecord::from).collect();
            let rank = sol.family_rank();
            let record = |label: Option<&OrbitTypeLabel>| -> Result<StratumRecord> {
                let nodal = match label {
                    Some(l) if model.is_surface() => Some(is_node(l, model)?),
                    _ => None,
                };
                Ok(StratumRecord {
                    j: SignatureRecord::from(&s.j),
                    alpha2: label.map_or(vec![], |l| {
                        l.alpha2
                            .iter()
                            .map(|a| ClassRecord {
                                free: a.free.clone(),
                                torsion: a.torsion.clone(),
                            })
                            .collect()
                    }),
                    alpha4: label.map_or(vec![], |l| l.alpha4.iter().map(|a| a.coeff).collect()),
                    xi: label.map_or(vec![], |l| l.xi.components.clone()),
                    kind: sol.kind,
                    family_rank: rank,
                    dim: s.derived.dim,
                    pi: pi.clone(),
                    nodal,
                })
            };
            let count = match sol.kind {
                SolutionKind::Empty => {
                    strata.push(record(None)?);
                    CountValue::Finite(0)
                }
                SolutionKind::Finite => {
                    for l in &sol.classes {
                        strata.push(record(Some(l))?);
                    }
                    CountValue::Finite(sol.classes.len())
                }
                SolutionKind::Infinite => {
                    for l in sol.classes.iter().take(shown) {
                        strata.push(record(Some(l))?);
                    }
                    CountValue::Infinite(format!("infinite(rank={rank})"))
                }
            };
            counts.insert(s.j.to_string(), count);
        }
        Ok(Self {
            manifold: ManifoldRecord { name: model.name().to_string(), params: params.to_vec() },
            n: catalog.n,
            c2: catalog.c2,
            strata,
            counts,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "manifold: {}", self.manifold.name);
        let _ = writeln!(out, "n = {}, c2 = {}", self.n, self.c2);
        let mut current: Option<&SignatureRecord> = None;
        for s in &self.strata {
            if current != Some(&s.j) {
                current = Some(&s.j);
                let j = HoweSignature::new(s.j.k.clone(), s.j.m.clone()).expect("valid record");
                let kind = match s.kind {
                    SolutionKind::Empty => "empty".to_string(),
                    SolutionKind::Finite => "finite".to_string(),
                    SolutionKind::Infinite => format!("infinite, family rank {}", s.family_rank),
                };
                let pi: Vec<String> = j.homotopy_groups().iter().map(|h| h.to_string()).collect();
                let _ = writeln!(out);
                let _ = writeln!(out, "J = {j}  dim {}  [{kind}]", s.dim);
                let _ = writeln!(out, "  pi_0..pi_4: {}", pi.join(", "));
            }
            if s.kind == SolutionKind::Empty {
                continue;
            }
            let alpha: Vec<String> = s
                .alpha2
                .iter()
                .map(|a| {
                    if a.free.is_empty() && a.torsion.is_empty() {
                        "0".to_string()
                    } else if a.torsion.is_empty() {
                        format!("{:?}", a.free)
                    } else {
                        format!("{:?};{:?}", a.free, a.torsion)
                    }
                })
                .collect();
            let mut line = format!(
                "  alpha2 = ({})  alpha4 = {:?}  xi = {:?}",
                alpha.join(", "),
                s.alpha4,
                s.xi
            );
            if let Some(nodal) = s.nodal {
                line.push_str(if nodal { "  nodal" } else { "  nonnodal" });
            }
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "counts:");
        for (j, c) in &self.counts {
            let shown = self
                .strata
                .iter()
                .filter(|s| s.kind == SolutionKind::Infinite && format_record(&s.j) == *j);
            match c {
                CountValue::Infinite(_) => {
                    let _ = writeln!(out, "  {j}: {c} ({} representatives shown)", shown.count());
                }
                CountValue::Finite(_) => {
                    let _ = writeln!(out, "  {j}: {c}");
                }
            }
        }
        out
    }
}

fn format_record(j: &SignatureRecord) -> String {
    HoweSignature::new(j.k.clone(), j.m.clone()).map_or_else(|_| String::new(), |j| j.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRow {
    pub xi: Vec<Int>,
    pub charge: Vec<Int>,
    pub nodal: bool,
    /// Exact rational `p/q`; the energy carries an extra factor `4π`.
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeReport {
    #[serde(rename = "J")]
    pub j: SignatureRecord,
    pub genus: u32,
    pub bound: Int,
    pub rows: Vec<NodeRow>,
}

pub fn format_rational(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl NodeReport {
    pub fn build(j: &HoweSignature, genus: u32, bound: Int) -> Result<Self> {
        let rows = enumerate_strata(j, genus, bound)?
            .into_iter()
            .map(|s| NodeRow {
                xi: s.xi.components,
                charge: s.charge,
                nodal: s.nodal,
                coefficient: format_rational(&s.coefficient),
            })
            .collect();
        Ok(Self { j: SignatureRecord::from(j), genus, bound, rows })
    }

    pub fn to_text(&self) -> String {
        let j = format_record(&self.j);
        let mut out = format!("J = {j} on Sigma(s={}), bound {}\n", self.genus, self.bound);
        let _ = writeln!(out, "(nodal: sufficient criterion, some alpha2 nonzero)");
        let _ = writeln!(out, "{:<16} {:<16} {:<10} coefficient", "xi", "c", "nodal");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<16} {:<16} {:<10} 4π·{}",
                format!("{:?}", r.xi),
                format!("{:?}", r.charge),
                if r.nodal { "nodal" } else { "nonnodal" },
                r.coefficient
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Z,
    Zg,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsujReport {
    #[serde(rename = "J")]
    pub j: SignatureRecord,
    pub postnikov: PostnikovDecomposition,
    pub postnikov_text: String,
    pub coefficients: Coefficients,
    pub presentation: String,
    pub ring: RingPresentation,
}

impl BsujReport {
    pub fn build(j: &HoweSignature, coefficients: Coefficients) -> Self {
        let ring = match coefficients {
            Coefficients::Z => integral_ring(j),
            Coefficients::Zg => modg_ring(j),
        };
        let postnikov = postnikov5(j);
        Self {
            j: SignatureRecord::from(j),
            postnikov,
            postnikov_text: postnikov.to_string(),
            coefficients,
            presentation: ring.to_string(),
            ring,
        }
    }

    pub fn to_text(&self) -> String {
        let p = &self.postnikov;
        format!(
            "J = {}\n(B SU J)_5 = {}\n  K(Z_g,1): {} (g = {}), K(Z,2): {}, K(Z,4): {}\nH*(B SU J) = {}\n",
            format_record(&self.j),
            self.postnikov_text,
            p.km_zg1_count,
            p.modulus,
            p.kz2_count,
            p.kz4_count,
            self.presentation
        )
    }
}
