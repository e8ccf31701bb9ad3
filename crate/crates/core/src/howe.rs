//! Howe signatures `J = (k | m)` labelling the conjugacy classes of Howe
//! subgroups `SU(J)` of `SU(n)`, together with their structural data.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_signatures`]; `|K(16)| = 877820`.
pub const MAX_ORDERED_N: u32 = 16;
/// Largest `n` accepted by [`enumerate_classes`]; there are 848209 classes
/// for `n = 32`.
pub const MAX_CLASS_N: u32 = 32;

/// A pair of equal-length sequences of positive integers with
/// `sum k_i m_i = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HoweSignature {
    k: Vec<u32>,
    m: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureDerived {
    /// gcd of the multiplicities; the number of connected components of `SU(J)`.
    pub g: u32,
    pub m_tilde: Vec<u32>,
    /// Number of indices with `k_i > 1`.
    pub r_star: usize,
    /// `dim SU(J) = sum k_i^2 - 1`.
    pub dim: u64,
}

impl HoweSignature {
    pub fn new(k: Vec<u32>, m: Vec<u32>) -> Result<Self> {
        if k.is_empty() || k.len() != m.len() {
            return Err(Error::InvalidInput(format!(
                "signature needs two nonempty sequences of equal length, got {} and {}",
                k.len(),
                m.len()
            )));
        }
        if k.iter().chain(&m).any(|&x| x == 0) {
            return Err(Error::InvalidInput("signature entries must be positive".into()));
        }
        Ok(Self { k, m })
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn r(&self) -> usize {
        self.k.len()
    }

    pub fn n(&self) -> u64 {
        self.k.iter().zip(&self.m).map(|(&k, &m)| k as u64 * m as u64).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.k.iter().copied().zip(self.m.iter().copied())
    }

    pub fn g(&self) -> u32 {
        self.m.iter().fold(0, |acc, &x| acc.gcd(&x))
    }

    pub fn derived(&self) -> SignatureDerived {
        let g = self.g();
        SignatureDerived {
            g,
            m_tilde: self.m.iter().map(|&x| x / g).collect(),
            r_star: self.k.iter().filter(|&&k| k > 1).count(),
            dim: self.k.iter().map(|&k| (k as u64).pow(2)).sum::<u64>() - 1,
        }
    }

    /// Stable permutation sorting the index pairs descending; position `i` of
    /// the canonical signature holds the pair at index `perm[i]` of `self`.
    pub fn canonical_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.r()).collect();
        perm.sort_by(|&a, &b| (self.k[b], self.m[b]).cmp(&(self.k[a], self.m[a])));
        perm
    }

    /// Representative of the permutation class with pairs `(k_i, m_i)` in
    /// descending lexicographic order.
    pub fn canonicalize(&self) -> HoweSignature {
        self.permuted(&self.canonical_permutation())
    }

    pub fn is_canonical(&self) -> bool {
        self.pairs().zip(self.pairs().skip(1)).all(|(a, b)| a >= b)
    }

    /// The signature whose `i`-th pair is the `perm[i]`-th pair of `self`.
    pub fn permuted(&self, perm: &[usize]) -> HoweSignature {
        HoweSignature {
            k: perm.iter().map(|&i| self.k[i]).collect(),
            m: perm.iter().map(|&i| self.m[i]).collect(),
        }
    }

    pub fn homotopy_groups(&self) -> Vec<HomotopyGroup> {
        let g = self.g();
        let mut out = vec![
            HomotopyGroup {
                degree: 0,
                free_rank: 0,
                torsion_factors: if g == 1 { vec![] } else { vec![g as u64] },
            },
            HomotopyGroup { degree: 1, free_rank: self.r() - 1, torsion_factors: vec![] },
        ];
        for degree in 2..=4 {
            let mut sum = HomotopyGroup { degree, free_rank: 0, torsion_factors: vec![] };
            for &k in &self.k {
                let part = unitary_homotopy(k, degree).expect("degree in range");
                sum.free_rank += part.free_rank;
                sum.torsion_factors.extend(part.torsion_factors);
            }
            out.push(sum);
        }
        out
    }
}

impl fmt::Display for HoweSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u32]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({}|{})", join(&self.k), join(&self.m))
    }
}

impl FromStr for HoweSignature {
    type Err = Error;

    /// Parses `k1,...,kr|m1,...,mr`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
        let (ks, ms) = t
            .split_once('|')
            .ok_or_else(|| Error::InvalidInput(format!("signature `{s}` lacks `|`")))?;
        let parse = |part: &str| -> Result<Vec<u32>> {
            part.split(',')
                .map(|x| {
                    x.trim().parse::<u32>().map_err(|_| {
                        Error::InvalidInput(format!("bad signature entry `{}` in `{s}`", x.trim()))
                    })
                })
                .collect()
        };
        HoweSignature::new(parse(ks)?, parse(ms)?)
    }
}

/// Homotopy group in a fixed degree: `Z^free_rank ⊕ ⊕ Z_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyGroup {
    pub degree: u32,
    pub free_rank: usize,
    pub torsion_factors: Vec<u64>,
}

impl HomotopyGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }
}

impl fmt::Display for HomotopyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion_factors.iter().map(|t| format!("Z_{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// `pi_i(U(k))` for `2 <= i <= 4`. Stable-range and low-rank values:
/// `pi_2 = 0`; `pi_3(U1) = 0`, `pi_3(Uk) = Z` for `k >= 2`;
/// `pi_4(U1) = 0`, `pi_4(U2) = Z_2`, `pi_4(Uk) = 0` for `k >= 3`.
pub fn unitary_homotopy(k: u32, degree: u32) -> Result<HomotopyGroup> {
    let (free_rank, torsion_factors) = match (degree, k) {
        (2, _) => (0, vec![]),
        (3, 1) => (0, vec![]),
        (3, _) => (1, vec![]),
        (4, 2) => (0, vec![2]),
        (4, _) => (0, vec![]),
        _ => {
            return Err(Error::InvalidInput(format!(
                "unitary homotopy table covers degrees 2..=4, got {degree}"
            )))
        }
    };
    Ok(HomotopyGroup { degree, free_rank, torsion_factors })
}

fn check_bound(n: u32, max: u32) -> Result<()> {
    if n == 0 || n > max {
        Err(Error::OutOfBounds { n: n as u64, max: max as u64 })
    } else {
        Ok(())
    }
}

/// All of `K(n)`: ordered sequences of pairs. Generated depth first over the
/// remaining budget, each position trying `k` ascending, then `m` ascending.
pub fn enumerate_signatures(n: u32) -> Result<Vec<HoweSignature>> {
    check_bound(n, MAX_ORDERED_N)?;
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    ordered_rec(n, &mut prefix, &mut out, None);
    Ok(out)
}

/// Canonical representatives of `K(n)` modulo simultaneous permutation,
/// in the same depth-first order restricted to non-increasing pair sequences.
pub fn enumerate_classes(n: u32) -> Result<Vec<HoweSignature>> {
    check_bound(n, MAX_CLASS_N)?;
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    ordered_rec(n, &mut prefix, &mut out, Some((u32::MAX, u32::MAX)));
    Ok(out)
}

fn ordered_rec(
    remaining: u32,
    prefix: &mut Vec<(u32, u32)>,
    out: &mut Vec<HoweSignature>,
    ceiling: Option<(u32, u32)>,
) {
    if remaining == 0 {
        out.push(HoweSignature::from_pairs(prefix).expect("nonempty prefix"));
        return;
    }
    for k in 1..=remaining {
        for m in 1..=remaining / k {
            if ceiling.is_some_and(|c| (k, m) > c) {
                continue;
            }
            prefix.push((k, m));
            ordered_rec(remaining - k * m, prefix, out, ceiling.map(|_| (k, m)));
            prefix.pop();
        }
    }
}
