//! Coordinate models for the low-degree integral cohomology of a compact,
//! connected, orientable base manifold of dimension at most four.
//!
//! A model fixes `H^1(M,Z) = Z^b1`, `H^2(M,Z) = Z^b2 ⊕ ⊕_j Z_{d_j}` (the torsion
//! is copied from `H_1`), `H^4(M,Z) = Z` or `0`, and the symmetric cup-product
//! form `H^2 × H^2 -> H^4` on the free part. Degree three never enters the
//! classification and is not represented.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Int;

/// Finitely generated abelian group `Z^free_rank ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_t}`
/// with `d_1 | d_2 | ... | d_t` and every `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub invariant_factors: Vec<Int>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        Self { free_rank: 0, invariant_factors: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, invariant_factors: vec![] }
    }

    /// Normalizes a direct sum of cyclic groups (orders `>= 1`) into
    /// invariant-factor form.
    pub fn from_cyclic(free_rank: usize, orders: &[Int]) -> Self {
        let mut d: Vec<Int> = orders.iter().map(|x| x.abs()).filter(|&x| x != 1).collect();
        // diag(a, b) ~ diag(gcd, lcm); a bubble pass per slot settles the chain
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                let (a, b) = (d[i], d[j]);
                d[i] = a.gcd(&b);
                d[j] = a.lcm(&b);
            }
        }
        d.retain(|&x| x != 1);
        Self { free_rank, invariant_factors: d }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Cardinality, or `None` for infinite groups.
    pub fn order(&self) -> Option<u128> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().map(|&d| d as u128).product())
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// Element of `H^2(M,Z)`: free coordinates and torsion coordinates reduced
/// into `[0, d_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CohClass2 {
    pub free: Vec<Int>,
    pub torsion: Vec<Int>,
}

impl CohClass2 {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(|&x| x == 0)
    }
}

impl fmt::Display for CohClass2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Int]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.torsion.is_empty() {
            write!(f, "[{}]", join(&self.free))
        } else {
            write!(f, "[{};{}]", join(&self.free), join(&self.torsion))
        }
    }
}

/// Element of `H^4(M,Z)`, the coefficient of the orientation generator.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct CohClass4 {
    pub coeff: Int,
}

impl CohClass4 {
    pub fn new(coeff: Int) -> Self {
        Self { coeff }
    }
}

/// Element of `H^1(M,Z_g) = Z_g^b1 ⊕ ⊕_j Z_{gcd(d_j, g)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CohClass1ModG {
    pub g: Int,
    pub components: Vec<Int>,
}

impl CohClass1ModG {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&x| x == 0)
    }
}

/// Exact model of a base manifold. Serialized form is the model-file schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldModel {
    name: String,
    dim: u32,
    b1: usize,
    h1_torsion: Vec<Int>,
    b2: usize,
    intersection_form: Vec<Vec<Int>>,
    h4_rank: u32,
}

impl ManifoldModel {
    pub fn new(
        name: impl Into<String>,
        dim: u32,
        b1: usize,
        h1_torsion: Vec<Int>,
        b2: usize,
        intersection_form: Vec<Vec<Int>>,
        h4_rank: u32,
    ) -> Result<Self> {
        let model = Self { name: name.into(), dim, b1, h1_torsion, b2, intersection_form, h4_rank };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ModelInvariant(msg));
        if !(2..=4).contains(&self.dim) {
            return bad(format!("dim must be 2, 3 or 4, got {}", self.dim));
        }
        if self.h4_rank > 1 {
            return bad(format!("h4_rank must be 0 or 1, got {}", self.h4_rank));
        }
        if (self.h4_rank == 1) != (self.dim == 4) {
            return bad(format!(
                "h4_rank = {} is inconsistent with dim = {} (H^4 is Z exactly in dimension 4)",
                self.h4_rank, self.dim
            ));
        }
        if let Some(d) = self.h1_torsion.iter().find(|&&d| d < 2) {
            return bad(format!("torsion factors must be >= 2, got {d}"));
        }
        if self.h1_torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return bad(format!(
                "torsion factors {:?} do not form a divisibility chain",
                self.h1_torsion
            ));
        }
        if self.intersection_form.len() != self.b2
            || self.intersection_form.iter().any(|row| row.len() != self.b2)
        {
            return bad(format!("intersection form must be {0}x{0}", self.b2));
        }
        for i in 0..self.b2 {
            for j in 0..i {
                if self.intersection_form[i][j] != self.intersection_form[j][i] {
                    return bad(format!("intersection form is not symmetric at ({i},{j})"));
                }
            }
        }
        if self.dim < 4 && self.intersection_form.iter().flatten().any(|&x| x != 0) {
            return bad("a nonzero intersection form requires dim = 4".into());
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn b1(&self) -> usize {
        self.b1
    }

    pub fn b2(&self) -> usize {
        self.b2
    }

    pub fn h1_torsion(&self) -> &[Int] {
        &self.h1_torsion
    }

    /// Torsion factors of `H^2(M,Z)`; equal to those of `H_1(M)`.
    pub fn h2_torsion(&self) -> &[Int] {
        &self.h1_torsion
    }

    pub fn intersection_form(&self) -> &[Vec<Int>] {
        &self.intersection_form
    }

    pub fn h4_rank(&self) -> u32 {
        self.h4_rank
    }

    pub fn is_surface(&self) -> bool {
        self.dim == 2
    }

    pub fn h2(&self) -> FinAbGroup {
        FinAbGroup::from_cyclic(self.b2, &self.h1_torsion)
    }

    pub fn h4(&self) -> FinAbGroup {
        FinAbGroup::free(self.h4_rank as usize)
    }

    /// Orders of the coordinate factors of `H^1(M,Z_g)`: `g` for each of the
    /// `b1` free directions, then `gcd(d_j, g)` per torsion factor.
    pub fn h1_mod_orders(&self, g: Int) -> Vec<Int> {
        std::iter::repeat_n(g, self.b1).chain(self.h1_torsion.iter().map(|d| d.gcd(&g))).collect()
    }

    pub fn h1_mod(&self, g: Int) -> FinAbGroup {
        FinAbGroup::from_cyclic(0, &self.h1_mod_orders(g))
    }

    /// Every element of `H^1(M,Z_g)`, in lexicographic coordinate order.
    pub fn h1_mod_elements(&self, g: Int) -> Vec<CohClass1ModG> {
        odometer(&self.h1_mod_orders(g))
            .into_iter()
            .map(|components| CohClass1ModG { g, components })
            .collect()
    }

    pub fn class1(&self, g: Int, components: Vec<Int>) -> Result<CohClass1ModG> {
        let orders = self.h1_mod_orders(g);
        if components.len() != orders.len() {
            return Err(Error::CoordinateMismatch(format!(
                "H^1(M,Z_{g}) has {} coordinates, got {}",
                orders.len(),
                components.len()
            )));
        }
        let components = components.iter().zip(&orders).map(|(x, o)| x.mod_floor(o)).collect();
        Ok(CohClass1ModG { g, components })
    }

    pub fn zero2(&self) -> CohClass2 {
        CohClass2 { free: vec![0; self.b2], torsion: vec![0; self.h1_torsion.len()] }
    }

    /// Builds an `H^2` class, reducing torsion coordinates.
    pub fn class2(&self, free: Vec<Int>, torsion: Vec<Int>) -> Result<CohClass2> {
        if free.len() != self.b2 || torsion.len() != self.h1_torsion.len() {
            return Err(Error::CoordinateMismatch(format!(
                "H^2 of {} has {} free and {} torsion coordinates, got {} and {}",
                self.name,
                self.b2,
                self.h1_torsion.len(),
                free.len(),
                torsion.len()
            )));
        }
        let torsion = torsion.iter().zip(&self.h1_torsion).map(|(x, d)| x.mod_floor(d)).collect();
        Ok(CohClass2 { free, torsion })
    }

    pub fn check2(&self, x: &CohClass2) -> Result<()> {
        let ok = x.free.len() == self.b2
            && x.torsion.len() == self.h1_torsion.len()
            && x.torsion.iter().zip(&self.h1_torsion).all(|(t, d)| (0..*d).contains(t));
        if ok {
            Ok(())
        } else {
            Err(Error::CoordinateMismatch(format!(
                "{x} is not a reduced H^2 class of {}",
                self.name
            )))
        }
    }

    pub fn check1(&self, xi: &CohClass1ModG, g: Int) -> Result<()> {
        let orders = self.h1_mod_orders(g);
        let ok = xi.g == g
            && xi.components.len() == orders.len()
            && xi.components.iter().zip(&orders).all(|(x, o)| (0..*o).contains(x));
        if ok {
            Ok(())
        } else {
            Err(Error::CoordinateMismatch(format!(
                "{:?} is not a reduced element of H^1({},Z_{g})",
                xi.components, self.name
            )))
        }
    }

    /// `sum_i w_i x_i` in `H^2(M,Z)`.
    pub fn weighted_sum2(&self, weights: &[Int], classes: &[CohClass2]) -> Result<CohClass2> {
        if weights.len() != classes.len() {
            return Err(Error::CoordinateMismatch(format!(
                "{} weights for {} classes",
                weights.len(),
                classes.len()
            )));
        }
        let mut free = vec![0; self.b2];
        let mut torsion = vec![0; self.h1_torsion.len()];
        for (&w, x) in weights.iter().zip(classes) {
            self.check2(x)?;
            for (acc, v) in free.iter_mut().zip(&x.free) {
                *acc += w * v;
            }
            for (acc, v) in torsion.iter_mut().zip(&x.torsion) {
                *acc += w * v;
            }
        }
        self.class2(free, torsion)
    }

    pub fn bockstein(&self, g: Int) -> Bockstein {
        let tors = self.h1_torsion.len();
        let mut images = Vec::with_capacity(self.b1 + tors);
        for _ in 0..self.b1 {
            images.push(self.zero2());
        }
        for (j, &d) in self.h1_torsion.iter().enumerate() {
            let mut x = self.zero2();
            x.torsion[j] = (d / d.gcd(&g)) % d;
            images.push(x);
        }
        Bockstein { g, images, b2: self.b2, torsion: self.h1_torsion.clone() }
    }

    /// Cup product `H^2 × H^2 -> H^4` on free parts; torsion classes and
    /// everything below dimension four map to zero.
    pub fn cup22(&self, x: &CohClass2, y: &CohClass2) -> Result<CohClass4> {
        self.check2(x)?;
        self.check2(y)?;
        Ok(CohClass4::new(self.pair_free(&x.free, &y.free)))
    }

    /// Intersection pairing of two free coordinate vectors.
    pub fn pair_free(&self, x: &[Int], y: &[Int]) -> Int {
        if self.h4_rank == 0 {
            return 0;
        }
        let mut acc = 0;
        for (i, row) in self.intersection_form.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                acc += x[i] * w * y[j];
            }
        }
        acc
    }
}

/// The connecting map `H^1(M,Z_g) -> H^2(M,Z)` of `0 -> Z -g-> Z -> Z_g -> 0`,
/// stored by its values on coordinate generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bockstein {
    pub g: Int,
    pub images: Vec<CohClass2>,
    b2: usize,
    torsion: Vec<Int>,
}

impl Bockstein {
    pub fn apply(&self, xi: &CohClass1ModG) -> CohClass2 {
        let mut free = vec![0; self.b2];
        let mut torsion = vec![0; self.torsion.len()];
        for (c, img) in xi.components.iter().zip(&self.images) {
            for (acc, v) in free.iter_mut().zip(&img.free) {
                *acc += c * v;
            }
            for (acc, v) in torsion.iter_mut().zip(&img.torsion) {
                *acc += c * v;
            }
        }
        let torsion = torsion.iter().zip(&self.torsion).map(|(x, d)| x.mod_floor(d)).collect();
        CohClass2 { free, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(CohClass2::is_zero)
    }
}

/// All vectors `v` with `0 <= v_i < orders[i]`, last coordinate fastest.
pub(crate) fn odometer(orders: &[Int]) -> Vec<Vec<Int>> {
    let mut out = vec![Vec::with_capacity(orders.len())];
    for &o in orders {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..o).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Identifiers accepted by [`builtin_manifold`].
pub const CATALOG: &[&str] = &["S4", "S2xS2", "T4", "LensP3xS1", "Sigma"];

/// Catalog models: `S4`, `S2xS2`, `T4`, `LensP3xS1` (parameter `p >= 2`) and
/// the genus-`s` surface `Sigma` (parameter `s >= 0`). Names are matched
/// case-insensitively; `Lens` is accepted for `LensP3xS1`.
pub fn builtin_manifold(name: &str, params: &[Int]) -> Result<ManifoldModel> {
    let key = name.to_ascii_lowercase();
    let no_params = |model: ManifoldModel| {
        if params.is_empty() {
            Ok(model)
        } else {
            Err(Error::InvalidInput(format!("{name} takes no parameters, got {params:?}")))
        }
    };
    let one_param = |what: &str| -> Result<Int> {
        match params {
            [x] => Ok(*x),
            _ => Err(Error::InvalidInput(format!("{name} needs exactly one parameter {what}"))),
        }
    };
    match key.as_str() {
        "s4" => no_params(ManifoldModel::new("S4", 4, 0, vec![], 0, vec![], 1)?),
        "s2xs2" => no_params(ManifoldModel::new(
            "S2xS2",
            4,
            0,
            vec![],
            2,
            vec![vec![0, 1], vec![1, 0]],
            1,
        )?),
        "t4" => no_params(torus4()?),
        "lensp3xs1" | "lens" => {
            let p = one_param("p")?;
            if p < 2 {
                return Err(Error::InvalidInput(format!("lens order p must be >= 2, got {p}")));
            }
            ManifoldModel::new(format!("LensP3xS1(p={p})"), 4, 1, vec![p], 0, vec![], 1)
        }
        "sigma" => {
            let s = one_param("s")?;
            if s < 0 {
                return Err(Error::InvalidInput(format!("genus must be >= 0, got {s}")));
            }
            ManifoldModel::new(
                format!("Sigma(s={s})"),
                2,
                2 * s as usize,
                vec![],
                1,
                vec![vec![0]],
                0,
            )
        }
        _ => Err(Error::UnknownManifold(name.to_string())),
    }
}

/// Index pairs of the `H^2(T^4)` basis `gamma_ij`, `i < j`.
pub const T4_BASIS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

fn torus4() -> Result<ManifoldModel> {
    let mut form = vec![vec![0; 6]; 6];
    for (a, &(i, j)) in T4_BASIS.iter().enumerate() {
        for (b, &(k, l)) in T4_BASIS.iter().enumerate() {
            form[a][b] = levi_civita([i, j, k, l]);
        }
    }
    ManifoldModel::new("T4", 4, 4, vec![], 6, form, 1)
}

fn levi_civita(idx: [usize; 4]) -> Int {
    let mut sign = 1;
    for a in 0..4 {
        for b in a + 1..4 {
            match idx[a].cmp(&idx[b]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

/// Parses and validates a model file (JSON).
pub fn load_manifold(document: &str) -> Result<ManifoldModel> {
    let model: ManifoldModel =
        serde_json::from_str(document).map_err(|e| Error::ModelSchema(e.to_string()))?;
    model.validate()?;
    Ok(model)
}
