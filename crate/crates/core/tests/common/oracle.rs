//! Independent brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the solver. Manifold data is written out by hand and
//! the characteristic-class equations are evaluated by expanding the total
//! Chern class in a truncated graded ring.

use std::collections::{BTreeMap, BTreeSet};

/// Hand-written cohomology of a base manifold.
#[derive(Debug, Clone)]
pub struct OracleManifold {
    pub b1: usize,
    pub form: Vec<Vec<i64>>,
    /// Torsion of `H^2(M, Z)`.
    pub torsion: Vec<i64>,
    pub has_h4: bool,
}

impl OracleManifold {
    pub fn s4() -> Self {
        Self { b1: 0, form: vec![], torsion: vec![], has_h4: true }
    }

    pub fn s2xs2() -> Self {
        Self { b1: 0, form: vec![vec![0, 1], vec![1, 0]], torsion: vec![], has_h4: true }
    }

    /// `L(p,1) x S^1`: `H^1 = Z`, `H^2 = Z_p`, `H^4 = Z`.
    pub fn lens(p: i64) -> Self {
        Self { b1: 1, form: vec![], torsion: vec![p], has_h4: true }
    }

    fn b2(&self) -> usize {
        self.form.len()
    }

    fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.form[i][j] * yj;
            }
        }
        s
    }
}

/// A degree-two class: free coordinates and torsion residues.
pub type Class2 = (Vec<i64>, Vec<i64>);

/// `(alpha^(2), alpha^(4))` without the `H^1(M, Z_g)` component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RawLabel {
    pub alpha2: Vec<Class2>,
    pub alpha4: Vec<i64>,
}

/// Element `1 + a2 + a4` of the truncated ring `H^0 ⊕ H^2_free ⊕ H^4`.
#[derive(Clone)]
struct Truncated {
    a0: i64,
    a2: Vec<i64>,
    a4: i64,
}

impl Truncated {
    fn mul(&self, other: &Truncated, m: &OracleManifold) -> Truncated {
        Truncated {
            a0: self.a0 * other.a0,
            a2: self.a2.iter().zip(&other.a2).map(|(x, y)| self.a0 * y + other.a0 * x).collect(),
            a4: self.a0 * other.a4 + other.a0 * self.a4 + m.pair(&self.a2, &other.a2),
        }
    }
}

/// Degree-four part of `prod_i (1 + alpha_i^(2) + alpha_i^(4))^{m_i}`.
pub fn total_c2(m: &[u32], label: &RawLabel, model: &OracleManifold) -> i64 {
    let mut acc = Truncated { a0: 1, a2: vec![0; model.b2()], a4: 0 };
    for (i, &mi) in m.iter().enumerate() {
        let factor = Truncated { a0: 1, a2: label.alpha2[i].0.clone(), a4: label.alpha4[i] };
        for _ in 0..mi {
            acc = acc.mul(&factor, model);
        }
    }
    acc.a4
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Lazy cartesian product, last coordinate fastest.
struct Odometer<'a> {
    sides: &'a [Vec<i64>],
    index: Option<Vec<usize>>,
}

fn odometer(sides: &[Vec<i64>]) -> Odometer<'_> {
    let start = sides.iter().all(|s| !s.is_empty()).then(|| vec![0; sides.len()]);
    Odometer { sides, index: start }
}

impl Iterator for Odometer<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let index = self.index.as_mut()?;
        let item = index.iter().zip(self.sides).map(|(&i, side)| side[i]).collect();
        let mut pos = index.len();
        loop {
            if pos == 0 {
                self.index = None;
                break;
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < self.sides[pos].len() {
                break;
            }
            index[pos] = 0;
        }
        Some(item)
    }
}

/// Every `(alpha^(2), alpha^(4))` in the box that solves the system, with the
/// number of `xi` completing it.
///
/// Box: free coordinates of all classes and all but the last free `alpha^(4)`
/// in `[-bound, bound]` (the free part of the last class is solved for); torsion residues range fully; the last free
/// `alpha^(4)` is solved exactly. The `xi` count comes from the exact
/// sequence `H^1(M,Z) -> H^1(M,Z_g) -> H^2(M,Z) -> H^2(M,Z)`: a class `y` is
/// hit iff `g y = 0`, and then by `g^{b1}` elements.
pub fn box_solutions(
    k: &[u32],
    m: &[u32],
    model: &OracleManifold,
    c2: i64,
    bound: i64,
) -> BTreeMap<RawLabel, usize> {
    let r = k.len();
    let g = m.iter().fold(0i64, |acc, &x| gcd(acc, x as i64));
    let b2 = model.b2();
    let range: Vec<i64> = (-bound..=bound).collect();
    let mut sides = Vec::new();
    for i in 0..r {
        let free_side = if i + 1 == r { vec![0] } else { range.clone() };
        sides.extend(std::iter::repeat_n(free_side, b2));
        sides.extend(model.torsion.iter().map(|&d| (0..d).collect::<Vec<_>>()));
    }
    let free4: Vec<usize> =
        if model.has_h4 { (0..r).filter(|&i| k[i] > 1).collect() } else { vec![] };
    let (solved, boxed) = match free4.split_last() {
        Some((&last, rest)) => (Some(last), rest.to_vec()),
        None => (None, vec![]),
    };
    sides.extend(std::iter::repeat_n(range.clone(), boxed.len()));

    let width = b2 + model.torsion.len();
    let mut out = BTreeMap::new();
    for point in odometer(&sides) {
        // The free part of the last class is forced by sum m_i alpha_i = 0.
        let mut alpha2: Vec<Class2> = (0..r)
            .map(|i| {
                let chunk = &point[i * width..(i + 1) * width];
                (chunk[..b2].to_vec(), chunk[b2..].to_vec())
            })
            .collect();
        let last = r - 1;
        let forced: Option<Vec<i64>> = (0..b2)
            .map(|p| {
                let rest: i64 = (0..last).map(|i| m[i] as i64 * alpha2[i].0[p]).sum();
                let ml = m[last] as i64;
                (rest % ml == 0 && (rest / ml).abs() <= bound).then(|| -rest / ml)
            })
            .collect();
        let Some(forced) = forced else { continue };
        alpha2[last].0 = forced;
        let mut alpha4 = vec![0; r];
        for (pos, &i) in boxed.iter().enumerate() {
            alpha4[i] = point[r * width + pos];
        }
        let free_ok =
            (0..b2).all(|p| (0..r).map(|i| m[i] as i64 * alpha2[i].0[p]).sum::<i64>() == 0);
        let tors_ok = model.torsion.iter().enumerate().all(|(q, &d)| {
            (0..r).map(|i| m[i] as i64 * alpha2[i].1[q]).sum::<i64>().rem_euclid(d) == 0
        });
        if !free_ok || !tors_ok {
            continue;
        }
        let mut label = RawLabel { alpha2, alpha4 };
        if let Some(last) = solved {
            let gap = c2 - total_c2(m, &label, model);
            if gap % m[last] as i64 != 0 {
                continue;
            }
            label.alpha4[last] = gap / m[last] as i64;
        }
        if total_c2(m, &label, model) != c2 {
            continue;
        }
        // y = sum m~_i alpha_i must satisfy g y = 0; its free part already
        // vanishes because g times it does.
        let y_tors_ok = model.torsion.iter().enumerate().all(|(q, &d)| {
            let y: i64 = (0..r).map(|i| m[i] as i64 / g * label.alpha2[i].1[q]).sum();
            (g * y).rem_euclid(d) == 0
        });
        if !y_tors_ok {
            continue;
        }
        out.insert(label, (g as usize).pow(model.b1 as u32));
    }
    out
}

/// Ordered Howe signatures of `n`: sequences of pairs `(k, m)` with
/// `sum k m = n`.
pub fn ordered_signatures(n: u32) -> Vec<Vec<(u32, u32)>> {
    fn go(rest: u32, prefix: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in 1..=rest {
            for m in 1..=rest / k {
                prefix.push((k, m));
                go(rest - k * m, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = vec![];
    go(n, &mut vec![], &mut out);
    out
}

/// Multisets of pairs: ordered signatures with sorted pairs, deduplicated.
pub fn signature_multisets(n: u32) -> BTreeSet<Vec<(u32, u32)>> {
    ordered_signatures(n)
        .into_iter()
        .map(|mut s| {
            s.sort();
            s
        })
        .collect()
}

pub fn divisor_count(l: u64) -> usize {
    (1..=l).filter(|d| l.is_multiple_of(*d)).count()
}
