//! Integer points on level sets `{t in Z^k : q(t) = N}` of an integral
//! quadratic form `q(t) = ½ tᵀ G t`, where `G` is symmetric with even
//! diagonal.
//!
//! The radical is split off first. On the nondegenerate remainder:
//! definite forms are enumerated exactly (Fincke–Pohst over exact rationals),
//! binary forms of square discriminant factor over the integers and are
//! solved through divisors, and every other indefinite form has either no
//! point or infinitely many (the integral orthogonal group is then infinite
//! and acts on the level set with infinite orbits). In that last case a
//! witness is searched for; absence is proven by a content or congruence
//! obstruction, and when neither applies the answer is [`Error::Undecided`].

use std::collections::BTreeSet;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlin::{column_hermite, determinant, mat_mul, mat_vec, transpose};
use crate::{Int, IntMatrix};

/// Shape of an integer level set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelSet {
    Empty(String),
    /// Every point, sorted lexicographically; never empty.
    Finite(Vec<Vec<Int>>),
    /// Infinitely many points; one of them is given.
    Infinite(Vec<Int>),
}

/// `½ tᵀ G t`.
pub fn form_value(gram: &IntMatrix, t: &[Int]) -> i128 {
    let mut acc: i128 = 0;
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            acc += t[i] as i128 * g as i128 * t[j] as i128;
        }
    }
    acc / 2
}

/// `tᵀ G u`.
pub fn form_pairing(gram: &IntMatrix, t: &[Int], u: &[Int]) -> i128 {
    let mut acc: i128 = 0;
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            acc += t[i] as i128 * g as i128 * u[j] as i128;
        }
    }
    acc
}

pub fn check_gram(gram: &IntMatrix) -> Result<()> {
    let k = gram.len();
    for (i, row) in gram.iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidInput("Gram matrix must be square".into()));
        }
        if row[i] % 2 != 0 {
            return Err(Error::InvalidInput("Gram matrix must have even diagonal".into()));
        }
        if (0..i).any(|j| row[j] != gram[j][i]) {
            return Err(Error::InvalidInput("Gram matrix must be symmetric".into()));
        }
    }
    Ok(())
}

/// Describes `{t : ½ tᵀ G t = target}`.
pub fn level_set(gram: &IntMatrix, target: Int) -> Result<LevelSet> {
    check_gram(gram)?;
    let k = gram.len();
    let ch = column_hermite(gram, k);
    let v = ch.transform;
    let rank = ch.rank;
    // in the basis given by the columns of v the form is core ⊕ 0
    let full = mat_mul(&mat_mul(&transpose(&v, k), gram, k), &v, k);
    let core: IntMatrix = full[..rank].iter().map(|row| row[..rank].to_vec()).collect();
    let lift = |s: &[Int]| {
        let mut x = s.to_vec();
        x.resize(k, 0);
        mat_vec(&v, &x)
    };
    Ok(match nondegenerate(&core, target)? {
        LevelSet::Empty(why) => LevelSet::Empty(why),
        LevelSet::Finite(points) if rank == k => {
            let mut lifted: Vec<_> = points.iter().map(|p| lift(p)).collect();
            lifted.sort();
            LevelSet::Finite(lifted)
        }
        LevelSet::Finite(points) => LevelSet::Infinite(lift(&points[0])),
        LevelSet::Infinite(w) => LevelSet::Infinite(lift(&w)),
    })
}

fn nondegenerate(c: &IntMatrix, target: Int) -> Result<LevelSet> {
    let k = c.len();
    if k == 0 {
        return Ok(if target == 0 {
            LevelSet::Finite(vec![vec![]])
        } else {
            LevelSet::Empty(format!("the form vanishes identically but the target is {target}"))
        });
    }
    let wide: Vec<Vec<i128>> = c.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let minors: Vec<i128> = (1..=k)
        .map(|s| determinant(&wide[..s].iter().map(|r| r[..s].to_vec()).collect::<Vec<_>>()))
        .collect();
    if minors.iter().all(|&d| d > 0) {
        return definite(c, target);
    }
    if minors.iter().enumerate().all(|(i, &d)| if i % 2 == 0 { d < 0 } else { d > 0 }) {
        let neg: IntMatrix = c.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        return definite(&neg, -target);
    }
    if k == 2 {
        let (a, b, cc) = (c[0][0] as i128 / 2, c[0][1] as i128, c[1][1] as i128 / 2);
        let disc = b * b - 4 * a * cc;
        let s = disc.sqrt();
        if s * s == disc {
            return Ok(split_binary(a, b, cc, s, target as i128));
        }
        if target == 0 {
            // x² - D y² = 0 has only the trivial solution for non-square D
            return Ok(LevelSet::Finite(vec![vec![0, 0]]));
        }
    }
    if let Some(why) = content_obstruction(c, target) {
        return Ok(LevelSet::Empty(why));
    }
    if let Some(w) = find_point(c, target) {
        return Ok(LevelSet::Infinite(w));
    }
    if let Some(why) = local_obstruction(c, target) {
        return Ok(LevelSet::Empty(why));
    }
    Err(Error::Undecided(format!(
        "q(t) = {target} for the indefinite form {c:?}: no point found within the search box and no local obstruction"
    )))
}

type Q = Ratio<i128>;

/// Exact enumeration for positive definite `c`.
fn definite(c: &IntMatrix, target: Int) -> Result<LevelSet> {
    let k = c.len();
    if target < 0 {
        return Ok(LevelSet::Empty(format!("a definite form never takes the value {target}")));
    }
    if target == 0 {
        return Ok(LevelSet::Finite(vec![vec![0; k]]));
    }
    // q(x) = Σ_i d_i (x_i + Σ_{j>i} mu_ij x_j)², stored in place
    let mut q: Vec<Vec<Q>> =
        c.iter().map(|r| r.iter().map(|&x| Q::from_integer(x as i128)).collect()).collect();
    for i in 0..k {
        for j in i + 1..k {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for l in i + 1..k {
            for j in l..k {
                q[l][j] = q[l][j] - q[l][i] * q[i][j];
            }
        }
    }
    let mut found = Vec::new();
    let mut x = vec![0i128; k];
    descend(&q, k - 1, &mut x, Q::from_integer(2 * target as i128), &mut found);
    let mut points: Vec<Vec<Int>> =
        found.into_iter().filter(|p: &Vec<Int>| form_value(c, p) == target as i128).collect();
    points.sort();
    points.dedup();
    Ok(if points.is_empty() {
        LevelSet::Empty(format!("no lattice point of the definite form has value {target}"))
    } else {
        LevelSet::Finite(points)
    })
}

fn descend(q: &[Vec<Q>], i: usize, x: &mut Vec<i128>, rem: Q, out: &mut Vec<Vec<Int>>) {
    let k = q.len();
    let center: Q = (i + 1..k).map(|j| q[i][j] * Q::from_integer(x[j])).sum();
    let radius = (ratio_f64(&(rem / q[i][i])).max(0.0)).sqrt();
    let c = ratio_f64(&center);
    let lo = (-c - radius).floor() as i128 - 1;
    let hi = (-c + radius).ceil() as i128 + 1;
    for xi in lo..=hi {
        let shift = Q::from_integer(xi) + center;
        let used = q[i][i] * shift * shift;
        if used > rem {
            continue;
        }
        x[i] = xi;
        let left = rem - used;
        if i == 0 {
            if left.is_zero() {
                out.push(x.iter().map(|&v| v as Int).collect());
            }
        } else {
            descend(q, i - 1, x, left, out);
        }
    }
    x[i] = 0;
}

fn ratio_f64(r: &Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `a x² + b xy + c y² = n` with `b² - 4ac = s²`, `s > 0`.
fn split_binary(a: i128, b: i128, c: i128, s: i128, n: i128) -> LevelSet {
    let value = |x: i128, y: i128| a * x * x + b * x * y + c * y * y;
    if n == 0 {
        let (x, y) = if a == 0 { (1, 0) } else { (-(b + s), 2 * a) };
        let g = x.gcd(&y);
        debug_assert_eq!(value(x / g, y / g), 0);
        return LevelSet::Infinite(vec![(x / g) as Int, (y / g) as Int]);
    }
    let mut points = BTreeSet::new();
    if a == 0 {
        // y (b x + c y) = n
        for e in signed_divisors(n) {
            let rest = n / e - c * e;
            if rest % b == 0 {
                points.insert((rest / b, e));
            }
        }
    } else {
        // 4a q = (2a x + (b+s) y)(2a x + (b-s) y)
        let p = 4 * a * n;
        for e in signed_divisors(p) {
            let f = p / e;
            if (e - f) % (2 * s) != 0 {
                continue;
            }
            let y = (e - f) / (2 * s);
            let rest = e - (b + s) * y;
            if rest % (2 * a) == 0 {
                points.insert((rest / (2 * a), y));
            }
        }
    }
    let points: Vec<Vec<Int>> = points
        .into_iter()
        .filter(|&(x, y)| value(x, y) == n)
        .map(|(x, y)| vec![x as Int, y as Int])
        .collect();
    if points.is_empty() {
        LevelSet::Empty(format!("the split binary form never takes the value {n}"))
    } else {
        LevelSet::Finite(points)
    }
}

fn signed_divisors(n: i128) -> Vec<i128> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.extend([d, -d]);
            if d * d != n {
                out.extend([n / d, -(n / d)]);
            }
        }
        d += 1;
    }
    out
}

const SEARCH_BUDGET: i128 = 400_000;
const BINARY_RADIUS: i128 = 50_000;
const MAX_SUPPORT: usize = 3;

/// Searches for `t` with `q(t) = n` (nonzero `t` when `n = 0`) among vectors
/// supported on at most a few coordinates, then along isotropic lines.
fn find_point(c: &IntMatrix, n: Int) -> Option<Vec<Int>> {
    let k = c.len();
    let n = n as i128;
    for size in 1..=k.min(MAX_SUPPORT) {
        let subsets = combinations(k, size);
        let per_subset = (SEARCH_BUDGET / subsets.len() as i128).max(25);
        for idx in &subsets {
            let sub: IntMatrix =
                idx.iter().map(|&i| idx.iter().map(|&j| c[i][j]).collect()).collect();
            if let Some(p) = box_search(&sub, n, radius_for(size - 1, per_subset)) {
                let mut t = vec![0; k];
                for (&i, &x) in idx.iter().zip(&p) {
                    t[i] = x;
                }
                return Some(t);
            }
        }
    }
    if n == 0 {
        return None;
    }
    // q(v + x w) = q(v) + x <v, w> along an isotropic w
    let w = find_point(c, 0)?;
    let candidates: Vec<Vec<Int>> = if k <= 4 {
        box_points(k, 4).map(|p| p.iter().map(|&x| x as Int).collect()).collect()
    } else {
        combinations(k, 2)
            .into_iter()
            .flat_map(|ij| {
                [(1, 0), (1, 1), (1, -1), (0, 1)].into_iter().map(move |(a, b)| {
                    let mut v = vec![0; k];
                    v[ij[0]] = a;
                    v[ij[1]] = b;
                    v
                })
            })
            .collect()
    };
    for v in candidates {
        let pair = form_pairing(c, &v, &w);
        let gap = n - form_value(c, &v);
        if pair != 0 && gap % pair == 0 {
            let x = gap / pair;
            let t: Vec<Int> =
                v.iter().zip(&w).map(|(&vi, &wi)| (vi as i128 + x * wi as i128) as Int).collect();
            if form_value(c, &t) == n {
                return Some(t);
            }
        }
    }
    None
}

/// Largest radius `r` with `(2r+1)^dims` within `budget`.
fn radius_for(dims: usize, budget: i128) -> i128 {
    if dims == 0 {
        return 0;
    }
    let mut r: i128 = 0;
    while (2 * r + 3).pow(dims as u32) <= budget && r < BINARY_RADIUS {
        r += 1;
    }
    r
}

fn box_points(dims: usize, radius: i128) -> impl Iterator<Item = Vec<i128>> {
    let side = 2 * radius + 1;
    let total = side.pow(dims as u32);
    (0..total).map(move |mut idx| {
        let mut p = vec![0; dims];
        for slot in p.iter_mut().rev() {
            *slot = idx % side - radius;
            idx /= side;
        }
        p
    })
}

fn combinations(k: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if size > k {
        return vec![];
    }
    let mut out = combinations(k - 1, size);
    for mut c in combinations(k - 1, size - 1) {
        c.push(k - 1);
        out.push(c);
    }
    out
}

/// Box search over all but the last coordinate, solving for the last one.
fn box_search(c: &IntMatrix, n: i128, radius: i128) -> Option<Vec<Int>> {
    let k = c.len();
    let last = k - 1;
    let a = c[last][last] as i128 / 2;
    for prefix in box_points(last, radius) {
        let mut t: Vec<Int> = prefix.iter().map(|&x| x as Int).collect();
        t.push(0);
        let q0 = form_value(c, &t);
        let l: i128 = (0..last).map(|j| c[j][last] as i128 * prefix[j]).sum();
        let zero_prefix = prefix.iter().all(|&x| x == 0);
        if a == 0 && l == 0 {
            if q0 == n && !(n == 0 && zero_prefix) {
                return Some(t);
            }
            if q0 == n && n == 0 {
                t[last] = 1;
                return Some(t);
            }
            continue;
        }
        for y in roots(a, l, q0 - n) {
            if n == 0 && zero_prefix && y == 0 {
                continue;
            }
            t[last] = y as Int;
            if form_value(c, &t) == n {
                return Some(t);
            }
        }
    }
    None
}

/// Integer roots of `a y² + l y + r = 0` (every root when `a = l = 0` is
/// handled by the caller).
fn roots(a: i128, l: i128, r: i128) -> Vec<i128> {
    if a == 0 {
        return if l != 0 && r % l == 0 { vec![-r / l] } else { vec![] };
    }
    let disc = l * l - 4 * a * r;
    if disc < 0 {
        return vec![];
    }
    let s = disc.sqrt();
    if s * s != disc {
        return vec![];
    }
    [-l + s, -l - s].into_iter().filter(|num| num % (2 * a) == 0).map(|num| num / (2 * a)).collect()
}

const LOCAL_MODULI: [i128; 14] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 64];

/// A reason why `q(t) = n` has no integer solution, if one of the cheap
/// certificates applies.
/// The values of the form are the multiples of its content on a sublattice.
fn content_obstruction(c: &IntMatrix, n: Int) -> Option<String> {
    let k = c.len();
    let n = n as i128;
    let mut content: i128 = 0;
    for i in 0..k {
        content = content.gcd(&(c[i][i] as i128 / 2));
        for j in i + 1..k {
            content = content.gcd(&(c[i][j] as i128));
        }
    }
    if content != 0 && n % content != 0 {
        return Some(format!("every value of the form is a multiple of {content}, {n} is not"));
    }
    None
}

fn local_obstruction(c: &IntMatrix, n: Int) -> Option<String> {
    let k = c.len();
    let n = n as i128;
    let mut moduli: Vec<i128> = LOCAL_MODULI.to_vec();
    for p in small_prime_factors(n) {
        moduli.extend([p, p * p]);
    }
    moduli.sort();
    moduli.dedup();
    for m in moduli {
        if m.checked_pow(k as u32).is_none_or(|size| size > 2_000_000) {
            continue;
        }
        let hit = (0..m.pow(k as u32)).any(|mut idx| {
            let mut t = vec![0 as Int; k];
            for slot in t.iter_mut() {
                *slot = (idx % m) as Int;
                idx /= m;
            }
            (form_value(c, &t) - n).mod_floor(&m) == 0
        });
        if !hit {
            return Some(format!("the form never takes the value {n} modulo {m}"));
        }
    }
    None
}

fn small_prime_factors(n: i128) -> Vec<i128> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n && p < 1000 {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 && n < 1_000_000 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(c: &IntMatrix, n: Int, radius: Int) -> Vec<Vec<Int>> {
        let k = c.len();
        let side = 2 * radius + 1;
        let mut out = Vec::new();
        for mut idx in 0..side.pow(k as u32) {
            let mut t = vec![0; k];
            for slot in t.iter_mut().rev() {
                *slot = idx % side - radius;
                idx /= side;
            }
            if form_value(c, &t) == n as i128 {
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn split_binary_matches_brute_force() {
        // -2ab on S2xS2 with the U(1) signature
        let c = vec![vec![0, -2], vec![-2, 0]];
        for l in [1, 2, 6, 12] {
            let LevelSet::Finite(pts) = level_set(&c, 2 * l).unwrap() else { panic!() };
            assert_eq!(pts, brute(&c, 2 * l, 2 * l));
        }
        assert_eq!(
            level_set(&c, 3).unwrap(),
            LevelSet::Empty("the split binary form never takes the value 3".into())
        );
        assert!(matches!(level_set(&c, 0).unwrap(), LevelSet::Infinite(_)));
        let d = vec![vec![2, 3], vec![3, 4]]; // x² + 3xy + 2y² = (x+y)(x+2y)
        for n in -6..=6 {
            if n == 0 {
                continue;
            }
            match level_set(&d, n).unwrap() {
                LevelSet::Finite(pts) => assert_eq!(pts, brute(&d, n, 30)),
                LevelSet::Empty(_) => assert!(brute(&d, n, 30).is_empty()),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn definite_forms_are_enumerated() {
        let c = vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 4]];
        for n in 0..12 {
            let expected = brute(&c, n, 6);
            match level_set(&c, n).unwrap() {
                LevelSet::Finite(pts) => assert_eq!(pts, expected),
                LevelSet::Empty(_) => assert!(expected.is_empty()),
                other => panic!("{other:?}"),
            }
        }
        let neg = vec![vec![-2, 0], vec![0, -4]];
        let LevelSet::Finite(pts) = level_set(&neg, -3).unwrap() else { panic!() };
        assert_eq!(pts, vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]);
        assert!(matches!(level_set(&neg, 3).unwrap(), LevelSet::Empty(_)));
    }

    #[test]
    fn radical_makes_sets_infinite() {
        let c = vec![vec![2, 0], vec![0, 0]];
        assert!(matches!(level_set(&c, 4).unwrap(), LevelSet::Infinite(_)));
        assert!(matches!(level_set(&c, 3).unwrap(), LevelSet::Empty(_)));
        assert!(matches!(level_set(&vec![vec![0]], 0).unwrap(), LevelSet::Infinite(_)));
        assert!(matches!(level_set(&vec![vec![0]], 1).unwrap(), LevelSet::Empty(_)));
        assert_eq!(level_set(&vec![], 0).unwrap(), LevelSet::Finite(vec![vec![]]));
    }

    #[test]
    fn pell_type_forms() {
        // x² - 2y²
        let c = vec![vec![2, 0], vec![0, -4]];
        let LevelSet::Infinite(w) = level_set(&c, -1).unwrap() else { panic!() };
        assert_eq!(form_value(&c, &w), -1);
        assert_eq!(level_set(&c, 0).unwrap(), LevelSet::Finite(vec![vec![0, 0]]));
        // x² - 3y² = -1 fails modulo 3
        let c3 = vec![vec![2, 0], vec![0, -6]];
        assert!(matches!(level_set(&c3, -1).unwrap(), LevelSet::Empty(_)));
    }

    #[test]
    fn higher_rank_indefinite() {
        // hyperbolic plane ⊕ <2>
        let c = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 4]];
        for n in [-7, 0, 1, 5] {
            let LevelSet::Infinite(w) = level_set(&c, n).unwrap() else { panic!() };
            assert_eq!(form_value(&c, &w), n as i128);
            assert!(n != 0 || w.iter().any(|&x| x != 0));
        }
        let even = vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, 4]];
        assert!(matches!(level_set(&even, 1).unwrap(), LevelSet::Empty(_)));
    }
}
