//! Integer linear algebra: extended gcd, Hermite and Smith normal forms,
//! integer kernels and exact solving of `A x = b` over the integers.
//!
//! Matrices are dense and row-major (`Vec<Vec<T>>`). Every routine is generic
//! over [`Scalar`], so the same code runs on machine integers and on
//! arbitrary-precision integers.

use crate::scalar::Scalar;

pub type Matrix<T> = Vec<Vec<T>>;

/// Returns `(g, x, y)` with `g = a*x + b*y = gcd(a, b) >= 0`.
pub fn ext_gcd<T: Scalar>(a: &T, b: &T) -> (T, T, T) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (T::one(), T::zero());
    let (mut old_t, mut t) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = old_r - q.clone() * r.clone();
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = old_s - q.clone() * s.clone();
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = old_t - q * t.clone();
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Greatest common divisor of all entries; zero for an empty or all-zero slice.
pub fn gcd_all<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, x| acc.gcd(x))
}

pub fn identity<T: Scalar>(n: usize) -> Matrix<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

pub fn transpose<T: Scalar>(a: &Matrix<T>, ncols: usize) -> Matrix<T> {
    (0..ncols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, bcols: usize) -> Matrix<T> {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(T::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Scalar>(a: &Matrix<T>, v: &[T]) -> Vec<T> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut m = a.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

fn col_combine<T: Scalar>(m: &mut Matrix<T>, c: usize, j: usize, coeffs: [&T; 4]) {
    // (col_c, col_j) <- (a*col_c + b*col_j, e*col_c + f*col_j)
    let [a, b, e, f] = coeffs;
    for row in m.iter_mut() {
        let x = row[c].clone();
        let y = row[j].clone();
        row[c] = a.clone() * x.clone() + b.clone() * y.clone();
        row[j] = e.clone() * x + f.clone() * y;
    }
}

fn col_axpy<T: Scalar>(m: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
    // col_dst -= q * col_src
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[dst] = row[dst].clone() - q.clone() * s;
    }
}

fn col_negate<T: Scalar>(m: &mut Matrix<T>, c: usize) {
    for row in m.iter_mut() {
        row[c] = -row[c].clone();
    }
}

/// Column-style Hermite normal form: `a * transform = hermite`.
#[derive(Debug, Clone)]
pub struct ColumnHermite<T> {
    pub hermite: Matrix<T>,
    /// Unimodular `ncols x ncols` transform.
    pub transform: Matrix<T>,
    /// Number of nonzero leading columns of `hermite`; the remaining columns
    /// of `transform` form a basis of the integer kernel of `a`.
    pub rank: usize,
}

/// Reduces `a` (with `ncols` columns) by unimodular column operations to
/// column echelon form with positive pivots, entries left of each pivot
/// reduced into `[0, pivot)`.
pub fn column_hermite<T: Scalar>(a: &Matrix<T>, ncols: usize) -> ColumnHermite<T> {
    let mut h = a.clone();
    let mut v = identity::<T>(ncols);
    let mut c = 0;
    for i in 0..h.len() {
        if c == ncols {
            break;
        }
        for j in c + 1..ncols {
            if h[i][j].is_zero() {
                continue;
            }
            let (g, x, y) = ext_gcd(&h[i][c], &h[i][j]);
            let a_g = h[i][c].clone() / g.clone();
            let b_g = h[i][j].clone() / g;
            let nb = -b_g;
            col_combine(&mut h, c, j, [&x, &y, &nb, &a_g]);
            col_combine(&mut v, c, j, [&x, &y, &nb, &a_g]);
        }
        if h[i][c].is_zero() {
            continue;
        }
        if h[i][c].is_negative() {
            col_negate(&mut h, c);
            col_negate(&mut v, c);
        }
        let pivot = h[i][c].clone();
        for j in 0..c {
            let q = h[i][j].div_floor(&pivot);
            if !q.is_zero() {
                col_axpy(&mut h, j, c, &q);
                col_axpy(&mut v, j, c, &q);
            }
        }
        c += 1;
    }
    ColumnHermite { hermite: h, transform: v, rank: c }
}

/// Row Hermite normal form of the lattice spanned by `rows` (each of length
/// `ncols`). Zero rows are dropped; pivots are positive and entries above a
/// pivot lie in `[0, pivot)`. The result is a canonical basis: two generating
/// sets span the same lattice iff their HNFs coincide.
pub fn hnf_rows<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> Matrix<T> {
    if rows.is_empty() {
        return Vec::new();
    }
    let t = transpose(&rows.to_vec(), ncols);
    let ch = column_hermite(&t, rows.len());
    let basis = transpose(&ch.hermite, rows.len());
    basis.into_iter().take(ch.rank).collect()
}

/// Saturated integer kernel `{x : a x = 0}` in row HNF.
pub fn kernel_basis<T: Scalar>(a: &Matrix<T>, ncols: usize) -> Matrix<T> {
    let ch = column_hermite(a, ncols);
    let vt = transpose(&ch.transform, ncols);
    let gens: Matrix<T> = vt.into_iter().skip(ch.rank).collect();
    hnf_rows(&gens, ncols)
}

/// Reduces `v` modulo the lattice with row-HNF basis `hnf`, giving the
/// canonical coset representative.
pub fn reduce_mod_hnf<T: Scalar>(v: &[T], hnf: &Matrix<T>) -> Vec<T> {
    let mut out = v.to_vec();
    for row in hnf {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let q = out[p].div_floor(&row[p]);
        if !q.is_zero() {
            for (o, r) in out.iter_mut().zip(row) {
                *o = o.clone() - q.clone() * r.clone();
            }
        }
    }
    out
}

/// Smith normal form `left * a * right = diag(diagonal)`.
#[derive(Debug, Clone)]
pub struct Smith<T> {
    pub left: Matrix<T>,
    pub right: Matrix<T>,
    /// Nonzero invariant factors, each dividing the next.
    pub diagonal: Vec<T>,
}

impl<T: Scalar> Smith<T> {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

fn row_swap<T>(m: &mut Matrix<T>, i: usize, j: usize) {
    m.swap(i, j);
}

fn row_combine<T: Scalar>(m: &mut Matrix<T>, r: usize, s: usize, coeffs: [&T; 4]) {
    let [a, b, e, f] = coeffs;
    let ncols = m[r].len();
    for k in 0..ncols {
        let x = m[r][k].clone();
        let y = m[s][k].clone();
        m[r][k] = a.clone() * x.clone() + b.clone() * y.clone();
        m[s][k] = e.clone() * x + f.clone() * y;
    }
}

fn col_swap<T>(m: &mut Matrix<T>, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// Unimodular 2x2 step sending `(a, b)` to `(gcd, 0)`. When `a | b` the pivot
/// is kept as is, so repeated row and column passes cannot cycle.
fn elimination<T: Scalar>(a: &T, b: &T) -> [T; 4] {
    if (b.clone() % a.clone()).is_zero() {
        return [T::one(), T::zero(), -(b.clone() / a.clone()), T::one()];
    }
    let (g, x, y) = ext_gcd(a, b);
    let a_g = a.clone() / g.clone();
    let b_g = b.clone() / g;
    [x, y, -b_g, a_g]
}

/// Computes the Smith normal form of the `nrows x ncols` matrix `a`.
pub fn smith<T: Scalar>(a: &Matrix<T>, ncols: usize) -> Smith<T> {
    let nrows = a.len();
    let mut d = a.clone();
    let mut left = identity::<T>(nrows);
    let mut right = identity::<T>(ncols);
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if d[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_swap(&mut d, t, pi);
        row_swap(&mut left, t, pi);
        col_swap(&mut d, t, pj);
        col_swap(&mut right, t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..nrows {
                if d[i][t].is_zero() {
                    continue;
                }
                let [x, y, nb, a_g] = elimination(&d[t][t], &d[i][t]);
                row_combine(&mut d, t, i, [&x, &y, &nb, &a_g]);
                row_combine(&mut left, t, i, [&x, &y, &nb, &a_g]);
            }
            for j in t + 1..ncols {
                if d[t][j].is_zero() {
                    continue;
                }
                clean = false;
                let [x, y, nb, a_g] = elimination(&d[t][t], &d[t][j]);
                col_combine(&mut d, t, j, [&x, &y, &nb, &a_g]);
                col_combine(&mut right, t, j, [&x, &y, &nb, &a_g]);
            }
            if clean && (t + 1..nrows).all(|i| d[i][t].is_zero()) {
                // divisibility: fold any offending row into the pivot row
                let pivot = d[t][t].clone();
                let offending = (t + 1..nrows).find(|&i| {
                    (t + 1..ncols).any(|j| !(d[i][j].clone() % pivot.clone()).is_zero())
                });
                match offending {
                    Some(i) => {
                        let one = T::one();
                        let zero = T::zero();
                        row_combine(&mut d, t, i, [&one, &one, &zero, &one]);
                        row_combine(&mut left, t, i, [&one, &one, &zero, &one]);
                    }
                    None => break,
                }
            }
        }
        if d[t][t].is_negative() {
            for k in 0..ncols {
                d[t][k] = -d[t][k].clone();
            }
            for k in 0..nrows {
                left[t][k] = -left[t][k].clone();
            }
        }
        diagonal.push(d[t][t].clone());
        t += 1;
    }
    Smith { left, right, diagonal }
}

/// Integer solutions of `a x = b`: a particular solution plus a row-HNF
/// basis of the homogeneous solutions, or `None` when the system has no
/// integer solution.
pub fn solve_linear<T: Scalar>(
    a: &Matrix<T>,
    ncols: usize,
    b: &[T],
) -> Option<(Vec<T>, Matrix<T>)> {
    let snf = smith(a, ncols);
    let c = mat_vec(&snf.left, b);
    let rank = snf.rank();
    let mut y = vec![T::zero(); ncols];
    for (i, ci) in c.iter().enumerate() {
        if i < rank {
            let (q, r) = ci.div_rem(&snf.diagonal[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    let particular = mat_vec(&snf.right, &y);
    let rt = transpose(&snf.right, ncols);
    let gens: Matrix<T> = rt.into_iter().skip(rank).collect();
    Some((particular, hnf_rows(&gens, ncols)))
}

/// Coordinates of `v` in the lattice with linearly independent basis rows,
/// or `None` if `v` is not a lattice vector.
pub fn lattice_coordinates<T: Scalar>(basis: &Matrix<T>, v: &[T]) -> Option<Vec<T>> {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let bt = transpose(basis, v.len());
    let (coords, kernel) = solve_linear(&bt, basis.len(), v)?;
    debug_assert!(kernel.is_empty(), "basis rows must be independent");
    Some(coords)
}

/// Combines basis rows with integer coefficients.
pub fn combine_rows<T: Scalar>(basis: &Matrix<T>, coeffs: &[T], ncols: usize) -> Vec<T> {
    let mut out = vec![T::zero(); ncols];
    for (row, c) in basis.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(row) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    out
}
