//! Dense exact integer matrices: determinant, echelon and Hermite forms,
//! integer kernels, Smith normal form, and rational solving.
//!
//! Matrices are plain row-major `Vec<Vec<Int>>`. Sizes here are small (rank
//! of a lattice, a few dozen at most), so nothing is blocked or sparse.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Int, Rat};

pub type IntMatrix = Vec<Vec<Int>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
    vec![vec![Int::zero(); cols]; rows]
}

pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect()
}

pub fn cols(a: &IntMatrix) -> usize {
    a.first().map_or(0, Vec::len)
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let (m, n) = (a.len(), cols(a));
    (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (m, k, n) = (a.len(), b.len(), cols(b));
    debug_assert!(a.iter().all(|r| r.len() == k));
    let mut out = zeros(m, n);
    for i in 0..m {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn mul_vec(a: &IntMatrix, x: &[Int]) -> Vec<Int> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(x: &[Int], a: &IntMatrix) -> Vec<Int> {
    let n = cols(a);
    let mut out = vec![Int::zero(); n];
    for (xi, row) in x.iter().zip(a) {
        if xi.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(row) {
            *o += xi * v;
        }
    }
    out
}

/// Fraction-free (Bareiss) determinant.
pub fn det(a: &IntMatrix) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Result of unimodular row reduction: `transform * input = echelon`.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub echelon: IntMatrix,
    pub transform: IntMatrix,
    /// Pivot column of each nonzero row, in order.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn combine_rows(m: &mut IntMatrix, r: usize, i: usize, x: &Int, y: &Int, a0: &Int, b0: &Int) {
    // [r; i] <- [[x, y], [-b0, a0]] * [r; i], a unimodular 2x2 step.
    let n = m[r].len();
    for j in 0..n {
        let vr = &m[r][j];
        let vi = &m[i][j];
        let new_r = x * vr + y * vi;
        let new_i = a0 * vi - b0 * vr;
        m[r][j] = new_r;
        m[i][j] = new_i;
    }
}

fn sub_row_multiple(m: &mut IntMatrix, target: usize, src: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (a, b) in t.iter_mut().zip(s) {
        *a -= q * b;
    }
}

/// Row echelon form over the integers with positive pivots. When `reduce` is
/// set, entries above each pivot are reduced into `[0, pivot)`, which gives
/// the (row-style) Hermite normal form.
pub fn echelon(a: &IntMatrix, reduce: bool) -> Echelon {
    let m = a.len();
    let n = cols(a);
    let mut h = a.clone();
    let mut u = identity(m);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        for i in row + 1..m {
            if h[i][col].is_zero() {
                continue;
            }
            if h[row][col].is_zero() {
                h.swap(row, i);
                u.swap(row, i);
                continue;
            }
            let eg = h[row][col].extended_gcd(&h[i][col]);
            let a0 = &h[row][col] / &eg.gcd;
            let b0 = &h[i][col] / &eg.gcd;
            combine_rows(&mut h, row, i, &eg.x, &eg.y, &a0, &b0);
            combine_rows(&mut u, row, i, &eg.x, &eg.y, &a0, &b0);
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            for v in h[row].iter_mut() {
                *v = -&*v;
            }
            for v in u[row].iter_mut() {
                *v = -&*v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if reduce {
        for (r, &c) in pivots.iter().enumerate() {
            for above in 0..r {
                let q = h[above][c].div_floor(&h[r][c]);
                sub_row_multiple(&mut h, above, r, &q);
                sub_row_multiple(&mut u, above, r, &q);
            }
        }
    }
    Echelon { echelon: h, transform: u, pivots }
}

/// Hermite normal form of the row span: the nonzero rows only.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let e = echelon(a, true);
    let r = e.rank();
    e.echelon.into_iter().take(r).collect()
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    echelon(a, false).rank()
}

/// Basis (rows, in Hermite normal form) of `{ x in Z^n : a x = 0 }`.
/// The result is saturated in `Z^n`.
pub fn integer_kernel(a: &IntMatrix, n: usize) -> IntMatrix {
    if a.is_empty() {
        return identity(n);
    }
    let e = echelon(&transpose(a), false);
    let r = e.rank();
    let basis: IntMatrix = e.transform.into_iter().skip(r).collect();
    if basis.is_empty() {
        return basis;
    }
    hermite_rows(&basis)
}

/// Smith normal form with transforms: `left * input * right = diag(diagonal)`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries, `min(rows, cols)` of them, each dividing the next
    /// nonzero one; zeros (if any) come last.
    pub diagonal: Vec<Int>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let m = a.len();
    let n = cols(a);
    let mut d = a.clone();
    let mut left = identity(m);
    let mut right = identity(n);

    // Column operations act on `d` and on `right`, both by columns.
    fn swap_cols(x: &mut IntMatrix, i: usize, j: usize) {
        for row in x.iter_mut() {
            row.swap(i, j);
        }
    }
    fn sub_col_multiple(x: &mut IntMatrix, target: usize, src: usize, q: &Int) {
        for row in x.iter_mut() {
            let s = row[src].clone();
            row[target] -= q * s;
        }
    }

    let steps = m.min(n);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => d[i][j].abs() < d[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(d, left, right, steps);
            };
            d.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut right, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = d[i][t].div_floor(&d[t][t]);
                sub_row_multiple(&mut d, i, t, &q);
                sub_row_multiple(&mut left, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = d[t][j].div_floor(&d[t][t]);
                sub_col_multiple(&mut d, j, t, &q);
                sub_col_multiple(&mut right, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match offender {
                Some(i) => {
                    // Pull the offending row into row t; the next pass shrinks the pivot.
                    sub_row_multiple(&mut d, t, i, &-Int::one());
                    sub_row_multiple(&mut left, t, i, &-Int::one());
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for v in d[t].iter_mut() {
                *v = -&*v;
            }
            for v in left[t].iter_mut() {
                *v = -&*v;
            }
        }
    }
    finish_smith(d, left, right, steps)
}

fn finish_smith(d: IntMatrix, left: IntMatrix, right: IntMatrix, steps: usize) -> SmithForm {
    let diagonal = (0..steps).map(|i| d[i][i].clone()).collect();
    SmithForm { diagonal, left, right }
}

/// Coordinates `c` with `c * basis = v`, if `v` lies in the rational span of
/// the (independent) rows of `basis`.
pub fn solve_in_span(basis: &IntMatrix, v: &[Int]) -> Option<Vec<Rat>> {
    let k = basis.len();
    let n = v.len();
    // Augmented system basis^T c = v: n equations, k unknowns.
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = (0..k).map(|j| Rat::from_integer(basis[j][i].clone())).collect();
            row.push(Rat::from_integer(v[i].clone()));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..k {
        let Some(p) = (pivot_row..n).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(pivot_row, p);
        let inv = aug[pivot_row][col].recip();
        for x in aug[pivot_row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i == pivot_row || aug[i][col].is_zero() {
                continue;
            }
            let f = aug[i][col].clone();
            for j in 0..=k {
                let delta = &f * &aug[pivot_row][j];
                aug[i][j] -= delta;
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut c = vec![Rat::zero(); k];
    for (r, &col) in pivot_cols.iter().enumerate() {
        c[col] = aug[r][k].clone();
    }
    Some(c)
}
