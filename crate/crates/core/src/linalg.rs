//! Exact integer and rational linear algebra on small dense matrices.

use num_traits::{One, Zero};

use crate::rational::Q;

pub type IntMatrix = Vec<Vec<i64>>;
pub type RatMatrix = Vec<Vec<Q>>;

pub fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_vec(m: &IntMatrix, x: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn rat_mat_vec(m: &RatMatrix, x: &[i64]) -> Vec<Q> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(Q::zero(), |acc, (a, &b)| acc + a * Q::from_integer(b as i128))
        })
        .collect()
}

pub fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `x^t m^{-1} x` for an exact inverse.
pub fn inverse_form(inv: &RatMatrix, x: &[i64]) -> Q {
    rat_mat_vec(inv, x)
        .iter()
        .zip(x)
        .fold(Q::zero(), |acc, (a, &b)| acc + a * Q::from_integer(b as i128))
}

/// Fraction-free (Bareiss) elimination without pivoting. Returns the leading
/// principal minors `det(m[..i][..i])` for `i = 1..=n`, stopping early at the
/// first zero minor.
pub fn leading_minors(m: &IntMatrix) -> Vec<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 0..n {
        let pivot = a[k][k];
        minors.push(pivot);
        if pivot == 0 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = pivot;
    }
    minors
}

/// Exact determinant via Bareiss elimination with row pivoting.
pub fn determinant(m: &IntMatrix) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Exact inverse by Gauss-Jordan over the rationals; `None` if singular.
pub fn inverse(m: &IntMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect();
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        inv.swap(piv, col);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let t = a[col][j];
                    a[r][j] -= f * t;
                    let t = inv[col][j];
                    inv[r][j] -= f * t;
                }
            }
        }
    }
    Some(inv)
}

/// Smith normal form `u * m * v = diag(d)` with unimodular `u`, `v`,
/// `d[i] | d[i+1]` and `d[i] >= 0`. `u_inv` is kept alongside `u`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: Vec<Vec<i128>>,
    pub u_inv: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    pub diag: Vec<i128>,
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u = identity(n);
    let mut u_inv = identity(n);
    let mut v = identity(n);

    // Row operations act on `a` and `u` from the left; `u_inv` receives the
    // inverse operation on its columns.
    let swap_rows = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        a.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i -= q * row_j
    let sub_row = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, i: usize, j: usize, q: i128| {
        for c in 0..a[i].len() {
            let t = a[j][c];
            a[i][c] -= q * t;
            let t = u[j][c];
            u[i][c] -= q * t;
        }
        for row in ui.iter_mut() {
            let t = row[i];
            row[j] += q * t;
        }
    };
    let swap_cols = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_i -= q * col_j
    let sub_col = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize, q: i128| {
        for row in a.iter_mut() {
            let t = row[j];
            row[i] -= q * t;
        }
        for row in v.iter_mut() {
            let t = row[j];
            row[i] -= q * t;
        }
    };

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != t {
                swap_rows(&mut a, &mut u, &mut u_inv, pi, t);
            }
            if pj != t {
                swap_cols(&mut a, &mut v, pj, t);
            }
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    sub_row(&mut a, &mut u, &mut u_inv, i, t, q);
                    dirty |= a[i][t] != 0;
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    sub_col(&mut a, &mut v, j, t, q);
                    dirty |= a[t][j] != 0;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % a[t][t] != 0));
            match bad {
                Some(i) => sub_row(&mut a, &mut u, &mut u_inv, t, i, -1),
                None => break,
            }
        }
        if a[t][t] < 0 {
            for c in 0..n {
                a[t][c] = -a[t][c];
                u[t][c] = -u[t][c];
            }
            for row in u_inv.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i]).collect();
    Smith { u, u_inv, v, diag }
}

/// Column-style triangularisation `m * v = h` with `h` lower triangular with
/// positive diagonal and `v` unimodular. `m` must be nonsingular.
pub fn lower_triangular_basis(m: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut v = identity(n);
    let swap_cols = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
    };
    for t in 0..n {
        loop {
            let Some(p) = (t..n)
                .filter(|&j| a[t][j] != 0)
                .min_by_key(|&j| a[t][j].abs())
            else {
                panic!("lower_triangular_basis: singular matrix");
            };
            if p != t {
                swap_cols(&mut a, &mut v, p, t);
            }
            let mut done = true;
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for row in a.iter_mut().chain(v.iter_mut()) {
                        let x = row[t];
                        row[j] -= q * x;
                    }
                    done &= a[t][j] == 0;
                }
            }
            if done {
                break;
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut().chain(v.iter_mut()) {
                row[t] = -row[t];
            }
        }
    }
    (a, v)
}
