//! Exact integer-point enumeration for the quadratic functions on the lattice.
//!
//! Everything here is a pure function of an integer form `M` (negative
//! definite) and an integer vector; no floating point is involved.

use num_integer::Integer;

use crate::linalg::{self, IntMatrix};
use crate::rational::{isqrt, qi, Q};

/// `chi_k(x) = -(k.x + x^t M x) / 2`. Exact when `k` is characteristic.
pub fn chi(m: &IntMatrix, k: &[i64], x: &[i64]) -> i64 {
    let mx = linalg::mat_vec(m, x);
    let twice = -(linalg::dot(k, x) + linalg::dot(x, &mx));
    debug_assert!(twice % 2 == 0, "chi of a non-characteristic vector");
    twice / 2
}

/// Integer points of `{x : x^t A x + b.x <= r}` for `A = -M` positive definite.
///
/// Let `delta_i` be the leading `i x i` minor of `A` and `m_i(x_i, .., x_{n-1})`
/// the real minimum of the quadratic over `x_0, .., x_{i-1}`. Then
/// `Q_i = 4 delta_i m_i` has integer coefficients, and the integer slack
/// `T_i = 4 delta_i r - Q_i` obeys
///
/// `16 delta_{i+1} T_i = 16 delta_i T_{i+1} - (8 delta_{i+1} x_i + beta_i)^2`
///
/// where `beta_i` is affine in `x_{i+1}, ..`. Coordinates are fixed from the
/// last one down; `T_i >= 0` pins `x_i` to an integer interval exactly.
pub struct Ellipsoid {
    a: IntMatrix,
    b: Vec<i64>,
    r: i64,
    /// `delta_0 = 1, .., delta_n = det A`.
    delta: Vec<i128>,
    /// `beta_i = 8 sum_{j>i} srow[i][j] x_j + 4 lin[i]`.
    srow: Vec<Vec<i128>>,
    lin: Vec<i128>,
    /// `T_n`; negative means the region is empty.
    slack: i128,
}

fn to_int(v: Q) -> i128 {
    assert!(v.is_integer(), "adjugate entry is integral");
    v.to_integer()
}

impl Ellipsoid {
    /// `m` is the negative definite form; the region is `x^t(-m)x + b.x <= r`.
    pub fn new(m: &IntMatrix, b: &[i64], r: i64) -> Self {
        let n = m.len();
        let a: IntMatrix = m.iter().map(|row| row.iter().map(|v| -v).collect()).collect();
        let mut delta = vec![1i128];
        delta.extend(linalg::leading_minors(&a));
        assert!(delta.len() == n + 1 && delta.iter().all(|d| *d > 0), "form is not positive definite");
        let mut srow = vec![vec![0i128; n]; n];
        let mut lin = vec![0i128; n];
        for i in 0..n {
            // Schur complement of the leading block, row i, scaled by delta_i
            let lead: IntMatrix = a[..i].iter().map(|row| row[..i].to_vec()).collect();
            let inv = if i == 0 { Vec::new() } else { linalg::inverse(&lead).expect("minor is nonzero") };
            let solve = |col: &dyn Fn(usize) -> i64| -> Vec<Q> {
                (0..i).map(|p| (0..i).map(|q| inv[p][q] * qi(col(q))).sum()).collect()
            };
            let d = Q::from_integer(delta[i]);
            for j in i..n {
                let y = solve(&|q| a[q][j]);
                let s: Q = qi(a[i][j]) - (0..i).map(|p| qi(a[i][p]) * y[p]).sum::<Q>();
                srow[i][j] = to_int(s * d);
            }
            debug_assert_eq!(srow[i][i], delta[i + 1]);
            let y = solve(&|q| b[q]);
            let beta: Q = qi(b[i]) - (0..i).map(|p| qi(a[i][p]) * y[p]).sum::<Q>();
            lin[i] = to_int(beta * d);
        }
        // Q_n = -delta_n b^t A^{-1} b
        let q_n = if n == 0 {
            0
        } else {
            let inv = linalg::inverse(&a).expect("positive definite form is invertible");
            to_int(-Q::from_integer(delta[n]) * linalg::inverse_form(&inv, b))
        };
        let slack = 4 * delta[n] * r as i128 - q_n;
        Ellipsoid {
            a,
            b: b.to_vec(),
            r,
            delta,
            srow,
            lin,
            slack,
        }
    }

    /// `x^t A x + b.x` at an integer point.
    pub fn value(&self, x: &[i64]) -> i64 {
        linalg::dot(x, &linalg::mat_vec(&self.a, x)) + linalg::dot(&self.b, x)
    }

    /// Calls `f(x, value)` for every point of the region. Visiting order is
    /// deterministic (last coordinate outermost, ascending).
    pub fn for_each<F: FnMut(&[i64], i64)>(&self, mut f: F) {
        let n = self.a.len();
        if self.slack < 0 {
            return;
        }
        let mut x = vec![0i64; n];
        if n == 0 {
            f(&x, 0);
            return;
        }
        self.descend(n - 1, self.slack, &mut x, &mut f);
    }

    fn descend<F: FnMut(&[i64], i64)>(&self, i: usize, t_next: i128, x: &mut [i64], f: &mut F) {
        let d_i = self.delta[i];
        let d_next = self.delta[i + 1];
        let beta = 8 * (i + 1..x.len()).map(|j| self.srow[i][j] * x[j] as i128).sum::<i128>()
            + 4 * self.lin[i];
        let two_alpha = 8 * d_next;
        let budget = 16 * d_i * t_next;
        // |2 alpha x_i + beta| <= s
        let s = isqrt(budget);
        let lo = Integer::div_ceil(&(-s - beta), &two_alpha);
        let hi = Integer::div_floor(&(s - beta), &two_alpha);
        if lo > hi {
            return;
        }
        if i == 0 {
            // the quadratic itself along x_0: Q_0 = 4 q, alpha = 4 a_00
            debug_assert!((budget - beta * beta) % (16 * d_next) == 0 && beta % 4 == 0);
            let t0 = (budget - beta * beta) / (16 * d_next);
            let rest = self.r as i128 - t0 / 4;
            let a00 = d_next;
            let lin = beta / 4;
            for xi in lo..=hi {
                x[0] = xi as i64;
                let v = a00 * xi * xi + lin * xi + rest;
                debug_assert!(v <= self.r as i128 && v as i64 == self.value(x));
                f(x, v as i64);
            }
            return;
        }
        for xi in lo..=hi {
            x[i] = xi as i64;
            let u = two_alpha * xi + beta;
            let num = budget - u * u;
            debug_assert!(num >= 0 && num % (16 * d_next) == 0);
            self.descend(i - 1, num / (16 * d_next), x, f);
        }
    }

    pub fn points(&self) -> Vec<(Vec<i64>, i64)> {
        let mut out = Vec::new();
        self.for_each(|x, v| out.push((x.to_vec(), v)));
        out
    }
}

/// Points with `chi_k(x) <= j`, i.e. `x^t(-M)x - k.x <= 2j`, with their chi.
pub fn sublevel_points(m: &IntMatrix, k: &[i64], j: i64) -> Vec<(Vec<i64>, i64)> {
    let b: Vec<i64> = k.iter().map(|v| -v).collect();
    let e = Ellipsoid::new(m, &b, 2 * j);
    let mut out = Vec::new();
    e.for_each(|x, v| out.push((x.to_vec(), v / 2)));
    out
}

/// All `x` with `|(2Mx + k)_i| <= -M_ii` for every `i`: every lattice point
/// with `chi(x +- e_i) >= chi(x)` for all `i` lies here.
///
/// Writes `w = 2Mx + k` and walks the coset `k + 2M Z^s` through a lower
/// triangular basis of `2M`, so each coordinate of `w` is pinned one at a
/// time against its box bound.
pub fn weak_local_minima(m: &IntMatrix, k: &[i64]) -> Vec<Vec<i64>> {
    let n = m.len();
    // coordinates with small boxes first, large boxes last where the basis
    // tends to pin them
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (-m[i][i], i));
    let two_m: Vec<Vec<i128>> = order
        .iter()
        .map(|&i| order.iter().map(|&j| 2 * m[i][j] as i128).collect())
        .collect();
    let (h, v) = linalg::lower_triangular_basis(&two_m);
    let kp: Vec<i128> = order.iter().map(|&i| k[i] as i128).collect();
    let bound: Vec<i128> = order.iter().map(|&i| -(m[i][i] as i128)).collect();

    let mut walk = Walk {
        h: &h,
        v: &v,
        kp: &kp,
        bound: &bound,
        order: &order,
        z: vec![0i128; n],
        out: Vec::new(),
    };
    walk.run(0);
    let mut out = walk.out;
    out.sort();
    out
}

/// Depth-first walk over the coefficients `z` of the basis of `2M`.
struct Walk<'a> {
    h: &'a [Vec<i128>],
    v: &'a [Vec<i128>],
    kp: &'a [i128],
    bound: &'a [i128],
    order: &'a [usize],
    z: Vec<i128>,
    out: Vec<Vec<i64>>,
}

impl Walk<'_> {
    fn run(&mut self, t: usize) {
        let n = self.h.len();
        if t == n {
            // x (permuted) = v z
            let mut x = vec![0i64; n];
            for (r, &orig) in self.order.iter().enumerate() {
                let val: i128 = (0..n).map(|c| self.v[r][c] * self.z[c]).sum();
                x[orig] = i64::try_from(val).expect("candidate out of range");
            }
            self.out.push(x);
            return;
        }
        let partial: i128 = self.kp[t] + (0..t).map(|i| self.h[t][i] * self.z[i]).sum::<i128>();
        // h[t][t] > 0
        let lo = -Integer::div_floor(&(self.bound[t] + partial), &self.h[t][t]);
        let hi = Integer::div_floor(&(self.bound[t] - partial), &self.h[t][t]);
        for zt in lo..=hi {
            self.z[t] = zt;
            self.run(t + 1);
        }
    }
}

/// Exact minimum of `chi_k` over the lattice.
pub fn chi_min(m: &IntMatrix, k: &[i64]) -> i64 {
    weak_local_minima(m, k)
        .iter()
        .map(|x| chi(m, k, x))
        .min()
        .expect("a global minimiser always exists")
}
