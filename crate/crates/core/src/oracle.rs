//! `Z^_a(q)` straight from its contour-integral definition.
//!
//! The integrand is `prod_v (z_v - 1/z_v)^{2 - delta_v}` against the theta
//! function `sum_{l in a + 2M Z^s} q^{-l^t M^{-1} l / 4} z^l`. The principal
//! value of each `z_v`-integral is the average of the constant terms of the
//! `|z_v| > 1` and `|z_v| < 1` Laurent expansions. Only the matrix helpers
//! are shared with the lattice-sum side.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::linalg;
use crate::plumbing::Plumbing;
use crate::poly::QSeries;
use crate::rational::{isqrt, qi, Q};
use crate::spinc::check_delta_parity;

type Laurent = BTreeMap<i64, Q>;

fn mul_truncated(x: &Laurent, y: &Laurent, span: i64) -> Laurent {
    let mut out = Laurent::new();
    for (e1, c1) in x {
        for (e2, c2) in y {
            let e = e1 + e2;
            if e.abs() <= span {
                *out.entry(e).or_insert_with(Q::zero) += c1 * c2;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Both Laurent expansions of `(z - 1/z)^{2-n}`, exact for exponents in
/// `[-span, span]`.
fn expansions(n: i64, span: i64) -> (Laurent, Laurent) {
    let one: Laurent = BTreeMap::from([(0, Q::one())]);
    if n <= 2 {
        let factor: Laurent = BTreeMap::from([(1, Q::one()), (-1, -Q::one())]);
        let mut acc = one;
        for _ in 0..(2 - n) {
            acc = mul_truncated(&acc, &factor, span + 2);
        }
        return (acc.clone(), acc);
    }
    // |z| > 1: 1/(z - 1/z) = sum_{i>=0} z^{-(2i+1)}
    let outer: Laurent = (0..=span).map(|i| (-(2 * i + 1), Q::one())).collect();
    // |z| < 1: 1/(z - 1/z) = -sum_{i>=0} z^{2i+1}
    let inner: Laurent = (0..=span).map(|i| (2 * i + 1, -Q::one())).collect();
    let (mut plus, mut minus) = (one.clone(), one);
    for _ in 0..(n - 2) {
        plus = mul_truncated(&plus, &outer, span);
        minus = mul_truncated(&minus, &inner, span);
    }
    (plus, minus)
}

/// `Z^_a(q)` through `q^{Delta_a + order}`, where
/// `Delta_a = -(a^t M^{-1} a + 3s + sum m) / 4` is the lowest exponent.
pub fn zhat_oracle(p: &Plumbing, a: &[i64], order: Q) -> Result<QSeries> {
    check_delta_parity(p, a)?;
    let m = p.intersection_matrix();
    let inv = m.inverse().expect("negative definite form is invertible");
    let s = p.len();
    let sum_m: i64 = p.weights().iter().sum();
    let base = -qi(3 * s as i64 + sum_m) / Q::from_integer(4);
    // l^t P l with P = -M^{-1}
    let norm = |l: &[i64]| -linalg::inverse_form(inv, l);
    let a_norm = norm(a);
    let delta = base + a_norm / Q::from_integer(4);
    let radius = a_norm + Q::from_integer(4) * order;
    let mut terms: BTreeMap<Q, Q> = BTreeMap::new();
    if radius < Q::zero() {
        return Ok(QSeries { delta, order, terms });
    }
    let degrees = p.degrees();
    // per-vertex candidate values of l_v with their principal-value coefficient
    let mut choices: Vec<Vec<(i64, Q)>> = Vec::with_capacity(s);
    for v in 0..s {
        // l_v^2 <= radius * (P^{-1})_vv = radius * |m_v|
        let bound = radius * qi(-p.weights()[v]);
        let lim = isqrt(bound.numer() / bound.denom()) as i64 + 1;
        let (plus, minus) = expansions(degrees[v], lim + 2);
        let mut opts = Vec::new();
        for l in -lim..=lim {
            if (l - a[v]).rem_euclid(2) != 0 {
                continue;
            }
            let c = (plus.get(&-l).copied().unwrap_or_default()
                + minus.get(&-l).copied().unwrap_or_default())
                / Q::from_integer(2);
            if !c.is_zero() {
                opts.push((l, c));
            }
        }
        choices.push(opts);
    }
    let mut l = vec![0i64; s];
    fn walk(
        v: usize,
        coef: Q,
        l: &mut Vec<i64>,
        choices: &[Vec<(i64, Q)>],
        visit: &mut dyn FnMut(&[i64], Q),
    ) {
        if v == choices.len() {
            visit(l, coef);
            return;
        }
        for &(lv, c) in &choices[v] {
            l[v] = lv;
            walk(v + 1, coef * c, l, choices, visit);
        }
    }
    let mut visit = |l: &[i64], c: Q| {
        // l must lie in a + 2M Z^s
        let diff: Vec<i64> = l.iter().zip(a).map(|(x, y)| x - y).collect();
        let y = linalg::rat_mat_vec(inv, &diff);
        if !y.iter().all(|v| (v / Q::from_integer(2)).is_integer()) {
            return;
        }
        let n = norm(l);
        if n > radius {
            return;
        }
        let e = base + n / Q::from_integer(4);
        *terms.entry(e).or_insert_with(Q::zero) += c;
    };
    walk(0, Q::one(), &mut l, &choices, &mut visit);
    terms.retain(|_, c| !c.is_zero());
    Ok(QSeries { delta, order, terms })
}
