//! Spin^c structures as classes `k in m + 2Z^s` modulo `2M Z^s`.

use crate::error::{Error, Result};
use crate::lattice;
use crate::linalg::{self, Smith};
use crate::plumbing::{IntersectionMatrix, NeumannMove, Plumbing};
use crate::rational::{floor_q, qi, Q};

/// Validates that `k` has length `s` and `k = m (mod 2)`.
pub fn check_characteristic(p: &Plumbing, k: &[i64]) -> Result<()> {
    if k.len() != p.len()
        || k.iter().zip(p.weights()).any(|(a, m)| (a - m).rem_euclid(2) != 0)
    {
        return Err(Error::NotCharacteristic(k.to_vec()));
    }
    Ok(())
}

/// Validates that `a` has length `s` and `a = delta (mod 2)`.
pub fn check_delta_parity(p: &Plumbing, a: &[i64]) -> Result<()> {
    if a.len() != p.len()
        || a.iter().zip(p.degrees()).any(|(x, d)| (x - d).rem_euclid(2) != 0)
    {
        return Err(Error::NotDeltaParity(a.to_vec()));
    }
    Ok(())
}

fn require_definite(p: &Plumbing) -> Result<IntersectionMatrix> {
    let m = p.intersection_matrix();
    if !m.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    Ok(m)
}

/// Solves `M y = v` exactly and reports whether `y` is integral.
fn integral_solution(m: &IntersectionMatrix, v: &[i64]) -> Option<Vec<i64>> {
    let inv = m.inverse()?;
    linalg::rat_mat_vec(inv, v)
        .into_iter()
        .map(|q| q.is_integer().then(|| *q.numer() as i64))
        .collect()
}

/// The finite group of spin^c classes of a negative definite plumbing.
///
/// Class keys are the Smith coordinates `(U z)_i mod d_i` of
/// `z = (k - m)/2 in Z^s / M Z^s`; classes are indexed `0..order` in
/// mixed radix over those keys.
#[derive(Debug, Clone)]
pub struct SpincGroup {
    plumbing: Plumbing,
    matrix: IntersectionMatrix,
    smith: Smith,
    order: u64,
}

impl SpincGroup {
    pub fn new(p: &Plumbing) -> Result<Self> {
        let matrix = require_definite(p)?;
        let smith = linalg::smith_normal_form(matrix.entries());
        let order = u64::try_from(matrix.det().unsigned_abs()).expect("determinant fits u64");
        Ok(SpincGroup {
            plumbing: p.clone(),
            matrix,
            smith,
            order,
        })
    }

    pub fn plumbing(&self) -> &Plumbing {
        &self.plumbing
    }

    pub fn matrix(&self) -> &IntersectionMatrix {
        &self.matrix
    }

    /// Number of classes, `|det M|`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn key(&self, k: &[i64]) -> Result<Vec<i128>> {
        check_characteristic(&self.plumbing, k)?;
        let z: Vec<i128> = k
            .iter()
            .zip(self.plumbing.weights())
            .map(|(a, m)| ((a - m) / 2) as i128)
            .collect();
        Ok(self
            .smith
            .u
            .iter()
            .zip(&self.smith.diag)
            .map(|(row, &d)| {
                let v: i128 = row.iter().zip(&z).map(|(a, b)| a * b).sum();
                v.rem_euclid(d)
            })
            .collect())
    }

    pub fn index_of(&self, k: &[i64]) -> Result<u64> {
        let key = self.key(k)?;
        let mut idx: u128 = 0;
        for (c, d) in key.iter().zip(&self.smith.diag).rev() {
            idx = idx * (*d as u128) + (*c as u128);
        }
        Ok(idx as u64)
    }

    /// Canonical representative of class `i`.
    pub fn nth(&self, i: u64) -> Vec<i64> {
        assert!(i < self.order, "class index out of range");
        let mut rest = i as u128;
        let key: Vec<i128> = self
            .smith
            .diag
            .iter()
            .map(|&d| {
                let c = rest % d as u128;
                rest /= d as u128;
                c as i128
            })
            .collect();
        // k = m + 2 U^{-1} c
        let k: Vec<i64> = self
            .smith
            .u_inv
            .iter()
            .zip(self.plumbing.weights())
            .map(|(row, &m)| {
                let v: i128 = row.iter().zip(&key).map(|(a, b)| a * b).sum();
                m + 2 * i64::try_from(v).expect("representative fits i64")
            })
            .collect();
        self.centered(&k)
    }

    /// Shifts `k` within its class so that the real minimiser `-M^{-1}k/2`
    /// of `chi_k` lies in `[-1/2, 1/2)^s`.
    fn centered(&self, k: &[i64]) -> Vec<i64> {
        let inv = self.matrix.inverse().expect("definite form is invertible");
        let half = Q::new(1, 2);
        let y: Vec<i64> = linalg::rat_mat_vec(inv, k)
            .into_iter()
            .map(|c| floor_q(&(-c / Q::from_integer(2) + half)) as i64)
            .collect();
        let my = self.matrix.mul_vec(&y);
        k.iter().zip(my).map(|(a, b)| a + 2 * b).collect()
    }

    /// The canonical representative of the class of `k`.
    pub fn canonical(&self, k: &[i64]) -> Result<Vec<i64>> {
        Ok(self.nth(self.index_of(k)?))
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.order).map(move |i| self.nth(i))
    }

    pub fn same(&self, k1: &[i64], k2: &[i64]) -> Result<bool> {
        Ok(self.key(k1)? == self.key(k2)?)
    }
}

/// One canonical representative per class, `|det M|` in total.
pub fn enumerate_spinc(p: &Plumbing) -> Result<Vec<Vec<i64>>> {
    Ok(SpincGroup::new(p)?.iter().collect())
}

/// Whether `(k1 - k2)/2 = M y` has an integral solution.
pub fn same_spinc(p: &Plumbing, k1: &[i64], k2: &[i64]) -> Result<bool> {
    check_characteristic(p, k1)?;
    check_characteristic(p, k2)?;
    let half: Vec<i64> = k1.iter().zip(k2).map(|(a, b)| (a - b) / 2).collect();
    Ok(integral_solution(&p.intersection_matrix(), &half).is_some())
}

pub fn conjugate(k: &[i64]) -> Vec<i64> {
    k.iter().map(|v| -v).collect()
}

pub fn is_self_conjugate(p: &Plumbing, k: &[i64]) -> Result<bool> {
    same_spinc(p, k, &conjugate(k))
}

/// `Mu = m + delta` for `u = (1, ..., 1)`.
pub fn m_u(p: &Plumbing) -> Vec<i64> {
    p.weights()
        .iter()
        .zip(p.degrees())
        .map(|(m, d)| m + d)
        .collect()
}

/// `a = k - Mu`.
pub fn k_to_a(p: &Plumbing, k: &[i64]) -> Result<Vec<i64>> {
    check_characteristic(p, k)?;
    Ok(k.iter().zip(m_u(p)).map(|(a, b)| a - b).collect())
}

/// `k = a + Mu`.
pub fn a_to_k(p: &Plumbing, a: &[i64]) -> Result<Vec<i64>> {
    check_delta_parity(p, a)?;
    Ok(a.iter().zip(m_u(p)).map(|(x, b)| x + b).collect())
}

/// Carries a characteristic vector across a Neumann move on `p`.
///
/// Blow-ups prepend a coordinate for the new vertex and correct the affected
/// neighbours. Blow-downs first move `k` within its class so that the `-1`
/// vertex carries `+1` (type a) or `-1` (type b), then undo that correction.
pub fn transport_spinc(p: &Plumbing, mv: &NeumannMove, k: &[i64]) -> Result<Vec<i64>> {
    if k.len() != p.len() {
        return Err(Error::MoveMismatch {
            expected: p.len(),
            got: k.len(),
        });
    }
    check_characteristic(p, k)?;
    let (_, map) = p.apply_move(mv)?;
    match *mv {
        NeumannMove::ABlowup { edge: (i, j) } => {
            let mut out = Vec::with_capacity(k.len() + 1);
            out.push(1);
            out.extend(k.iter().enumerate().map(|(v, &x)| {
                if v == i || v == j {
                    x - 1
                } else {
                    x
                }
            }));
            Ok(out)
        }
        NeumannMove::BBlowup { vertex: i } => {
            let mut out = Vec::with_capacity(k.len() + 1);
            out.push(-1);
            out.extend(
                k.iter()
                    .enumerate()
                    .map(|(v, &x)| if v == i { x + 1 } else { x }),
            );
            Ok(out)
        }
        NeumannMove::ABlowdown { vertex: v } | NeumannMove::BBlowdown { vertex: v } => {
            let target = if matches!(mv, NeumannMove::ABlowdown { .. }) { 1 } else { -1 };
            let nb = p.neighbors(v);
            // k + 2c M e_v has v-th entry k_v - 2c and adds 2c on neighbours
            let c = (k[v] - target) / 2;
            let mut shifted = k.to_vec();
            shifted[v] -= 2 * c;
            for &w in &nb {
                shifted[w] += 2 * c;
            }
            debug_assert_eq!(shifted[v], target);
            let fix = target;
            let mut out = vec![0; k.len() - 1];
            for (old, &x) in shifted.iter().enumerate() {
                if let Some(new) = map.get(old) {
                    out[new] = if nb.contains(&old) { x + fix } else { x };
                }
            }
            Ok(out)
        }
    }
}

/// Transport of `a`-vectors across a blow-up: `(0, a)` for type (a), and
/// `(0, a) + (-1, 1 at the attachment vertex)` for type (b).
pub fn transport_a(p: &Plumbing, mv: &NeumannMove, a: &[i64]) -> Result<Vec<i64>> {
    if a.len() != p.len() {
        return Err(Error::MoveMismatch {
            expected: p.len(),
            got: a.len(),
        });
    }
    check_delta_parity(p, a)?;
    p.apply_move(mv)?;
    let mut out = Vec::with_capacity(a.len() + 1);
    match *mv {
        NeumannMove::ABlowup { .. } => {
            out.push(0);
            out.extend_from_slice(a);
        }
        NeumannMove::BBlowup { vertex: i } => {
            out.push(-1);
            out.extend(
                a.iter()
                    .enumerate()
                    .map(|(v, &x)| if v == i { x + 1 } else { x }),
            );
        }
        _ => {
            return Err(Error::MoveNotApplicable(
                "a-vector transport is defined for blow-ups only".into(),
            ))
        }
    }
    Ok(out)
}

/// `k^2 = k^t M^{-1} k`.
pub fn square(m: &IntersectionMatrix, k: &[i64]) -> Q {
    linalg::inverse_form(m.inverse().expect("nonsingular form"), k)
}

/// `d(-Y, [k]) = -(k^2 - 8 min chi_k + s)/4`, the maximum of `(k'^2 + s)/4`
/// over the class being attained at `k' = k + 2My` for a minimiser `y`.
pub fn d_invariant(p: &Plumbing, k: &[i64]) -> Result<Q> {
    check_characteristic(p, k)?;
    let m = require_definite(p)?;
    let cmin = lattice::chi_min(m.entries(), k);
    let s = p.len() as i64;
    Ok(-(square(&m, k) - qi(8 * cmin) + qi(s)) / Q::from_integer(4))
}
