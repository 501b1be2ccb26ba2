//! Level sums `P_k^n`, the stabilised series, and the conjugation symmetry.

use std::collections::BTreeMap;

use crate::admissible::{check_a3, AdmissibleFamily};
use crate::error::{Error, Result};
use crate::lattice::Ellipsoid;
use crate::plumbing::Plumbing;
use crate::poly::{QSeries, TwoVarPoly, TwoVarSeries};
use crate::rational::{floor_q, qi, Q};
use crate::root::LatticeContext;
use crate::spinc;

/// `P_k^n`: the weight sum over every lattice point of `S_n`.
pub fn p_k_n(ctx: &LatticeContext, f: &dyn AdmissibleFamily, n: i64) -> Result<TwoVarPoly> {
    let mut acc = TwoVarPoly::new();
    for (x, _) in ctx.sublevel_points(n) {
        if let Some((e, t, c)) = ctx.term(f, &x)? {
            acc.add_term(e, t, c);
        }
    }
    Ok(acc)
}

/// Points with `2 chi_a(x) <= floor(order)`, i.e. `epsilon_k(x) <= Delta_k + order`,
/// with their `2 chi_a`.
fn series_points(ctx: &LatticeContext, order: Q) -> Vec<(Vec<i64>, i64)> {
    let b: Vec<i64> = ctx.a().iter().map(|v| -v).collect();
    let bound = floor_q(&order);
    let e = Ellipsoid::new(ctx.matrix().entries(), &b, i64::try_from(bound).expect("order fits in i64"));
    e.points()
}

/// The stabilised series through `q^{Delta_k + order}`.
///
/// Uses `epsilon_k(x) = Delta_k + 2 chi_a(x)` with `a = k - Mu`, so the
/// contributing points form a single ellipsoid.
pub fn two_var_series(ctx: &LatticeContext, f: &dyn AdmissibleFamily, order: Q) -> Result<TwoVarSeries> {
    let mut terms = TwoVarPoly::new();
    for (x, _) in series_points(ctx, order) {
        if let Some((e, t, c)) = ctx.term(f, &x)? {
            terms.add_term(e, t, c);
        }
    }
    Ok(TwoVarSeries {
        delta: ctx.delta(),
        order,
        terms,
    })
}

pub fn specialize_t1(series: &TwoVarSeries) -> QSeries {
    series.specialize_t1()
}

/// Per-bidegree history of `P_k^n` restricted to `q_exp <= Delta_k + order`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationReport {
    pub chi_min: i64,
    /// Single-stem level used for `Top::Auto`.
    pub auto_top: i64,
    /// `max(max chi over local_min_candidates, first connected level)`.
    pub candidate_top: i64,
    /// `max(auto_top, max chi_k over {2 chi_a <= order})`: every tracked
    /// bidegree is final from this level on.
    pub certified_top: i64,
    /// Last level scanned; at least two past `certified_top`.
    pub scanned_to: i64,
    /// For each bidegree `(q_exp, t_exp)` that is ever nonzero, the level at
    /// which its coefficient last changed.
    pub last_change: BTreeMap<(Q, i64), i64>,
    /// The stable truncated limit.
    pub limit: TwoVarPoly,
}

impl StabilizationReport {
    pub fn max_last_change(&self) -> Option<i64> {
        self.last_change.values().copied().max()
    }

    /// Whether every tracked coefficient is constant from `level` on.
    pub fn stable_from(&self, level: i64) -> bool {
        self.max_last_change().is_none_or(|l| l <= level)
    }

    pub fn stable_from_auto_top(&self) -> bool {
        self.stable_from(self.auto_top)
    }

    pub fn stable_from_candidate_top(&self) -> bool {
        self.stable_from(self.candidate_top)
    }

    /// Bidegrees whose last change lies above `level`.
    pub fn late_changes(&self, level: i64) -> Vec<((Q, i64), i64)> {
        self.last_change
            .iter()
            .filter(|(_, &l)| l > level)
            .map(|(&b, &l)| (b, l))
            .collect()
    }
}

/// Tracks `P_k^n` from `chi_min` upward through every bidegree below
/// `Delta_k + order`.
///
/// A lattice point `x` enters `P_k^n` at `n = chi_k(x)`, and only points with
/// `2 chi_a(x) <= order` reach the tracked bidegrees, so the scan is exact.
pub fn verify_stabilization(
    ctx: &LatticeContext,
    f: &dyn AdmissibleFamily,
    order: Q,
) -> Result<StabilizationReport> {
    let chi_min = ctx.chi_min();
    let auto_top = ctx.auto_top();
    let pts = if order < qi(0) { Vec::new() } else { series_points(ctx, order) };
    let certified_top = pts
        .iter()
        .map(|(x, _)| ctx.chi(x))
        .max()
        .map_or(auto_top, |c| c.max(auto_top));
    let scanned_to = certified_top + 2;
    let mut entries: Vec<(i64, Q, i64, Q)> = Vec::new();
    for (x, _) in &pts {
        if let Some((e, t, c)) = ctx.term(f, x)? {
            entries.push((ctx.chi(x), e, t, c));
        }
    }
    entries.sort();
    let mut current: BTreeMap<(Q, i64), Q> = BTreeMap::new();
    let mut last_change: BTreeMap<(Q, i64), i64> = BTreeMap::new();
    let mut it = entries.into_iter().peekable();
    for n in chi_min..=scanned_to {
        let mut touched: BTreeMap<(Q, i64), Q> = BTreeMap::new();
        while let Some(&(lvl, e, t, c)) = it.peek() {
            if lvl > n {
                break;
            }
            *touched.entry((e, t)).or_insert_with(|| qi(0)) += c;
            it.next();
        }
        for (b, dc) in touched {
            if dc != qi(0) {
                *current.entry(b).or_insert_with(|| qi(0)) += dc;
                last_change.insert(b, n);
            }
        }
    }
    let mut limit = TwoVarPoly::new();
    for ((e, t), c) in current {
        limit.add_term(e, t, c);
    }
    Ok(StabilizationReport {
        chi_min,
        auto_top,
        candidate_top: ctx.candidate_top(),
        certified_top,
        scanned_to,
        last_change,
        limit,
    })
}

/// Checks `P_[k](q, t) = P_[-k](q, 1/t)` through `order`. The family must
/// pass the conjugation-symmetry window check first.
pub fn conjugation_check(p: &Plumbing, k: &[i64], f: &dyn AdmissibleFamily, order: Q) -> Result<bool> {
    let n_max = p.degrees().into_iter().max().unwrap_or(0).max(10) as usize;
    if let Some(v) = check_a3(f, n_max, 50)? {
        return Err(Error::A3Violated { n: v.n, r: v.r });
    }
    let ctx = LatticeContext::new(p, k)?;
    let conj = LatticeContext::new(p, &spinc::conjugate(k))?;
    let lhs = two_var_series(&ctx, f, order)?;
    let rhs = two_var_series(&conj, f, order)?.invert_t();
    Ok(lhs.agrees_with(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::{Expansion, FHat, FHatPm};
    use crate::rational::q;

    fn s3() -> TwoVarPoly {
        let mut p = TwoVarPoly::new();
        p.add_term(q(-1, 2), 0, qi(-2));
        p.add_term(q(1, 2), 1, qi(1));
        p.add_term(q(1, 2), -1, qi(1));
        p
    }

    #[test]
    fn s3_series_from_both_plumbings() {
        let g1 = Plumbing::new(vec![-1], vec![]).unwrap();
        let g2 = Plumbing::new(vec![-1, -2], vec![(0, 1)]).unwrap();
        for (p, k) in [(g1, vec![-1]), (g2, vec![-1, 0])] {
            let ctx = LatticeContext::new(&p, &k).unwrap();
            let s = two_var_series(&ctx, &FHat, qi(10)).unwrap();
            assert_eq!(s.terms, s3());
            let t1 = specialize_t1(&s);
            assert_eq!(t1.terms, BTreeMap::from([(q(-1, 2), qi(-2)), (q(1, 2), qi(2))]));
        }
    }

    #[test]
    fn level_sums() {
        let g1 = Plumbing::new(vec![-1], vec![]).unwrap();
        let ctx = LatticeContext::new(&g1, &[-1]).unwrap();
        let mut level0 = TwoVarPoly::new();
        level0.add_term(q(-1, 2), 0, qi(-2));
        level0.add_term(q(1, 2), 1, qi(1));
        assert_eq!(p_k_n(&ctx, &FHat, 0).unwrap(), level0);
        assert_eq!(p_k_n(&ctx, &FHat, 7).unwrap(), s3());
        assert!(p_k_n(&ctx, &FHat, -1).unwrap().is_zero());
        let rep = verify_stabilization(&ctx, &FHat, qi(10)).unwrap();
        assert!(rep.max_last_change().unwrap() <= 1);
        assert_eq!(rep.limit, s3());
        assert!(verify_stabilization(&ctx, &FHat, qi(-1)).unwrap().last_change.is_empty());
    }

    #[test]
    fn lens_series() {
        for p in 2..6 {
            let pl = Plumbing::new(vec![-p], vec![]).unwrap();
            let ctx = LatticeContext::new(&pl, &[-p]).unwrap();
            let s = two_var_series(&ctx, &FHat, qi(10)).unwrap();
            assert_eq!(s.terms, TwoVarPoly::monomial(qi(-2), -q(3 - p as i128, 4), 0));
        }
    }

    #[test]
    fn conjugation_needs_a3() {
        let g2 = Plumbing::new(vec![-1, -2], vec![(0, 1)]).unwrap();
        assert!(conjugation_check(&g2, &[-1, 0], &FHat, qi(10)).unwrap());
        assert!(matches!(
            conjugation_check(&g2, &[-1, 0], &FHatPm(Expansion::Plus), qi(10)),
            Err(Error::A3Violated { .. })
        ));
    }
}
