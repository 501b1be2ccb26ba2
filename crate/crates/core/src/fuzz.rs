//! Random Neumann-move chains and the invariance checks run along them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admissible::AdmissibleFamily;
use crate::error::Result;
use crate::plumbing::{random_plumbing_with, NeumannMove, Plumbing};
use crate::rational::Q;
use crate::root::{build_root, canonical_code, normalize_root, GradingMode, LatticeContext, Top};
use crate::series::two_var_series;
use crate::spinc::{self, SpincGroup};

/// A plumbing, a spin^c representative and a move sequence starting there.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzCase {
    pub plumbing: Plumbing,
    pub k: Vec<i64>,
    pub moves: Vec<NeumannMove>,
}

/// Every plumbing and transported representative along a case, start first.
pub type Chain = Vec<(Plumbing, Vec<i64>)>;

impl FuzzCase {
    pub fn chain(&self) -> Result<Chain> {
        let mut out = vec![(self.plumbing.clone(), self.k.clone())];
        for mv in &self.moves {
            let (p, k) = out.last().expect("nonempty");
            let k2 = spinc::transport_spinc(p, mv, k)?;
            let (p2, _) = p.apply_move(mv)?;
            out.push((p2, k2));
        }
        Ok(out)
    }
}

/// Picks a move uniformly, but takes an available blow-down half the time
/// so chains do not only grow.
pub fn random_move<R: Rng>(rng: &mut R, p: &Plumbing) -> NeumannMove {
    let moves = p.applicable_moves();
    let downs: Vec<&NeumannMove> = moves.iter().filter(|m| !m.is_blowup()).collect();
    if !downs.is_empty() && rng.gen_bool(0.5) {
        return **downs.choose(rng).expect("nonempty");
    }
    *moves.choose(rng).expect("blow-ups always apply")
}

/// A uniformly random spin^c class, returned as its centred representative.
pub fn random_spinc<R: Rng>(rng: &mut R, p: &Plumbing) -> Result<Vec<i64>> {
    let g = SpincGroup::new(p)?;
    Ok(g.nth(rng.gen_range(0..g.order())))
}

pub fn random_moves<R: Rng>(rng: &mut R, p: &Plumbing, len: usize) -> Result<Vec<NeumannMove>> {
    let mut cur = p.clone();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let mv = random_move(rng, &cur);
        cur = cur.apply_move(&mv)?.0;
        out.push(mv);
    }
    Ok(out)
}

/// Deterministic case: random tree with at most `s_max` vertices, random
/// class, between 1 and `max_moves` moves.
pub fn random_case(seed: u64, s_max: usize, max_moves: usize) -> Result<FuzzCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plumbing = random_plumbing_with(&mut rng, s_max)?;
    let k = random_spinc(&mut rng, &plumbing)?;
    let len = rng.gen_range(1..=max_moves.max(1));
    let moves = random_moves(&mut rng, &plumbing, len)?;
    Ok(FuzzCase { plumbing, k, moves })
}

/// Outcome of comparing every step of a chain with its start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub steps: usize,
    /// Common top, measured up from `chi_min`.
    pub top: i64,
    pub roots_equal: bool,
    pub series_equal: bool,
    pub d_equal: bool,
    /// First step at which something differed.
    pub first_mismatch: Option<usize>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.roots_equal && self.series_equal && self.d_equal
    }
}

/// Roots are regraded so `chi_min = 0` and cut at a common height, since a
/// blow-down moves the representative and shifts raw `chi` by a constant.
/// Series are compared through `max Delta + order` on every step.
pub fn check_chain(chain: &Chain, f: &dyn AdmissibleFamily, order: Q) -> Result<InvarianceReport> {
    let ctxs: Vec<LatticeContext> = chain
        .iter()
        .map(|(p, k)| LatticeContext::new(p, k))
        .collect::<Result<_>>()?;
    let top = ctxs.iter().map(|c| c.auto_top() - c.chi_min()).max().unwrap_or(0);
    // Delta depends on the representative; compare at one absolute cutoff
    let cutoff = ctxs.iter().map(|c| c.delta()).max().expect("nonempty chain") + order;
    let mut codes = Vec::with_capacity(ctxs.len());
    let mut series = Vec::with_capacity(ctxs.len());
    let mut ds = Vec::with_capacity(ctxs.len());
    for c in &ctxs {
        let root = build_root(c, f, Top::Level(c.chi_min() + top))?;
        codes.push(canonical_code(&normalize_root(&root, GradingMode::ChiMinZero), false)?);
        series.push(two_var_series(c, f, cutoff - c.delta())?);
        ds.push(c.d_invariant());
    }
    let mut rep = InvarianceReport {
        steps: chain.len().saturating_sub(1),
        top,
        roots_equal: true,
        series_equal: true,
        d_equal: true,
        first_mismatch: None,
    };
    for i in 1..ctxs.len() {
        let r = codes[i] == codes[0];
        let s = series[i].terms == series[0].terms;
        let d = ds[i] == ds[0];
        rep.roots_equal &= r;
        rep.series_equal &= s;
        rep.d_equal &= d;
        if !(r && s && d) && rep.first_mismatch.is_none() {
            rep.first_mismatch = Some(i);
        }
    }
    Ok(rep)
}

pub fn check_case(case: &FuzzCase, f: &dyn AdmissibleFamily, order: Q) -> Result<InvarianceReport> {
    check_chain(&case.chain()?, f, order)
}
