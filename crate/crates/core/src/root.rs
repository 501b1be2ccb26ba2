//! The lattice side: `chi_k`, sublevel sets, and weighted graded roots.
//!
//! A cell of the cube complex lies in `S_j` exactly when all of its corners
//! do, so components of `S_j` are components of the graph on its lattice
//! points joined by unit steps. Components are computed with one union-find
//! sweep that inserts points in order of increasing `chi`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::{FxHashMap, FxHashSet};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::admissible::{self, AdmissibleFamily};
use crate::error::{Error, Result};
use crate::lattice;
use crate::linalg;
use crate::plumbing::{IntersectionMatrix, Plumbing};
use crate::poly::TwoVarPoly;
use crate::rational::{fmt_q, qi, Q};
use crate::spinc;

/// `chi_k`, `epsilon_k`, `theta_k` and their enumerators for a fixed
/// plumbing and characteristic `k`.
#[derive(Debug)]
pub struct LatticeContext {
    plumbing: Plumbing,
    matrix: IntersectionMatrix,
    k: Vec<i64>,
    a: Vec<i64>,
    mu: Vec<i64>,
    degrees: Vec<i64>,
    delta: Q,
    theta: i64,
    candidates: OnceLock<Vec<Vec<i64>>>,
    births: OnceLock<Vec<(Vec<i64>, i64)>>,
    chi_min: OnceLock<i64>,
    auto_top: OnceLock<i64>,
    /// Largest sublevel set enumerated so far, sorted by `(chi, x)`, and its level.
    points: Mutex<Option<(i64, Arc<SortedPoints>)>>,
}

type SortedPoints = Vec<(Vec<i64>, i64)>;

impl LatticeContext {
    pub fn new(p: &Plumbing, k: &[i64]) -> Result<Self> {
        spinc::check_characteristic(p, k)?;
        let matrix = p.intersection_matrix();
        if !matrix.is_negative_definite() {
            return Err(Error::NotNegativeDefinite);
        }
        let mu = spinc::m_u(p);
        let a = spinc::k_to_a(p, k)?;
        let s = p.len() as i64;
        let sum_m: i64 = p.weights().iter().sum();
        let delta = -(spinc::square(&matrix, &a) + qi(3 * s + sum_m)) / Q::from_integer(4);
        let uu: i64 = mu.iter().sum();
        let ku: i64 = k.iter().sum();
        debug_assert!((ku - uu) % 2 == 0);
        Ok(LatticeContext {
            plumbing: p.clone(),
            matrix,
            k: k.to_vec(),
            a,
            mu,
            degrees: p.degrees(),
            delta,
            theta: (ku - uu) / 2,
            candidates: OnceLock::new(),
            births: OnceLock::new(),
            chi_min: OnceLock::new(),
            auto_top: OnceLock::new(),
            points: Mutex::new(None),
        })
    }

    pub fn plumbing(&self) -> &Plumbing {
        &self.plumbing
    }

    pub fn matrix(&self) -> &IntersectionMatrix {
        &self.matrix
    }

    pub fn k(&self) -> &[i64] {
        &self.k
    }

    /// `a = k - Mu`.
    pub fn a(&self) -> &[i64] {
        &self.a
    }

    /// `Delta_k = -((k - Mu)^2 + 3s + sum m) / 4`.
    pub fn delta(&self) -> Q {
        self.delta
    }

    /// `Theta_k = (k.u - <u, u>) / 2`.
    pub fn theta(&self) -> i64 {
        self.theta
    }

    pub fn chi(&self, x: &[i64]) -> i64 {
        lattice::chi(self.matrix.entries(), &self.k, x)
    }

    /// `(epsilon_k(x), theta_k(x))` with `epsilon_k = Delta_k + 2 chi_k + <x, u>`
    /// and `theta_k = Theta_k + <x, u>`.
    pub fn epsilon_theta(&self, x: &[i64]) -> (Q, i64) {
        let xu = linalg::dot(x, &self.mu);
        (self.delta + qi(2 * self.chi(x) + xu), self.theta + xu)
    }

    /// The lattice weight `F_{Gamma,k}(x)`.
    pub fn f_weight(&self, f: &dyn AdmissibleFamily, x: &[i64]) -> Result<Q> {
        admissible::f_gamma_a(self.matrix.entries(), &self.degrees, &self.a, f, x)
    }

    /// The monomial `F(x) q^epsilon t^theta`, or zero.
    pub fn term(&self, f: &dyn AdmissibleFamily, x: &[i64]) -> Result<Option<(Q, i64, Q)>> {
        let c = self.f_weight(f, x)?;
        if c.is_zero() {
            return Ok(None);
        }
        let (e, t) = self.epsilon_theta(x);
        Ok(Some((e, t, c)))
    }

    /// Every `x` with `|(2Mx + k)_i| <= -M_ii`; contains every weak local
    /// minimum of `chi_k`, in particular every global minimiser.
    pub fn local_min_candidates(&self) -> &[Vec<i64>] {
        self.candidates
            .get_or_init(|| lattice::weak_local_minima(self.matrix.entries(), &self.k))
    }

    pub fn chi_min(&self) -> i64 {
        *self.chi_min.get_or_init(|| {
            self.local_min_candidates()
                .iter()
                .map(|x| self.chi(x))
                .min()
                .expect("nonempty candidate set")
        })
    }

    /// Candidates that start a new component of their sublevel set: the
    /// plateau of equal `chi` around them has no neighbour below. One entry
    /// per plateau, keyed by its least point, sorted by `(chi, point)`.
    pub fn births(&self) -> &[(Vec<i64>, i64)] {
        self.births.get_or_init(|| {
            let mut seen: FxHashSet<Vec<i64>> = FxHashSet::default();
            let mut out = Vec::new();
            for x in self.local_min_candidates() {
                if seen.contains(x) {
                    continue;
                }
                let j = self.chi(x);
                let m = self.matrix.entries();
                let mut plateau = vec![x.clone()];
                let mut stack = vec![x.clone()];
                let mut local: FxHashSet<Vec<i64>> = FxHashSet::default();
                local.insert(x.clone());
                let mut lower = false;
                'bfs: while let Some(mut y) = stack.pop() {
                    // chi(y +- e_i) = j - (+-w_i + M_ii) / 2 with w = 2My + k
                    let w: Vec<i64> = linalg::mat_vec(m, &y)
                        .iter()
                        .zip(&self.k)
                        .map(|(v, k)| 2 * v + k)
                        .collect();
                    for i in 0..y.len() {
                        for sign in [-1, 1] {
                            let c = j - (sign * w[i] + m[i][i]) / 2;
                            if c < j {
                                lower = true;
                                break 'bfs;
                            }
                            if c == j {
                                y[i] += sign;
                                if !local.contains(&y) {
                                    local.insert(y.clone());
                                    plateau.push(y.clone());
                                    stack.push(y.clone());
                                }
                                y[i] -= sign;
                            }
                        }
                    }
                }
                if !lower {
                    let least = plateau.iter().min().expect("nonempty").clone();
                    out.push((least, j));
                }
                seen.extend(local);
            }
            out.sort_by(|(x, c), (y, d)| c.cmp(d).then_with(|| x.cmp(y)));
            out.dedup();
            out
        })
    }

    /// Highest level at which a new component appears.
    pub fn last_birth(&self) -> i64 {
        self.births().iter().map(|b| b.1).max().expect("the minimum is a birth")
    }

    pub fn d_invariant(&self) -> Q {
        let s = self.plumbing.len() as i64;
        -(spinc::square(&self.matrix, &self.k) - qi(8 * self.chi_min()) + qi(s)) / Q::from_integer(4)
    }

    /// Lattice points of `S_j` with their `chi`, sorted by `(chi, x)`.
    pub fn sublevel_points(&self, j: i64) -> Vec<(Vec<i64>, i64)> {
        let (all, n) = self.sorted_prefix(j);
        all[..n].to_vec()
    }

    /// A sorted superset of `S_j` whose first `n` entries are `S_j`. Every
    /// `S_j` is a prefix of any larger sorted sublevel set, so one
    /// enumeration serves all lower levels.
    fn sorted_prefix(&self, j: i64) -> (Arc<SortedPoints>, usize) {
        let mut cache = self.points.lock().expect("points cache poisoned");
        let all = match cache.as_ref() {
            Some((top, all)) if *top >= j => Arc::clone(all),
            _ => {
                let mut pts = lattice::sublevel_points(self.matrix.entries(), &self.k, j);
                pts.sort_by(|(x, c), (y, d)| c.cmp(d).then_with(|| x.cmp(y)));
                let all = Arc::new(pts);
                *cache = Some((j, Arc::clone(&all)));
                all
            }
        };
        let n = all.partition_point(|(_, c)| *c <= j);
        (all, n)
    }

    /// Components of `S_j`, each sorted, ordered by least member.
    pub fn sublevel_components(&self, j: i64) -> Vec<Vec<Vec<i64>>> {
        let pts = self.sublevel_points(j);
        let mut uf = UnionFind::new(pts.len());
        let index: FxHashMap<&[i64], usize> =
            pts.iter().enumerate().map(|(i, (x, _))| (x.as_slice(), i)).collect();
        for (i, (x, _)) in pts.iter().enumerate() {
            for_each_neighbor(x, |y| {
                if let Some(&jdx) = index.get(y) {
                    uf.union(i, jdx);
                }
            });
        }
        let mut groups: BTreeMap<usize, Vec<Vec<i64>>> = BTreeMap::new();
        for (i, (x, _)) in pts.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(x.clone());
        }
        let mut comps: Vec<Vec<Vec<i64>>> = groups
            .into_values()
            .map(|mut g| {
                g.sort();
                g
            })
            .collect();
        comps.sort();
        comps
    }

    /// The first level `j >= last_birth()` at which `S_j` is connected.
    /// Above it every level has exactly one component.
    pub fn auto_top(&self) -> i64 {
        *self.auto_top.get_or_init(|| self.find_auto_top())
    }

    fn find_auto_top(&self) -> i64 {
        let start = self.last_birth();
        let mut margin = 1;
        loop {
            let sweep = Sweep::run(self, start + margin, None).expect("no family, no errors");
            if let Some(j) = sweep
                .levels
                .iter()
                .enumerate()
                .map(|(i, comps)| (sweep.bottom + i as i64, comps.len()))
                .find(|&(j, n)| j >= start && n == 1)
                .map(|(j, _)| j)
            {
                return j;
            }
            margin *= 2;
        }
    }

    /// The smallest `j` with `S_j` connected. Later births may split it again.
    pub fn first_connected_level(&self) -> i64 {
        let sweep = Sweep::run(self, self.auto_top(), None).expect("no family, no errors");
        sweep
            .levels
            .iter()
            .position(|comps| comps.len() == 1)
            .map(|i| sweep.bottom + i as i64)
            .expect("S_j is connected at the AUTO top")
    }

    /// `max(max chi over local_min_candidates, first_connected_level())`.
    /// Coarser than `auto_top`, and usually far above it.
    pub fn candidate_top(&self) -> i64 {
        let cand = self
            .local_min_candidates()
            .iter()
            .map(|x| self.chi(x))
            .max()
            .expect("nonempty candidate set");
        cand.max(self.first_connected_level())
    }
}

/// Calls `f` on the `2s` unit-step neighbours of `x`.
fn for_each_neighbor<F: FnMut(&[i64])>(x: &[i64], mut f: F) {
    let mut y = x.to_vec();
    for i in 0..x.len() {
        y[i] = x[i] - 1;
        f(&y);
        y[i] = x[i] + 1;
        f(&y);
        y[i] = x[i];
    }
}

#[derive(Debug)]
struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `(kept, absorbed)` roots, or `None` if already joined.
    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (keep, gone) = if self.rank[ra] >= self.rank[rb] { (ra, rb) } else { (rb, ra) };
        if self.rank[keep] == self.rank[gone] {
            self.rank[keep] += 1;
        }
        self.parent[gone] = keep;
        Some((keep, gone))
    }
}

/// One component of one sublevel set.
#[derive(Debug, Clone)]
struct Comp {
    rep: usize,
    size: usize,
    weight: TwoVarPoly,
}

/// Components of every `S_j`, `chi_min <= j <= top`, with their
/// inclusion into the next level.
#[derive(Debug)]
struct Sweep {
    bottom: i64,
    points: Arc<SortedPoints>,
    levels: Vec<Vec<Comp>>,
    /// For level `i`, the component index at level `i + 1` containing each
    /// component.
    parents: Vec<Vec<usize>>,
}

impl Sweep {
    fn run(ctx: &LatticeContext, top: i64, family: Option<&dyn AdmissibleFamily>) -> Result<Sweep> {
        let bottom = ctx.chi_min();
        let (all, n) = ctx.sorted_prefix(top);
        let points = &all[..n];
        let index: FxHashMap<&[i64], usize> =
            points.iter().enumerate().map(|(i, (x, _))| (x.as_slice(), i)).collect();
        let mut uf = UnionFind::new(points.len());
        let mut min_rep: Vec<usize> = (0..points.len()).collect();
        let mut size: Vec<usize> = vec![1; points.len()];
        let mut weight: Vec<TwoVarPoly> = vec![TwoVarPoly::new(); points.len()];
        let mut active: BTreeSet<usize> = BTreeSet::new();
        let mut levels: Vec<Vec<Comp>> = Vec::new();
        let mut parents: Vec<Vec<usize>> = Vec::new();
        let mut prev_reps: Vec<usize> = Vec::new();
        let mut next = 0;
        for j in bottom..=top {
            while next < points.len() && points[next].1 == j {
                let (x, _) = &points[next];
                if let Some(f) = family {
                    if let Some((e, t, c)) = ctx.term(f, x)? {
                        weight[next].add_term(e, t, c);
                    }
                }
                active.insert(next);
                let i = next;
                let mut joins = Vec::new();
                for_each_neighbor(x, |y| {
                    if let Some(&jdx) = index.get(y) {
                        if jdx < i {
                            joins.push(jdx);
                        }
                    }
                });
                for jdx in joins {
                    if let Some((keep, gone)) = uf.union(i, jdx) {
                        active.remove(&gone);
                        let (a, b) = (min_rep[keep], min_rep[gone]);
                        min_rep[keep] = if points[a].0 <= points[b].0 { a } else { b };
                        size[keep] += size[gone];
                        let w = std::mem::take(&mut weight[gone]);
                        if weight[keep].len() < w.len() {
                            let mine = std::mem::replace(&mut weight[keep], w);
                            weight[keep].add_assign(&mine);
                        } else {
                            weight[keep].add_assign(&w);
                        }
                    }
                }
                next += 1;
            }
            let mut comps: Vec<(usize, Comp)> = active
                .iter()
                .map(|&r| {
                    (
                        r,
                        Comp {
                            rep: min_rep[r],
                            size: size[r],
                            weight: weight[r].clone(),
                        },
                    )
                })
                .collect();
            comps.sort_by(|a, b| points[a.1.rep].0.cmp(&points[b.1.rep].0));
            let slot: FxHashMap<usize, usize> =
                comps.iter().enumerate().map(|(i, (r, _))| (*r, i)).collect();
            if !levels.is_empty() {
                parents.push(prev_reps.iter().map(|&rep| slot[&uf.find(rep)]).collect());
            }
            prev_reps = comps.iter().map(|(_, c)| c.rep).collect();
            levels.push(comps.into_iter().map(|(_, c)| c).collect());
        }
        Ok(Sweep {
            bottom,
            points: Arc::clone(&all),
            levels,
            parents,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradingMode {
    /// Levels are raw values of `chi_k`.
    Chi,
    /// Levels shifted so the lowest is zero.
    ChiMinZero,
    /// Vertices labelled by `2 (chi - chi_min) + d`.
    HfGrading,
}

/// Requested truncation level for [`build_root`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Top {
    Auto,
    Level(i64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootVertex {
    pub id: usize,
    pub level: i64,
    pub weight: TwoVarPoly,
    pub parent: Option<usize>,
    /// Lexicographically least lattice point of the component.
    pub representative: Vec<i64>,
    /// Number of lattice points in the component.
    pub size: usize,
}

/// A graded root truncated at `top`, each vertex weighted by the sum of
/// `F(x) q^epsilon(x) t^theta(x)` over its component.
///
/// Vertex ids run bottom-up: by level, then by representative.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGradedRoot {
    pub vertices: Vec<RootVertex>,
    pub chi_min: i64,
    pub top: i64,
    pub auto_top: i64,
    pub stabilization_level: i64,
    pub d_invariant: Q,
    pub grading: GradingMode,
    /// Set when `top` is below `auto_top`, so the single stem is not certified.
    pub truncated_below_stabilization: bool,
    pub family: String,
    pub k: Vec<i64>,
}

/// Builds the weighted graded root up to `top` (inclusive).
pub fn build_root(ctx: &LatticeContext, f: &dyn AdmissibleFamily, top: Top) -> Result<WeightedGradedRoot> {
    let auto_top = ctx.auto_top();
    let top = match top {
        Top::Auto => auto_top,
        Top::Level(t) => t,
    };
    let chi_min = ctx.chi_min();
    let sweep = Sweep::run(ctx, top, Some(f))?;
    let mut vertices = Vec::new();
    let mut first_id = Vec::with_capacity(sweep.levels.len());
    for (i, comps) in sweep.levels.iter().enumerate() {
        first_id.push(vertices.len());
        for c in comps {
            vertices.push(RootVertex {
                id: vertices.len(),
                level: sweep.bottom + i as i64,
                weight: c.weight.clone(),
                parent: None,
                representative: sweep.points[c.rep].0.clone(),
                size: c.size,
            });
        }
    }
    for (i, ps) in sweep.parents.iter().enumerate() {
        for (slot, &p) in ps.iter().enumerate() {
            vertices[first_id[i] + slot].parent = Some(first_id[i + 1] + p);
        }
    }
    // lowest level from which every level up to the top is a single vertex
    let mut stabilization_level = top;
    for (i, comps) in sweep.levels.iter().enumerate().rev() {
        if comps.len() != 1 {
            break;
        }
        stabilization_level = sweep.bottom + i as i64;
    }
    Ok(WeightedGradedRoot {
        vertices,
        chi_min,
        top,
        auto_top,
        stabilization_level,
        d_invariant: ctx.d_invariant(),
        grading: GradingMode::Chi,
        truncated_below_stabilization: top < auto_top,
        family: f.name(),
        k: ctx.k().to_vec(),
    })
}

impl WeightedGradedRoot {
    pub fn hf_grading(&self, level: i64) -> Q {
        qi(2 * (level - self.chi_min)) + self.d_invariant
    }

    pub fn level(&self, level: i64) -> Vec<&RootVertex> {
        self.vertices.iter().filter(|v| v.level == level).collect()
    }

    /// Vertices whose HF grading equals `g`.
    pub fn at_hf_grading(&self, g: Q) -> Vec<&RootVertex> {
        self.vertices
            .iter()
            .filter(|v| self.hf_grading(v.level) == g)
            .collect()
    }

    pub fn children(&self, id: usize) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|v| v.parent == Some(id))
            .map(|v| v.id)
            .collect()
    }

    pub fn levels(&self) -> BTreeMap<i64, Vec<&RootVertex>> {
        let mut out: BTreeMap<i64, Vec<&RootVertex>> = BTreeMap::new();
        for v in &self.vertices {
            out.entry(v.level).or_default().push(v);
        }
        out
    }

    /// Vertex labels under the current grading mode.
    pub fn label(&self, level: i64) -> Q {
        match self.grading {
            GradingMode::HfGrading => self.hf_grading(level),
            GradingMode::Chi | GradingMode::ChiMinZero => qi(level),
        }
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                json!({
                    "id": v.id,
                    "level": v.level,
                    "hf_grading": fmt_q(&self.hf_grading(v.level)),
                    "parent": v.parent,
                    "weight": v.weight.to_json(),
                })
            })
            .collect();
        json!({
            "d": fmt_q(&self.d_invariant),
            "chi_min": self.chi_min,
            "stab_level": self.stabilization_level,
            "top": self.top,
            "auto_top": self.auto_top,
            "truncated_below_stabilization": self.truncated_below_stabilization,
            "family": self.family,
            "k": self.k,
            "vertices": vertices,
        })
    }

    /// Graphviz rendering: one rank per level, grading labels in a column on
    /// the right.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph root {\n  rankdir=BT;\n  node [shape=box];\n");
        let levels = self.levels();
        for (level, vs) in &levels {
            let _ = write!(s, "  {{ rank=same; ");
            for v in vs {
                let _ = write!(s, "v{} [label=\"{}\"]; ", v.id, v.weight);
            }
            let _ = writeln!(
                s,
                "g{} [shape=plaintext, label=\"{}\"]; }}",
                level_tag(*level),
                fmt_q(&self.label(*level))
            );
        }
        let tags: Vec<String> = levels.keys().map(|l| format!("g{}", level_tag(*l))).collect();
        if tags.len() > 1 {
            let _ = writeln!(s, "  {} [style=invis];", tags.join(" -> "));
        }
        for v in &self.vertices {
            if let Some(p) = v.parent {
                let _ = writeln!(s, "  v{} -> v{} [arrowhead=none];", v.id, p);
            }
        }
        s.push_str("}\n");
        s
    }

    /// One line per level, top first: `label: weight | weight | ...`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (level, vs) in self.levels().iter().rev() {
            let ws: Vec<String> = vs.iter().map(|v| v.weight.to_string()).collect();
            let _ = writeln!(s, "{}: {}", fmt_q(&self.label(*level)), ws.join(" | "));
        }
        s
    }
}

fn level_tag(level: i64) -> String {
    if level < 0 {
        format!("m{}", -level)
    } else {
        level.to_string()
    }
}

/// Regrades a root. `ChiMinZero` shifts levels so the lowest is zero;
/// `HfGrading` keeps levels and switches labels to HF gradings.
pub fn normalize_root(root: &WeightedGradedRoot, mode: GradingMode) -> WeightedGradedRoot {
    let mut out = root.clone();
    match mode {
        GradingMode::ChiMinZero => {
            let shift = out.chi_min;
            for v in &mut out.vertices {
                v.level -= shift;
            }
            out.chi_min = 0;
            out.top -= shift;
            out.auto_top -= shift;
            out.stabilization_level -= shift;
        }
        GradingMode::Chi | GradingMode::HfGrading => {}
    }
    out.grading = mode;
    out
}

/// Isomorphism-invariant encoding `(level|weight|children...)` of the tree
/// hanging from the unique top vertex. Children are sorted by code, so the
/// result does not depend on vertex ids or input vertex order. With
/// `relative`, levels are measured down from the top.
pub fn canonical_code(root: &WeightedGradedRoot, relative: bool) -> Result<String> {
    let tops: Vec<&RootVertex> = root.vertices.iter().filter(|v| v.level == root.top).collect();
    if tops.len() != 1 {
        return Err(Error::NotStabilized);
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); root.vertices.len()];
    for v in &root.vertices {
        if let Some(p) = v.parent {
            children[p].push(v.id);
        }
    }
    // ids are bottom-up, so children always precede parents
    let mut codes: Vec<String> = vec![String::new(); root.vertices.len()];
    for v in &root.vertices {
        let mut kids: Vec<&str> = children[v.id].iter().map(|&c| codes[c].as_str()).collect();
        kids.sort_unstable();
        let lvl = if relative { root.top - v.level } else { v.level };
        codes[v.id] = format!("({}|{}|{})", lvl, v.weight.canonical_string(), kids.concat());
    }
    Ok(std::mem::take(&mut codes[tops[0].id]))
}

/// Rank of the module in each internal grading, and the support of `U` on
/// each vertex (its children one level down).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRanks {
    /// `(level, number of generators)`, ascending.
    pub ranks: Vec<(i64, usize)>,
    /// `(vertex id, children)`; an empty list means `U v = 0`.
    pub u_action: Vec<(usize, Vec<usize>)>,
}

pub fn module_ranks(root: &WeightedGradedRoot) -> ModuleRanks {
    let ranks = root.levels().iter().map(|(l, vs)| (*l, vs.len())).collect();
    let u_action = root.vertices.iter().map(|v| (v.id, root.children(v.id))).collect();
    ModuleRanks { ranks, u_action }
}
