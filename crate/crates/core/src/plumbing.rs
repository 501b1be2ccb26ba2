//! Plumbing trees, their intersection form, and Neumann moves.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, RatMatrix};

/// A weighted tree on vertices `0..s`.
///
/// Edges are stored normalised (`i < j`) and sorted, so two plumbings with the
/// same vertex order compare equal regardless of how their edges were listed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plumbing {
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct PlumbingFile {
    weights: Vec<i64>,
    edges: Vec<[usize; 2]>,
}

impl Plumbing {
    pub fn new(weights: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let s = weights.len();
        if s == 0 {
            return Err(Error::MalformedInput("plumbing has no vertices".into()));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in &edges {
            for v in [a, b] {
                if v >= s {
                    return Err(Error::BadIndex { index: v, len: s });
                }
            }
            if a == b {
                return Err(Error::NotATree(format!("self-loop at vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::NotATree(format!("repeated edge {a}-{b}")));
            }
        }
        if set.len() != s - 1 {
            return Err(Error::NotATree(format!(
                "{} edges on {} vertices",
                set.len(),
                s
            )));
        }
        let p = Plumbing {
            weights,
            edges: set.into_iter().collect(),
        };
        if !p.is_connected() {
            return Err(Error::NotATree("graph is disconnected".into()));
        }
        Ok(p)
    }

    /// Parses the JSON file format `{"weights": [..], "edges": [[i, j], ..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: PlumbingFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Plumbing::new(f.weights, f.edges.into_iter().map(|[a, b]| (a, b)).collect())
    }

    pub fn to_json(&self) -> String {
        let f = PlumbingFile {
            weights: self.weights.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&f).expect("plumbing serialises")
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d = vec![0; self.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        let s = self.len();
        let mut m = vec![vec![0i64; s]; s];
        for (i, &w) in self.weights.iter().enumerate() {
            m[i][i] = w;
        }
        for &(a, b) in &self.edges {
            m[a][b] = 1;
            m[b][a] = 1;
        }
        IntersectionMatrix::from_matrix(m)
    }

    /// Relabels vertices: vertex `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Plumbing> {
        let mut w = vec![0; self.len()];
        for (i, &p) in perm.iter().enumerate() {
            w[p] = self.weights[i];
        }
        Plumbing::new(
            w,
            self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect(),
        )
    }

    pub fn apply_move(&self, mv: &NeumannMove) -> Result<(Plumbing, IndexMap)> {
        let s = self.len();
        let check = |v: usize| {
            if v >= s {
                Err(Error::BadIndex { index: v, len: s })
            } else {
                Ok(())
            }
        };
        match *mv {
            NeumannMove::ABlowup { edge: (i, j) } => {
                check(i)?;
                check(j)?;
                if !self.has_edge(i, j) {
                    return Err(Error::MoveNotApplicable(format!("{i}-{j} is not an edge")));
                }
                let mut w = Vec::with_capacity(s + 1);
                w.push(-1);
                w.extend(self.weights.iter().enumerate().map(|(v, &m)| {
                    if v == i || v == j {
                        m - 1
                    } else {
                        m
                    }
                }));
                let mut e: Vec<_> = self
                    .edges
                    .iter()
                    .filter(|&&(a, b)| (a.min(b), a.max(b)) != (i.min(j), i.max(j)))
                    .map(|&(a, b)| (a + 1, b + 1))
                    .collect();
                e.push((0, i + 1));
                e.push((0, j + 1));
                Ok((Plumbing::new(w, e)?, IndexMap::shift_up(s)))
            }
            NeumannMove::BBlowup { vertex: i } => {
                check(i)?;
                let mut w = Vec::with_capacity(s + 1);
                w.push(-1);
                w.extend(
                    self.weights
                        .iter()
                        .enumerate()
                        .map(|(v, &m)| if v == i { m - 1 } else { m }),
                );
                let mut e: Vec<_> = self.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
                e.push((0, i + 1));
                Ok((Plumbing::new(w, e)?, IndexMap::shift_up(s)))
            }
            NeumannMove::ABlowdown { vertex: v } => {
                check(v)?;
                let nb = self.neighbors(v);
                if self.weights[v] != -1 || nb.len() != 2 {
                    return Err(Error::MoveNotApplicable(format!(
                        "type (a) blow-down needs a -1 vertex of degree 2, vertex {v} has weight {} and degree {}",
                        self.weights[v],
                        nb.len()
                    )));
                }
                let map = IndexMap::remove(s, v);
                let w: Vec<i64> = (0..s)
                    .filter(|&x| x != v)
                    .map(|x| self.weights[x] + i64::from(nb.contains(&x)))
                    .collect();
                let mut e: Vec<_> = self
                    .edges
                    .iter()
                    .filter(|&&(a, b)| a != v && b != v)
                    .map(|&(a, b)| (map.get(a).unwrap(), map.get(b).unwrap()))
                    .collect();
                e.push((map.get(nb[0]).unwrap(), map.get(nb[1]).unwrap()));
                Ok((Plumbing::new(w, e)?, map))
            }
            NeumannMove::BBlowdown { vertex: v } => {
                check(v)?;
                let nb = self.neighbors(v);
                if self.weights[v] != -1 || nb.len() != 1 {
                    return Err(Error::MoveNotApplicable(format!(
                        "type (b) blow-down needs a -1 leaf, vertex {v} has weight {} and degree {}",
                        self.weights[v],
                        nb.len()
                    )));
                }
                let map = IndexMap::remove(s, v);
                let w: Vec<i64> = (0..s)
                    .filter(|&x| x != v)
                    .map(|x| self.weights[x] + i64::from(x == nb[0]))
                    .collect();
                let e: Vec<_> = self
                    .edges
                    .iter()
                    .filter(|&&(a, b)| a != v && b != v)
                    .map(|&(a, b)| (map.get(a).unwrap(), map.get(b).unwrap()))
                    .collect();
                Ok((Plumbing::new(w, e)?, map))
            }
        }
    }

    /// Moves applicable to this plumbing: every blow-up and every legal
    /// blow-down.
    pub fn applicable_moves(&self) -> Vec<NeumannMove> {
        let mut out: Vec<NeumannMove> = self
            .edges
            .iter()
            .map(|&e| NeumannMove::ABlowup { edge: e })
            .collect();
        out.extend((0..self.len()).map(|v| NeumannMove::BBlowup { vertex: v }));
        let deg = self.degrees();
        for (v, (&w, &d)) in self.weights.iter().zip(&deg).enumerate() {
            if w == -1 {
                match d {
                    2 => out.push(NeumannMove::ABlowdown { vertex: v }),
                    1 => out.push(NeumannMove::BBlowdown { vertex: v }),
                    _ => {}
                }
            }
        }
        out
    }

    /// Plain-text echo: one `w(i): m_i` line per vertex, one `e: i-j` per edge.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Plumbing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.weights.iter().enumerate() {
            writeln!(f, "w({i}): {w}")?;
        }
        for (a, b) in &self.edges {
            writeln!(f, "e: {a}-{b}")?;
        }
        Ok(())
    }
}

/// Symmetric intersection form with cached exact determinant and inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionMatrix {
    m: IntMatrix,
    det: i128,
    inverse: Option<RatMatrix>,
}

impl IntersectionMatrix {
    pub fn from_matrix(m: IntMatrix) -> Self {
        let det = linalg::determinant(&m);
        let inverse = if det != 0 { linalg::inverse(&m) } else { None };
        IntersectionMatrix { m, det, inverse }
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.m
    }

    pub fn size(&self) -> usize {
        self.m.len()
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    pub fn inverse(&self) -> Option<&RatMatrix> {
        self.inverse.as_ref()
    }

    /// Sylvester's criterion on `-M` over exact integers.
    pub fn is_negative_definite(&self) -> bool {
        let neg: IntMatrix = self
            .m
            .iter()
            .map(|r| r.iter().map(|x| -x).collect())
            .collect();
        let minors = linalg::leading_minors(&neg);
        minors.len() == self.m.len() && minors.iter().all(|&d| d > 0)
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        linalg::mat_vec(&self.m, x)
    }

    /// `<x, y> = x^t M y`.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> i64 {
        linalg::dot(x, &self.mul_vec(y))
    }
}

/// Old-to-new vertex index correspondence produced by a move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap(Vec<Option<usize>>);

impl IndexMap {
    fn shift_up(s: usize) -> Self {
        IndexMap((0..s).map(|i| Some(i + 1)).collect())
    }

    fn remove(s: usize, v: usize) -> Self {
        IndexMap(
            (0..s)
                .map(|i| match i.cmp(&v) {
                    std::cmp::Ordering::Less => Some(i),
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Greater => Some(i - 1),
                })
                .collect(),
        )
    }

    pub fn get(&self, old: usize) -> Option<usize> {
        self.0.get(old).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.0
    }
}

/// The two kinds of Neumann blow-up and their inverses. A freshly created
/// vertex always lands at index 0, shifting every old index up by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeumannMove {
    /// Insert a -1 vertex in the middle of an edge.
    ABlowup { edge: (usize, usize) },
    /// Attach a -1 leaf to a vertex.
    BBlowup { vertex: usize },
    /// Remove a -1 vertex of degree 2, joining its neighbours.
    ABlowdown { vertex: usize },
    /// Remove a -1 leaf.
    BBlowdown { vertex: usize },
}

impl NeumannMove {
    pub fn is_blowup(&self) -> bool {
        matches!(self, NeumannMove::ABlowup { .. } | NeumannMove::BBlowup { .. })
    }
}

impl fmt::Display for NeumannMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeumannMove::ABlowup { edge: (a, b) } => write!(f, "A+({a}-{b})"),
            NeumannMove::BBlowup { vertex } => write!(f, "B+({vertex})"),
            NeumannMove::ABlowdown { vertex } => write!(f, "A-({vertex})"),
            NeumannMove::BBlowdown { vertex } => write!(f, "B-({vertex})"),
        }
    }
}

/// Attempts per call of [`random_plumbing`] before giving up.
pub const GENERATION_RETRIES: usize = 10_000;
/// Weights are drawn uniformly from `WEIGHT_RANGE`.
pub const WEIGHT_RANGE: std::ops::RangeInclusive<i64> = -12..=-1;

/// Deterministic random negative definite tree with at most `s_max` vertices.
///
/// The shape is a random recursive tree (vertex `i` attaches to a uniform
/// earlier vertex); weights are resampled until the form is negative definite.
pub fn random_plumbing(seed: u64, s_max: usize) -> Result<Plumbing> {
    assert!(s_max >= 1, "s_max must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_plumbing_with(&mut rng, s_max)
}

pub fn random_plumbing_with<R: Rng>(rng: &mut R, s_max: usize) -> Result<Plumbing> {
    let s = rng.gen_range(1..=s_max);
    let edges: Vec<(usize, usize)> = (1..s).map(|i| (rng.gen_range(0..i), i)).collect();
    for _ in 0..GENERATION_RETRIES {
        let w: Vec<i64> = (0..s).map(|_| rng.gen_range(WEIGHT_RANGE)).collect();
        let p = Plumbing::new(w, edges.clone())?;
        if p.intersection_matrix().is_negative_definite() {
            return Ok(p);
        }
    }
    Err(Error::GenerationFailed(GENERATION_RETRIES))
}
