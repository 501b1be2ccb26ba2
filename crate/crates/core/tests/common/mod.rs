#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;

use plumbroot::plumbing::Plumbing;
use plumbroot::poly::TwoVarPoly;
use plumbroot::rational::{q, qi, Q};

pub fn example_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

pub fn example(name: &str) -> Plumbing {
    let text = std::fs::read_to_string(example_path(name)).expect("example file");
    Plumbing::from_json(&text).expect("example parses")
}

pub fn s3_one() -> Plumbing {
    example("s3_one_vertex.json")
}

pub fn s3_two() -> Plumbing {
    example("s3_two_vertex.json")
}

pub fn sigma_2_7_15() -> Plumbing {
    example("brieskorn_2_7_15.json")
}

pub fn gamma_x() -> Plumbing {
    example("gamma_x.json")
}

pub fn lens(p: i64) -> Plumbing {
    Plumbing::new(vec![-p], vec![]).expect("single vertex")
}

pub fn half() -> Q {
    q(1, 2)
}

/// Sum of `c q^e t^t` terms.
pub fn poly(terms: &[(Q, Q, i64)]) -> TwoVarPoly {
    let mut p = TwoVarPoly::new();
    for &(c, e, t) in terms {
        p.add_term(e, t, c);
    }
    p
}

/// `1/2 (t + 1/t) q^e`.
pub fn sym_half(e: Q) -> Vec<(Q, Q, i64)> {
    vec![(half(), e, 1), (half(), e, -1)]
}

pub fn s3_series() -> TwoVarPoly {
    poly(&[(qi(-2), q(-1, 2), 0), (qi(1), q(1, 2), 1), (qi(1), q(1, 2), -1)])
}

/// `chi_k(x)` written out directly from the form, for oracles.
pub fn chi_direct(p: &Plumbing, k: &[i64], x: &[i64]) -> i64 {
    let m = p.intersection_matrix();
    let m = m.entries();
    let mut quad = 0i64;
    for i in 0..x.len() {
        for j in 0..x.len() {
            quad += x[i] * m[i][j] * x[j];
        }
    }
    let lin: i64 = k.iter().zip(x).map(|(a, b)| a * b).sum();
    let twice = -(lin + quad);
    assert_eq!(twice % 2, 0, "k is characteristic");
    twice / 2
}

/// Box half-width that contains `{chi_k <= j}`, from
/// `|x_i - c_i|^2 <= (A^{-1})_ii (2j + c^t A c)` with `A = -M`, `c = A^{-1} k / 2`.
pub fn box_radius(p: &Plumbing, k: &[i64], j: i64) -> i64 {
    let m = p.intersection_matrix();
    let inv = m.inverse().expect("definite");
    let s = p.len();
    let to_f = |v: &Q| *v.numer() as f64 / *v.denom() as f64;
    // A^{-1} = -M^{-1}
    let ainv: Vec<Vec<f64>> = (0..s).map(|i| (0..s).map(|j| -to_f(&inv[i][j])).collect()).collect();
    let c: Vec<f64> = (0..s)
        .map(|i| (0..s).map(|j| ainv[i][j] * k[j] as f64).sum::<f64>() / 2.0)
        .collect();
    let a = m.entries();
    let cac: f64 = (0..s)
        .flat_map(|i| (0..s).map(move |j| (i, j)))
        .map(|(i, j)| -(a[i][j] as f64) * c[i] * c[j])
        .sum();
    let budget = (2 * j) as f64 + cac;
    if budget < 0.0 {
        return 0;
    }
    (0..s)
        .map(|i| (c[i].abs() + (ainv[i][i] * budget).sqrt()).ceil() as i64 + 2)
        .max()
        .unwrap_or(0)
}

/// Components of `{chi_k <= j}` by scanning a box and flooding along `+-e_i`.
/// Same ordering convention as the library: each sorted, ordered by least member.
pub fn box_components(p: &Plumbing, k: &[i64], j: i64) -> Vec<Vec<Vec<i64>>> {
    let s = p.len();
    let r = box_radius(p, k, j);
    let mut pts: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..s {
        pts = pts
            .into_iter()
            .flat_map(|x| {
                (-r..=r).map(move |v| {
                    let mut y = x.clone();
                    y.push(v);
                    y
                })
            })
            .collect();
    }
    let inside: HashSet<Vec<i64>> = pts.into_iter().filter(|x| chi_direct(p, k, x) <= j).collect();
    for x in &inside {
        assert!(x.iter().all(|v| v.abs() < r), "scan box too small at {x:?}");
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut comps = Vec::new();
    let ordered: BTreeSet<&Vec<i64>> = inside.iter().collect();
    for start in ordered {
        if seen.contains(start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(x) = queue.pop_front() {
            for i in 0..s {
                for d in [-1, 1] {
                    let mut y = x.clone();
                    y[i] += d;
                    if inside.contains(&y) && seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
            comp.push(x);
        }
        comp.sort();
        comps.push(comp);
    }
    comps.sort();
    comps
}
