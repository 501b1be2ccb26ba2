//! Admissible families `F_n : Z -> Q` and the lattice weight `F_{Gamma,k}`.
//!
//! Every family agrees on `n <= 2`, where `F_n(r)` is the coefficient of
//! `z^{-r}` in `(z - 1/z)^{2-n}`, and satisfies
//! `F_n(r+1) - F_n(r-1) = F_{n-1}(r)` for `n >= 1`.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::rational::{parse_q, q, qi, Q};

pub trait AdmissibleFamily: Send + Sync {
    fn value(&self, n: usize, r: i64) -> Result<Q>;
    fn name(&self) -> String;
    /// Whether the family is known to satisfy `F_n(-r) = (-1)^n F_n(r)`.
    fn claims_a3(&self) -> bool {
        false
    }
}

impl fmt::Debug for dyn AdmissibleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdmissibleFamily({})", self.name())
    }
}

pub type Family = Arc<dyn AdmissibleFamily>;

/// Values for `n <= 2`, shared by all admissible families.
pub fn forced(n: usize, r: i64) -> Q {
    match (n, r) {
        (0, 2) | (0, -2) => Q::one(),
        (0, 0) => qi(-2),
        (1, -1) => Q::one(),
        (1, 1) => qi(-1),
        (2, 0) => Q::one(),
        (0..=2, _) => Q::zero(),
        _ => panic!("forced value requested for n = {n}"),
    }
}

/// `C(a, b)` for `0 <= b <= a`.
fn binomial(a: i64, b: i64) -> i128 {
    debug_assert!(0 <= b && b <= a);
    let b = b.min(a - b);
    let mut acc: i128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Coefficient of `z^{-r}` in `(sum_{i>=0} z^{-(2i+1)})^{n-2}` for `n >= 3`.
fn plus_expansion(n: usize, r: i64) -> Q {
    let n = n as i64;
    if r < n - 2 || (r - n).rem_euclid(2) != 0 {
        return Q::zero();
    }
    Q::from_integer(binomial((r - (n - 2)) / 2 + n - 3, n - 3))
}

/// The averaged family `F^`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FHat;

pub fn f_hat(n: usize, r: i64) -> Q {
    if n <= 2 {
        return forced(n, r);
    }
    let ni = n as i64;
    if r.abs() < ni - 2 || (r - ni).rem_euclid(2) != 0 {
        return Q::zero();
    }
    let sign = if r < 0 && n % 2 == 1 { -1 } else { 1 };
    q(sign * binomial((ni + r.abs()) / 2 - 2, ni - 3), 2)
}

impl AdmissibleFamily for FHat {
    fn value(&self, n: usize, r: i64) -> Result<Q> {
        Ok(f_hat(n, r))
    }
    fn name(&self) -> String {
        "fhat".into()
    }
    fn claims_a3(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expansion {
    /// `|z| > 1`.
    Plus,
    /// `|z| < 1`.
    Minus,
}

/// The families `F^+` and `F^-` read off a single Laurent expansion.
#[derive(Debug, Clone, Copy)]
pub struct FHatPm(pub Expansion);

pub fn f_hat_pm(sign: Expansion, n: usize, r: i64) -> Q {
    if n <= 2 {
        return forced(n, r);
    }
    match sign {
        Expansion::Plus => plus_expansion(n, r),
        Expansion::Minus => {
            let v = plus_expansion(n, -r);
            if n % 2 == 1 {
                -v
            } else {
                v
            }
        }
    }
}

impl AdmissibleFamily for FHatPm {
    fn value(&self, n: usize, r: i64) -> Result<Q> {
        Ok(f_hat_pm(self.0, n, r))
    }
    fn name(&self) -> String {
        match self.0 {
            Expansion::Plus => "fhat+".into(),
            Expansion::Minus => "fhat-".into(),
        }
    }
}

/// One memoised row `F_n(r)` for `r` in `[-radius, radius]`.
#[derive(Debug, Clone)]
struct Row {
    radius: i64,
    values: Vec<Q>,
}

impl Row {
    fn get(&self, r: i64) -> Q {
        self.values[(r + self.radius) as usize]
    }
}

/// The unique admissible family with `F_{n+2}(0) = a_n`, `F_{n+2}(1) = b_n`.
///
/// Rows are filled outwards from `r in {0, 1}` by the recursion and cached
/// at a common radius; a request beyond it rebuilds every cached row.
#[derive(Debug)]
pub struct SeedFamily {
    seeds: Vec<(Q, Q)>,
    rows: Mutex<Vec<Row>>,
}

impl SeedFamily {
    pub fn new(seeds: Vec<(Q, Q)>) -> Self {
        SeedFamily {
            seeds,
            rows: Mutex::new(Vec::new()),
        }
    }

    /// Parses a JSON list of `[a_n, b_n]` pairs given as `"p/q"` strings or
    /// integers.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        let bad = || Error::MalformedInput("seeds must be a list of [a, b] pairs".into());
        let entry = |x: &Value| match x {
            Value::String(s) => parse_q(s),
            Value::Number(n) => n
                .as_i64()
                .map(qi)
                .ok_or_else(|| Error::MalformedInput(format!("seed {n} is not an integer"))),
            _ => Err(bad()),
        };
        let seeds = v
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|pair| match pair.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok((entry(a)?, entry(b)?)),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeedFamily::new(seeds))
    }

    /// Seeds `(F_{n+2}(0), F_{n+2}(1))` for `n = 1..=count` of any family.
    pub fn seeds_of(f: &dyn AdmissibleFamily, count: usize) -> Result<Vec<(Q, Q)>> {
        (1..=count)
            .map(|n| Ok((f.value(n + 2, 0)?, f.value(n + 2, 1)?)))
            .collect()
    }

    pub fn seeds(&self) -> &[(Q, Q)] {
        &self.seeds
    }

    fn build_row(&self, n: usize, radius: i64, below: Option<&Row>) -> Row {
        let width = (2 * radius + 1) as usize;
        let mut values = vec![Q::zero(); width];
        let idx = |r: i64| (r + radius) as usize;
        if n <= 2 {
            for r in -radius..=radius {
                values[idx(r)] = forced(n, r);
            }
            return Row { radius, values };
        }
        let below = below.expect("row n-1 present");
        let (a, b) = self.seeds[n - 3];
        values[idx(0)] = a;
        if radius >= 1 {
            values[idx(1)] = b;
        }
        // F(r+1) = F(r-1) + F_{n-1}(r)
        for r in 1..radius {
            values[idx(r + 1)] = values[idx(r - 1)] + below.get(r);
        }
        // F(r-1) = F(r+1) - F_{n-1}(r)
        for r in (-radius + 1..=0).rev() {
            values[idx(r - 1)] = values[idx(r + 1)] - below.get(r);
        }
        Row { radius, values }
    }
}

impl AdmissibleFamily for SeedFamily {
    fn value(&self, n: usize, r: i64) -> Result<Q> {
        if n <= 2 {
            return Ok(forced(n, r));
        }
        if n - 2 > self.seeds.len() {
            return Err(Error::SeedsExhausted {
                needed: n,
                available: self.seeds.len() + 2,
            });
        }
        let need = r.abs().max(1);
        let mut rows = self.rows.lock().unwrap_or_else(|e| e.into_inner());
        let radius = rows.first().map_or(0, |row| row.radius);
        if radius < need {
            // all cached rows share one radius; grow geometrically
            let radius = need.max(2 * radius).max(16);
            let depth = rows.len().max(n + 1);
            rows.clear();
            for i in 0..depth {
                let row = self.build_row(i, radius, rows.last());
                rows.push(row);
            }
        }
        while rows.len() <= n {
            let row = self.build_row(rows.len(), rows[0].radius, rows.last());
            rows.push(row);
        }
        Ok(rows[n].get(r))
    }

    fn name(&self) -> String {
        format!("seeds[{}]", self.seeds.len())
    }
}

/// Pointwise average of finitely many families.
pub struct AveragedFamily {
    members: Vec<Family>,
}

impl AveragedFamily {
    pub fn new(members: Vec<Family>) -> Self {
        assert!(!members.is_empty(), "average of no families");
        AveragedFamily { members }
    }
}

impl AdmissibleFamily for AveragedFamily {
    fn value(&self, n: usize, r: i64) -> Result<Q> {
        let mut acc = Q::zero();
        for f in &self.members {
            acc += f.value(n, r)?;
        }
        Ok(acc / Q::from_integer(self.members.len() as i128))
    }
    fn name(&self) -> String {
        let names: Vec<String> = self.members.iter().map(|f| f.name()).collect();
        format!("average({})", names.join(","))
    }
    fn claims_a3(&self) -> bool {
        self.members.iter().all(|f| f.claims_a3())
    }
}

/// A family with one value overridden; used to exercise the checkers.
pub struct Perturbed {
    pub base: Family,
    pub n: usize,
    pub r: i64,
    pub delta: Q,
}

impl AdmissibleFamily for Perturbed {
    fn value(&self, n: usize, r: i64) -> Result<Q> {
        let v = self.base.value(n, r)?;
        Ok(if (n, r) == (self.n, self.r) { v + self.delta } else { v })
    }
    fn name(&self) -> String {
        format!("{}~({},{})", self.base.name(), self.n, self.r)
    }
}

/// Which axiom failed, and where.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    A1,
    A2,
    A3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub n: usize,
    pub r: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} fails at n = {}, r = {}", self.axiom, self.n, self.r)
    }
}

/// (A1) and (A2) on `1 <= n <= n_max`, `|r| <= r_max`. `Ok(None)` means the
/// window passes.
pub fn check_admissible(
    f: &dyn AdmissibleFamily,
    n_max: usize,
    r_max: i64,
) -> Result<Option<Violation>> {
    for r in -r_max..=r_max {
        let want = if r == 0 { Q::one() } else { Q::zero() };
        if f.value(2, r)? != want {
            return Ok(Some(Violation { axiom: Axiom::A1, n: 2, r }));
        }
    }
    for n in 1..=n_max {
        for r in -r_max..=r_max {
            if f.value(n, r + 1)? - f.value(n, r - 1)? != f.value(n - 1, r)? {
                return Ok(Some(Violation { axiom: Axiom::A2, n, r }));
            }
        }
    }
    Ok(None)
}

/// `F_n(-r) = (-1)^n F_n(r)` on `0 <= n <= n_max`, `0 < r <= r_max`.
pub fn check_a3(f: &dyn AdmissibleFamily, n_max: usize, r_max: i64) -> Result<Option<Violation>> {
    for n in 0..=n_max {
        for r in 1..=r_max {
            let lhs = f.value(n, -r)?;
            let rhs = f.value(n, r)?;
            let rhs = if n % 2 == 1 { -rhs } else { rhs };
            if lhs != rhs {
                return Ok(Some(Violation { axiom: Axiom::A3, n, r }));
            }
        }
    }
    Ok(None)
}

/// `prod_v F_{delta_v}((2Mx + a)_v)` with `a = k - Mu`.
pub fn f_gamma_a(
    m: &IntMatrix,
    degrees: &[i64],
    a: &[i64],
    f: &dyn AdmissibleFamily,
    x: &[i64],
) -> Result<Q> {
    let mut acc = Q::one();
    for (v, row) in m.iter().enumerate() {
        let mx: i64 = row.iter().zip(x).map(|(p, q)| p * q).sum();
        let val = f.value(degrees[v] as usize, 2 * mx + a[v])?;
        if val.is_zero() {
            return Ok(Q::zero());
        }
        acc *= val;
    }
    Ok(acc)
}

/// `F_{Gamma,k}(x)` for a characteristic `k`.
pub fn f_gamma_k(
    p: &crate::Plumbing,
    f: &dyn AdmissibleFamily,
    k: &[i64],
    x: &[i64],
) -> Result<Q> {
    let a = crate::spinc::k_to_a(p, k)?;
    if x.len() != p.len() {
        return Err(Error::MalformedInput(format!(
            "lattice point has length {}, expected {}",
            x.len(),
            p.len()
        )));
    }
    f_gamma_a(p.intersection_matrix().entries(), &p.degrees(), &a, f, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Plumbing;
    use std::collections::BTreeMap;

    /// Coefficients of `(z - 1/z)^{2-n}` in one regime, truncated to
    /// exponents in `[-span, span]`, by repeated series multiplication.
    fn expansion(n: usize, plus: bool, span: i64) -> BTreeMap<i64, Q> {
        let mut acc: BTreeMap<i64, Q> = BTreeMap::from([(0, Q::one())]);
        let (factor, times): (BTreeMap<i64, Q>, usize) = if n <= 2 {
            (BTreeMap::from([(1, Q::one()), (-1, qi(-1))]), 2 - n)
        } else if plus {
            ((0..=span).map(|i| (-(2 * i + 1), Q::one())).collect(), n - 2)
        } else {
            ((0..=span).map(|i| (2 * i + 1, qi(-1))).collect(), n - 2)
        };
        for _ in 0..times {
            let mut next = BTreeMap::new();
            for (e1, c1) in &acc {
                for (e2, c2) in &factor {
                    let e = e1 + e2;
                    if e.abs() <= span {
                        *next.entry(e).or_insert(Q::zero()) += c1 * c2;
                    }
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn closed_forms_match_series_oracle() {
        for n in 0..=8 {
            let plus = expansion(n, true, 40);
            let minus = expansion(n, false, 40);
            for r in -30i64..=30 {
                let p = plus.get(&-r).copied().unwrap_or_default();
                let m = minus.get(&-r).copied().unwrap_or_default();
                assert_eq!(f_hat_pm(Expansion::Plus, n, r), p, "n={n} r={r}");
                assert_eq!(f_hat_pm(Expansion::Minus, n, r), m, "n={n} r={r}");
                assert_eq!(f_hat(n, r), (p + m) / qi(2), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn f_hat_examples() {
        assert_eq!(f_hat(2, 0), qi(1));
        assert_eq!(f_hat(2, 5), qi(0));
        assert_eq!(f_hat(1, -1), qi(1));
        assert_eq!(f_hat(0, 0), qi(-2));
        assert_eq!(f_hat(3, 1), q(1, 2));
        assert_eq!(f_hat(3, -1), q(-1, 2));
        assert_eq!(f_hat(4, 2), q(1, 2));
        assert_eq!(f_hat(4, 0), qi(0));
        assert_eq!(f_hat_pm(Expansion::Plus, 3, 1), qi(1));
        for r in 0..20 {
            assert_eq!(f_hat_pm(Expansion::Minus, 3, r), qi(0));
        }
    }

    #[test]
    fn admissibility_windows() {
        assert_eq!(check_admissible(&FHat, 10, 50).unwrap(), None);
        assert_eq!(check_admissible(&FHatPm(Expansion::Plus), 10, 50).unwrap(), None);
        assert_eq!(check_admissible(&FHatPm(Expansion::Minus), 10, 50).unwrap(), None);
        assert_eq!(check_a3(&FHat, 10, 50).unwrap(), None);
        assert!(check_a3(&FHatPm(Expansion::Plus), 10, 50).unwrap().is_some());
        assert!(check_a3(&FHatPm(Expansion::Minus), 10, 50).unwrap().is_some());
        let broken = Perturbed {
            base: Arc::new(FHat),
            n: 3,
            r: 0,
            delta: qi(1),
        };
        let v = check_admissible(&broken, 10, 50).unwrap().unwrap();
        assert_eq!(v.axiom, Axiom::A2);
        assert!(v.n == 3 || v.n == 4);
    }

    #[test]
    fn seeds_reproduce_f_hat() {
        let seeds = SeedFamily::seeds_of(&FHat, 8).unwrap();
        let fam = SeedFamily::new(seeds);
        for n in 0..=10 {
            for r in -40..=40 {
                assert_eq!(fam.value(n, r).unwrap(), f_hat(n, r), "n={n} r={r}");
            }
        }
        assert!(matches!(
            fam.value(11, 0),
            Err(Error::SeedsExhausted { needed: 11, available: 10 })
        ));
        // far requests after near ones rebuild consistently
        assert_eq!(fam.value(5, 201).unwrap(), f_hat(5, 201));
        assert_eq!(fam.value(4, -300).unwrap(), f_hat(4, -300));
    }

    #[test]
    fn zero_seeds_window() {
        let fam = SeedFamily::new(vec![(qi(0), qi(0))]);
        // brute recursion from F_2 = delta_0 and F_3(0) = F_3(1) = 0
        let mut want = BTreeMap::new();
        want.insert(0i64, qi(0));
        want.insert(1i64, qi(0));
        for r in 1..12 {
            let v = want[&(r - 1)] + forced(2, r);
            want.insert(r + 1, v);
        }
        for r in (-11..=0).rev() {
            let v = want[&(r + 1)] - forced(2, r);
            want.insert(r - 1, v);
        }
        for r in -10..=10 {
            assert_eq!(fam.value(3, r).unwrap(), want[&r]);
        }
        assert_eq!(fam.value(3, -1).unwrap(), qi(-1));
        assert_eq!(check_admissible(&fam, 3, 30).unwrap(), None);
    }

    #[test]
    fn seeds_json() {
        let fam = SeedFamily::from_json(r#"[["0","1/2"],[ "1/2", 0 ]]"#).unwrap();
        assert_eq!(fam.seeds(), &[(qi(0), q(1, 2)), (q(1, 2), qi(0))]);
        assert!(SeedFamily::from_json("[[1]]").is_err());
        assert!(SeedFamily::from_json("{").is_err());
    }

    #[test]
    fn lattice_weight_examples() {
        let g2 = Plumbing::new(vec![-1, -2], vec![(0, 1)]).unwrap();
        let k = [-1, 0];
        let mut nonzero = Vec::new();
        for x in -6..=6 {
            for y in -6..=6 {
                let v = f_gamma_k(&g2, &FHat, &k, &[x, y]).unwrap();
                if !v.is_zero() {
                    nonzero.push(((x, y), v));
                }
            }
        }
        nonzero.sort();
        assert_eq!(
            nonzero,
            vec![((-2, -1), qi(1)), ((-1, 0), qi(-1)), ((0, 0), qi(-1)), ((1, 1), qi(1))]
        );
        let g1 = Plumbing::new(vec![-1], vec![]).unwrap();
        let vals: Vec<_> = (-5..=5)
            .map(|x| f_gamma_k(&g1, &FHat, &[-1], &[x]).unwrap())
            .collect();
        let mut want = vec![qi(0); 11];
        want[4] = qi(1);
        want[5] = qi(-2);
        want[6] = qi(1);
        assert_eq!(vals, want);
    }
}
