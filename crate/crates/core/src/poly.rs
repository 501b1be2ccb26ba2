//! Exact two-variable Laurent polynomials and truncated series in `q`, `t`.
//!
//! `q`-exponents are rationals, `t`-exponents integers. Zero coefficients
//! are never stored, so structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::rational::{fmt_q, Q};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoVarPoly {
    terms: BTreeMap<(Q, i64), Q>,
}

impl TwoVarPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(c: Q, q_exp: Q, t_exp: i64) -> Self {
        let mut p = Self::new();
        p.add_term(q_exp, t_exp, c);
        p
    }

    pub fn add_term(&mut self, q_exp: Q, t_exp: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((q_exp, t_exp)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(q_exp, t_exp));
        }
    }

    pub fn add_assign(&mut self, other: &TwoVarPoly) {
        for (&(qe, te), &c) in &other.terms {
            self.add_term(qe, te, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by `(q_exp, t_exp)`.
    pub fn terms(&self) -> impl Iterator<Item = (Q, i64, Q)> + '_ {
        self.terms.iter().map(|(&(qe, te), &c)| (qe, te, c))
    }

    pub fn coeff(&self, q_exp: Q, t_exp: i64) -> Q {
        self.terms.get(&(q_exp, t_exp)).copied().unwrap_or_else(Q::zero)
    }

    /// `t -> t^{-1}`.
    pub fn invert_t(&self) -> Self {
        TwoVarPoly {
            terms: self.terms.iter().map(|(&(qe, te), &c)| ((qe, -te), c)).collect(),
        }
    }

    /// Terms with `q_exp <= cutoff`.
    pub fn truncated(&self, cutoff: Q) -> Self {
        TwoVarPoly {
            terms: self
                .terms
                .iter()
                .filter(|((qe, _), _)| *qe <= cutoff)
                .map(|(&k, &c)| (k, c))
                .collect(),
        }
    }

    /// Substitutes `t = 1`.
    pub fn at_t1(&self) -> BTreeMap<Q, Q> {
        let mut out: BTreeMap<Q, Q> = BTreeMap::new();
        for (&(qe, _), &c) in &self.terms {
            *out.entry(qe).or_insert_with(Q::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Substitutes `q = t = 1`.
    pub fn at_one(&self) -> Q {
        self.terms.values().copied().sum()
    }

    /// Stable serialisation used inside canonical codes.
    pub fn canonical_string(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(qe, te), c)| format!("{}:{}:{}", fmt_q(&qe), te, fmt_q(c)))
            .collect();
        format!("[{}]", parts.join(";"))
    }

    /// `[[q_exp, t_exp, coef], ...]` with rationals as strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&(qe, te), c)| json!([fmt_q(&qe), te, fmt_q(c)]))
                .collect(),
        )
    }
}

fn fmt_exp(e: &Q) -> String {
    if e.is_integer() && !e.is_negative() {
        fmt_q(e)
    } else {
        format!("({})", fmt_q(e))
    }
}

/// Human-readable rendering grouped by `q`-power, e.g.
/// `-2 q^(-1/2) + (t + t^-1) q^(1/2)`.
impl fmt::Display for TwoVarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut groups: BTreeMap<Q, Vec<(i64, Q)>> = BTreeMap::new();
        for (&(qe, te), &c) in &self.terms {
            groups.entry(qe).or_default().push((te, c));
        }
        let mut first = true;
        for (qe, ts) in groups {
            let tpart = |te: i64| match te {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{te}"),
            };
            let qpart = format!("q^{}", fmt_exp(&qe));
            if ts.len() == 1 {
                let (te, c) = ts[0];
                let neg = c.is_negative();
                let mag = c.abs();
                if !first {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                } else if neg {
                    write!(f, "-")?;
                }
                let mut factors = Vec::new();
                if !mag.is_one() {
                    factors.push(fmt_q(&mag));
                }
                let t = tpart(te);
                if !t.is_empty() {
                    factors.push(t);
                }
                factors.push(qpart);
                write!(f, "{}", factors.join(" "))?;
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                let inner: Vec<String> = ts
                    .iter()
                    .map(|&(te, c)| {
                        let t = tpart(te);
                        match (c.is_one(), t.is_empty()) {
                            (true, true) => "1".into(),
                            (true, false) => t,
                            (false, true) => fmt_q(&c),
                            (false, false) => format!("{} {}", fmt_q(&c), t),
                        }
                    })
                    .collect();
                write!(f, "({}) {}", inner.join(" + "), qpart)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// A truncated series in `q` and `t`: every term with
/// `q_exp <= delta + order` is present and final.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoVarSeries {
    pub delta: Q,
    pub order: Q,
    pub terms: TwoVarPoly,
}

impl TwoVarSeries {
    /// Absolute `q`-exponent up to which the series is complete.
    pub fn cutoff(&self) -> Q {
        self.delta + self.order
    }

    /// Equality of both series below the smaller of the two cutoffs.
    pub fn agrees_with(&self, other: &TwoVarSeries) -> bool {
        let c = self.cutoff().min(other.cutoff());
        self.terms.truncated(c) == other.terms.truncated(c)
    }

    pub fn invert_t(&self) -> Self {
        TwoVarSeries {
            delta: self.delta,
            order: self.order,
            terms: self.terms.invert_t(),
        }
    }

    pub fn specialize_t1(&self) -> QSeries {
        QSeries {
            delta: self.delta,
            order: self.order,
            terms: self.terms.at_t1(),
        }
    }

    /// `[{"q": .., "t": .., "c": ..}, ...]` sorted by `(q, t)`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .terms()
                .map(|(qe, te, c)| json!({"q": fmt_q(&qe), "t": te, "c": fmt_q(&c)}))
                .collect(),
        )
    }
}

impl fmt::Display for TwoVarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(q^{})", self.terms, fmt_exp(&self.cutoff()))
    }
}

/// A truncated series in `q` alone, complete through `delta + order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    pub delta: Q,
    pub order: Q,
    pub terms: BTreeMap<Q, Q>,
}

impl QSeries {
    pub fn cutoff(&self) -> Q {
        self.delta + self.order
    }

    pub fn truncated(&self, cutoff: Q) -> BTreeMap<Q, Q> {
        self.terms
            .iter()
            .filter(|(e, _)| **e <= cutoff)
            .map(|(&e, &c)| (e, c))
            .collect()
    }

    pub fn agrees_with(&self, other: &QSeries) -> bool {
        let c = self.cutoff().min(other.cutoff());
        self.truncated(c) == other.truncated(c)
    }

    pub fn coeff(&self, e: Q) -> Q {
        self.terms.get(&e).copied().unwrap_or_else(Q::zero)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"q": fmt_q(e), "c": fmt_q(c)}))
                .collect(),
        )
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = TwoVarPoly::new();
        for (&e, &c) in &self.terms {
            p.add_term(e, 0, c);
        }
        write!(f, "{} + O(q^{})", p, fmt_exp(&self.cutoff()))
    }
}
