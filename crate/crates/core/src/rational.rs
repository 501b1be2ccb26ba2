//! Exact rational scalars and their string form.
//!
//! All coefficients and exponents in the crate are `Ratio<i128>`. Overflow
//! checks are enabled in every build profile, so an out-of-range intermediate
//! aborts instead of producing a wrong answer.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n as i128)
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or a plain integer with surrounding whitespace.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::MalformedInput(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => s.parse::<i128>().map(Q::from_integer).map_err(|_| bad()),
    }
}

pub fn floor_q(x: &Q) -> i128 {
    Integer::div_floor(x.numer(), x.denom())
}

pub fn ceil_q(x: &Q) -> i128 {
    -Integer::div_floor(&-x.numer(), x.denom())
}

/// Integer square root of a non-negative integer (largest `r` with `r*r <= n`).
pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative");
    if n < 2 {
        return n;
    }
    let mut r = num_integer::Roots::sqrt(&n);
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All integers `x` with `(x - center)^2 <= radius_sq`, as an inclusive range.
/// Returns `None` when the interval contains no integer.
pub fn integer_interval(center: &Q, radius_sq: &Q) -> Option<(i64, i64)> {
    if radius_sq.is_negative() {
        return None;
    }
    // floor(sqrt(r)) == isqrt(floor(r)) for r >= 0
    let s = isqrt(floor_q(radius_sq));
    let inside = |x: i128| {
        let d = Q::from_integer(x) - center;
        d * d <= *radius_sq
    };
    let mut lo = floor_q(center) - s - 1;
    let mut hi = ceil_q(center) + s + 1;
    while lo <= hi && !inside(lo) {
        lo += 1;
    }
    while hi >= lo && !inside(hi) {
        hi -= 1;
    }
    if lo > hi {
        None
    } else {
        Some((lo as i64, hi as i64))
    }
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}
