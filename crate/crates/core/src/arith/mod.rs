//! Exact scalar arithmetic and truncated bigraded series.
//!
//! Two rational types are used throughout the crate:
//!
//! - [`Rat`] (`Ratio<i64>`) for small bookkeeping quantities: mode levels,
//!   conformal weights, charges and series exponents.
//! - [`Q`] (`BigRational`) for coefficients, where intermediate growth during
//!   elimination or long products must never overflow.

mod cyclotomic;
mod laurent;
mod series;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic, ExactScalar};
pub use laurent::{LaurentPoly, RationalFunctionT};
pub use series::{
    product_expand, series_combine, series_report, Coeff, CoeffReport, CombineMode, FactorKind, ProductFactor, QYSeries, SeriesError,
    SeriesReport, TermReport,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational used for coefficients.
pub type Q = BigRational;
/// Machine-word rational used for exponents, levels and gradings.
pub type Rat = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse rational {input:?}: {reason}")]
pub struct ParseRatError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses `"a"`, `"-a"` or `"a/b"` into a [`Rat`].
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = |reason| ParseRatError { input: s.to_string(), reason };
    let t = s.trim().replace('\u{2212}', "-");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t.as_str(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| err("bad numerator"))?;
    let den: i64 = den.parse().map_err(|_| err("bad denominator"))?;
    if den == 0 {
        return Err(err("zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Parses a rational into a [`Q`].
pub fn parse_q(s: &str) -> Result<Q, ParseRatError> {
    parse_rat(s).map(rat_to_q)
}

pub fn rat_to_q(r: Rat) -> Q {
    Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn q_from_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Converts back to a word-sized rational when it fits.
pub fn q_to_rat(q: &Q) -> Option<Rat> {
    let n: i64 = q.numer().try_into().ok()?;
    let d: i64 = q.denom().try_into().ok()?;
    Some(Rat::new(n, d))
}

/// `"n"` for integers, `"p/q"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: Rat) -> Rat {
    r - r.floor()
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a.lcm(&b)
    }
}

/// Falling factorial `x (x-1) ... (x-d+1)`; `1` for `d = 0`.
pub fn falling_factorial(x: &Q, d: u32) -> Q {
    let mut acc = Q::one();
    let mut cur = x.clone();
    for _ in 0..d {
        acc *= &cur;
        cur -= Q::one();
    }
    acc
}

/// Binomial coefficient for non-negative arguments.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Whether a rational number is an integer.
pub fn q_is_integer(q: &Q) -> bool {
    q.is_integer()
}

/// Sign of a [`Q`] as -1, 0 or 1.
pub fn q_signum(q: &Q) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
