//! Truncated formal series in `q` and `y` with rational exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use super::{binomial, fmt_q, fmt_rat, lcm_u64, Cyclotomic, LaurentPoly, Rat, RationalFunctionT, Q};

/// Coefficient ring for [`QYSeries`].
pub trait Coeff: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_q(q: &Q) -> Self;
}

impl Coeff for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_q(q: &Q) -> Self {
        Cyclotomic::from_q(q.clone())
    }
}

impl Coeff for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn from_q(q: &Q) -> Self {
        LaurentPoly::constant(Cyclotomic::from_q(q.clone()))
    }
}

impl Coeff for RationalFunctionT {
    fn zero() -> Self {
        RationalFunctionT::zero()
    }
    fn one() -> Self {
        RationalFunctionT::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunctionT::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunctionT::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunctionT::mul(self, other)
    }
    fn neg(&self) -> Self {
        RationalFunctionT::neg(self)
    }
    fn from_q(q: &Q) -> Self {
        RationalFunctionT::constant(Cyclotomic::from_q(q.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series has terms with negative q-exponent {0} but no declared floor")]
    UndeclaredNegativeSupport(String),
    #[error("term q^{q} lies below the declared floor {floor}")]
    BelowFloor { q: String, floor: String },
    #[error("symmetric factor with q-exponent {0} <= 0 diverges")]
    Divergent(String),
    #[error("exterior factor with negative q-exponent {0} is not supported")]
    NegativeExterior(String),
    #[error("factor rank must be positive")]
    ZeroRank,
}

/// Truncated series `Σ c_{a,b} q^a y^b` with `a <= q_max`.
///
/// Terms with `a > q_max` are dropped on insertion, so every stored
/// coefficient is exact. `qden` is the least common denominator of the stored
/// q-exponents (and of `q_max`).
#[derive(Clone, Debug, PartialEq)]
pub struct QYSeries<C> {
    qden: u64,
    q_max: Rat,
    q_floor: Option<Rat>,
    terms: BTreeMap<(Rat, Rat), C>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Add,
    Mul,
}

impl<C: Coeff> QYSeries<C> {
    pub fn zero(q_max: Rat) -> Self {
        QYSeries { qden: *q_max.denom() as u64, q_max, q_floor: None, terms: BTreeMap::new() }
    }

    pub fn one(q_max: Rat) -> Self {
        Self::monomial(Rat::zero(), Rat::zero(), C::one(), q_max)
    }

    pub fn monomial(q: Rat, y: Rat, c: C, q_max: Rat) -> Self {
        let mut s = Self::zero(q_max);
        s.add_term(q, y, c);
        s
    }

    /// Declares a lower bound on q-exponents, permitting negative support.
    pub fn with_floor(mut self, floor: Rat) -> Result<Self, SeriesError> {
        if let Some(((q, _), _)) = self.terms.iter().find(|((q, _), _)| *q < floor) {
            return Err(SeriesError::BelowFloor { q: fmt_rat(q), floor: fmt_rat(&floor) });
        }
        self.q_floor = Some(floor);
        Ok(self)
    }

    pub fn q_max(&self) -> Rat {
        self.q_max
    }

    pub fn qden(&self) -> u64 {
        self.qden
    }

    /// Effective lower bound on q-exponents (0 unless declared).
    pub fn floor(&self) -> Rat {
        self.q_floor.unwrap_or_else(Rat::zero)
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

    pub fn terms(&self) -> impl Iterator<Item = (Rat, Rat, &C)> {
        self.terms.iter().map(|((q, y), c)| (*q, *y, c))
    }

    pub fn coeff(&self, q: Rat, y: Rat) -> C {
        self.terms.get(&(q, y)).cloned().unwrap_or_else(C::zero)
    }

    /// Adds `c q^a y^b`; silently ignored when `a > q_max`.
    pub fn add_term(&mut self, q: Rat, y: Rat, c: C) {
        if q > self.q_max || c.is_zero() {
            return;
        }
        self.qden = lcm_u64(self.qden, *q.denom() as u64);
        match self.terms.remove(&(q, y)) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert((q, y), s);
                }
            }
            None => {
                self.terms.insert((q, y), c);
            }
        }
    }

    pub fn truncate(&self, q_max: Rat) -> Self {
        let q_max = q_max.min(self.q_max);
        let mut out = Self::zero(q_max);
        out.q_floor = self.q_floor;
        for ((q, y), c) in &self.terms {
            out.add_term(*q, *y, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let q_max = self.q_max.min(other.q_max);
        let mut out = Self::zero(q_max);
        out.qden = lcm_u64(self.qden, other.qden);
        out.q_floor = match (self.q_floor, other.q_floor) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or_else(Rat::zero).min(b.unwrap_or_else(Rat::zero))),
        };
        for ((q, y), c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*q, *y, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn check_support(&self) -> Result<(), SeriesError> {
        if self.q_floor.is_none() {
            if let Some(((q, _), _)) = self.terms.iter().find(|((q, _), _)| q.is_negative()) {
                return Err(SeriesError::UndeclaredNegativeSupport(fmt_rat(q)));
            }
        }
        Ok(())
    }

    /// Truncated product; exact for every exponent up to the returned bound
    /// `min(q_max_a + floor_b, q_max_b + floor_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_support()?;
        other.check_support()?;
        let q_max = (self.q_max + other.floor()).min(other.q_max + self.floor());
        let mut out = Self::zero(q_max);
        out.qden = lcm_u64(self.qden, other.qden);
        if self.q_floor.is_some() || other.q_floor.is_some() {
            out.q_floor = Some(self.floor() + other.floor());
        }
        for ((qa, ya), ca) in &self.terms {
            for ((qb, yb), cb) in &other.terms {
                let q = qa + qb;
                if q <= q_max {
                    out.add_term(q, ya + yb, ca.mul(cb));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.q_max);
        out.qden = self.qden;
        out.q_floor = self.q_floor;
        for ((q, y), v) in &self.terms {
            out.add_term(*q, *y, v.mul(c));
        }
        out
    }

    /// Multiplies by `y^shift`.
    pub fn shift_y(&self, shift: Rat) -> Self {
        let mut out = self.clone();
        out.terms = self.terms.iter().map(|((q, y), c)| ((*q, y + shift), c.clone())).collect();
        out
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn try_map<D: Coeff, E>(&self, mut f: impl FnMut(Rat, Rat, &C) -> Result<D, E>) -> Result<QYSeries<D>, E> {
        let mut out = QYSeries::<D>::zero(self.q_max);
        out.qden = self.qden;
        out.q_floor = self.q_floor;
        for ((q, y), c) in &self.terms {
            out.add_term(*q, *y, f(*q, *y, c)?);
        }
        Ok(out)
    }

    pub fn map<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> QYSeries<D> {
        self.try_map::<D, std::convert::Infallible>(|_, _, c| Ok(f(c))).unwrap()
    }

    /// First `(q, y)` (in sorted order) where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Rat, Rat)> {
        let diff = self.sub(other);
        diff.terms.keys().next().copied()
    }
}

impl<C: Coeff> fmt::Display for QYSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((q, y), c) in &self.terms {
            let mut mono = Vec::new();
            if !y.is_zero() {
                mono.push(power("y", y));
            }
            if !q.is_zero() {
                mono.push(power("q", q));
            }
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ => (false, cs),
            };
            let coeff = if mag.contains(' ') { format!("({mag})") } else { mag };
            let body = if mono.is_empty() {
                coeff
            } else if coeff == "1" {
                mono.join("*")
            } else {
                format!("{}*{}", coeff, mono.join("*"))
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

fn power(var: &str, e: &Rat) -> String {
    if e.is_one() {
        var.to_string()
    } else if e.is_integer() && e.is_positive() {
        format!("{var}^{}", e.numer())
    } else {
        format!("{var}^({})", fmt_rat(e))
    }
}

/// `a + b` or `a * b` with the truncation and floor rules of [`QYSeries`].
pub fn series_combine<C: Coeff>(a: &QYSeries<C>, b: &QYSeries<C>, mode: CombineMode) -> Result<QYSeries<C>, SeriesError> {
    match mode {
        CombineMode::Add => Ok(a.add(b)),
        CombineMode::Mul => a.mul(b),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// `(1 + λ q^a y^b)^rank`
    Exterior,
    /// `(1 - λ q^a y^b)^(-rank)`
    Symmetric,
}

#[derive(Clone, Debug)]
pub struct ProductFactor<C> {
    pub kind: FactorKind,
    pub q_exp: Rat,
    pub y_exp: Rat,
    pub scale: C,
    pub rank: u32,
}

impl<C: Coeff> ProductFactor<C> {
    pub fn exterior(q_exp: Rat, y_exp: Rat, scale: C, rank: u32) -> Self {
        ProductFactor { kind: FactorKind::Exterior, q_exp, y_exp, scale, rank }
    }

    pub fn symmetric(q_exp: Rat, y_exp: Rat, scale: C, rank: u32) -> Self {
        ProductFactor { kind: FactorKind::Symmetric, q_exp, y_exp, scale, rank }
    }

    fn expand(&self, q_max: Rat) -> Result<QYSeries<C>, SeriesError> {
        if self.rank == 0 {
            return Err(SeriesError::ZeroRank);
        }
        let mut out = QYSeries::zero(q_max);
        let mut power = C::one();
        let mut k: u64 = 0;
        loop {
            let q = self.q_exp * Rat::from_integer(k as i64);
            if q > q_max {
                break;
            }
            let mult = match self.kind {
                FactorKind::Exterior => {
                    if k > self.rank as u64 {
                        break;
                    }
                    binomial(self.rank as u64, k)
                }
                FactorKind::Symmetric => binomial(self.rank as u64 + k - 1, k),
            };
            let coeff = power.mul(&C::from_q(&Q::from_integer(mult)));
            out.add_term(q, self.y_exp * Rat::from_integer(k as i64), coeff);
            power = power.mul(&self.scale);
            k += 1;
            if self.kind == FactorKind::Symmetric && self.q_exp.is_zero() {
                unreachable!("checked by product_expand");
            }
        }
        Ok(out)
    }
}

/// `∏ (1 + λ q^a y^b)^r` over exterior factors times `∏ (1 - λ q^a y^b)^(-r)`
/// over symmetric factors, truncated at `q_max`.
pub fn product_expand<C: Coeff>(factors: &[ProductFactor<C>], q_max: Rat) -> Result<QYSeries<C>, SeriesError> {
    let mut acc = QYSeries::one(q_max);
    for f in factors {
        match f.kind {
            FactorKind::Symmetric if !f.q_exp.is_positive() => {
                return Err(SeriesError::Divergent(fmt_rat(&f.q_exp)));
            }
            FactorKind::Exterior if f.q_exp.is_negative() => {
                return Err(SeriesError::NegativeExterior(fmt_rat(&f.q_exp)));
            }
            _ => {}
        }
        if f.q_exp > q_max {
            if f.rank == 0 {
                return Err(SeriesError::ZeroRank);
            }
            continue;
        }
        acc = acc.mul(&f.expand(q_max)?)?;
    }
    Ok(acc)
}

/// Serializable coefficient: a rational string or a cyclotomic coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CoeffReport {
    Rational(String),
    Cyclotomic { order: u32, coeffs: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermReport {
    pub q: String,
    pub y: String,
    pub coeff: CoeffReport,
}

/// Canonical rendering of a scalar series, sorted by `(q, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub qden: u64,
    pub terms: Vec<TermReport>,
    #[serde(skip)]
    pub text: String,
}

impl SeriesReport {
    pub fn to_json(&self) -> Value {
        json!({ "qden": self.qden, "terms": self.terms })
    }

    /// `(q, y, coeff)` triples as plain strings.
    pub fn tuples(&self) -> Vec<(String, String, String)> {
        self.terms
            .iter()
            .map(|t| {
                let c = match &t.coeff {
                    CoeffReport::Rational(s) => s.clone(),
                    CoeffReport::Cyclotomic { order, coeffs } => format!("[{}]_{}", coeffs.join(", "), order),
                };
                (t.q.clone(), t.y.clone(), c)
            })
            .collect()
    }
}

impl fmt::Display for SeriesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

pub fn series_report(s: &QYSeries<Cyclotomic>) -> SeriesReport {
    let terms = s
        .terms()
        .map(|(q, y, c)| TermReport {
            q: fmt_rat(&q),
            y: fmt_rat(&y),
            coeff: match c.as_rational() {
                Some(r) => CoeffReport::Rational(fmt_q(r)),
                None => CoeffReport::Cyclotomic { order: c.order(), coeffs: c.coeffs().iter().map(fmt_q).collect() },
            },
        })
        .collect();
    SeriesReport { qden: s.qden(), terms, text: s.to_string() }
}
