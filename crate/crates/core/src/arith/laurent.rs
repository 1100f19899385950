//! Laurent polynomials and rational functions in the auxiliary torus variable `t`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use super::{Cyclotomic, Q};

/// Finite Laurent polynomial `Σ c_k t^k` with cyclotomic coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Cyclotomic>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(Cyclotomic::one())
    }

    pub fn monomial(c: Cyclotomic, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Cyclotomic)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, exp: i64) -> Cyclotomic {
        self.terms.get(&exp).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    fn add_term(&mut self, exp: i64, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = LaurentPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The constant value when no positive or negative powers of `t` remain.
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        match self.terms.len() {
            0 => Some(Cyclotomic::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Value at `t = 1`.
    pub fn eval_at_one(&self) -> Cyclotomic {
        self.terms.values().fold(Cyclotomic::zero(), |acc, c| &acc + c)
    }

    /// Exact quotient `self / den`, or `None` when `den` does not divide.
    pub fn div_exact(&self, den: &Self) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let dmax = den.max_exp().unwrap();
        let dmin = den.min_exp().unwrap();
        let lead_inv = den.terms[&dmax].inverse()?;
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        // Divide by leading terms until the remainder's span is shorter than the divisor's.
        loop {
            let (rmin, rmax) = match (rem.min_exp(), rem.max_exp()) {
                (Some(a), Some(b)) => (a, b),
                _ => return Some(quot),
            };
            if rmax - rmin < dmax - dmin {
                return None;
            }
            let c = &rem.terms[&rmax] * &lead_inv;
            let shift = rmax - dmax;
            let step = LaurentPoly::monomial(c, shift);
            rem = rem.sub(&step.mul(den));
            quot = quot.add(&step);
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let t = if *k == 1 { "t".to_string() } else { format!("t^{k}") };
            let (neg, mag) = match c.as_rational() {
                Some(q) if q.is_negative() => (true, Cyclotomic::from_q(-q)),
                _ => (false, c.clone()),
            };
            let sep = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let body = match (*k, mag.as_rational().map(|q| q.is_one())) {
                (0, _) => format!("{mag}"),
                (_, Some(true)) => t,
                _ => format!("{mag}*{t}"),
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

/// Quotient of two Laurent polynomials in `t`; the denominator is never zero.
#[derive(Clone, Debug)]
pub struct RationalFunctionT {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunctionT {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(RationalFunctionT { num, den })
        }
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        RationalFunctionT { num, den: LaurentPoly::one() }
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RationalFunctionT { num: self.num.add(&other.num), den: self.den.clone() };
        }
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        RationalFunctionT { num: self.num.mul(&other.den).add(&other.num.mul(&self.den)), den: self.den.mul(&other.den) }
    }

    pub fn neg(&self) -> Self {
        RationalFunctionT { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunctionT { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    /// `None` when `self` is zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RationalFunctionT { num: self.den.clone(), den: self.num.clone() })
        }
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.mul(&inv))
    }

    /// The constant value when the reduced function does not depend on `t`.
    pub fn is_constant(&self) -> Option<Cyclotomic> {
        if self.num.is_zero() {
            return Some(Cyclotomic::zero());
        }
        let (nmax, dmax) = (self.num.max_exp()?, self.den.max_exp()?);
        let c = &self.num.coeff(nmax) * &self.den.coeff(dmax).inverse()?;
        let shift = nmax - dmax;
        if shift != 0 {
            return None;
        }
        if self.num.sub(&self.den.scale(&c)).is_zero() {
            Some(c)
        } else {
            None
        }
    }

    /// The Laurent polynomial equal to this function, if the division is exact.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        self.num.div_exact(&self.den)
    }

    pub fn scale_q(&self, q: &Q) -> Self {
        let c = Cyclotomic::from_q(q.clone());
        RationalFunctionT { num: self.num.scale(&c), den: self.den.clone() }
    }
}

impl PartialEq for RationalFunctionT {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl From<LaurentPoly> for RationalFunctionT {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}
