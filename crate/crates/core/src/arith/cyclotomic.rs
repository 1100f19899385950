//! Elements of cyclotomic fields `Q(ζ_R)` with exact rational coordinates.
//!
//! An element of order `R` is stored as its remainder modulo the cyclotomic
//! polynomial `Φ_R`, i.e. as a coefficient vector of length `φ(R)` in the
//! power basis `1, ζ, …, ζ^{φ(R)-1}`. That remainder is unique, so structural
//! comparison decides equality. Elements of different orders are lifted to the
//! least common multiple before any binary operation.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{fmt_q, frac, q_from_int, Rat, Q};

/// The exact scalar used across the crate.
pub type ExactScalar = Cyclotomic;

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn phi_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let divisor = cyclotomic_polynomial(d);
            poly = div_monic_exact(&poly, &divisor);
        }
    }
    let poly = Arc::new(poly);
    phi_cache().write().unwrap().insert(n, poly.clone());
    poly
}

fn div_monic_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for i in (dd..num.len()).rev() {
        let c = rem[i];
        if c != 0 {
            quot[i - dd] = c;
            for (j, &dj) in den.iter().enumerate() {
                rem[i - dd + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// Reduces a polynomial (low degree first) modulo `Φ_order`.
fn reduce(mut poly: Vec<Q>, order: u32) -> Vec<Q> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[i], Q::zero());
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    poly[i - deg + j] -= &c * q_from_int(pj);
                }
            }
        }
    }
    poly.resize(deg, Q::zero());
    poly
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Q>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_q(Q::zero())
    }

    pub fn one() -> Self {
        Self::from_q(Q::one())
    }

    pub fn from_q(q: Q) -> Self {
        Cyclotomic { order: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_q(q_from_int(n))
    }

    /// `ζ_order^k`.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        assert!(order >= 1);
        let k = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Q::zero(); k + 1];
        poly[k] = Q::one();
        Cyclotomic { order, coeffs: reduce(poly, order) }
    }

    /// `exp(2πi · r)` for a rational `r`.
    pub fn from_exponent(r: Rat) -> Self {
        let f = frac(r);
        let order = *f.denom() as u32;
        Self::root_of_unity(order, *f.numer())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coordinates modulo `Φ_order`.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Q> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_rational_integer(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_integer())
    }

    /// Re-expresses the element in `Q(ζ_target)`; `order` must divide `target`.
    pub fn lift(&self, target: u32) -> Self {
        assert!(target.is_multiple_of(self.order), "cannot lift order {} to {}", self.order, target);
        if target == self.order {
            return self.clone();
        }
        if let Some(q) = self.as_rational() {
            let mut coeffs = vec![Q::zero(); euler_phi(target) as usize];
            coeffs[0] = q.clone();
            return Cyclotomic { order: target, coeffs };
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![Q::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Cyclotomic { order: target, coeffs: reduce(poly, target) }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let l = a.order.lcm(&b.order);
        (a.lift(l), b.lift(l))
    }

    pub fn scale(&self, q: &Q) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.order == other.order {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
            return Cyclotomic { order: self.order, coeffs };
        }
        if let Some(q) = self.as_rational() {
            let mut out = other.clone();
            out.coeffs[0] += q;
            return out;
        }
        if let Some(q) = other.as_rational() {
            let mut out = self.clone();
            out.coeffs[0] += q;
            return out;
        }
        let (a, b) = Self::common(self, other);
        a.add_ref(&b)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        if self.order != other.order {
            let (a, b) = Self::common(self, other);
            return a.mul_ref(&b);
        }
        let n = self.coeffs.len();
        let mut poly = vec![Q::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        Cyclotomic { order: self.order, coeffs: reduce(poly, self.order) }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if let Some(q) = self.as_rational() {
            return if q.is_zero() { None } else { Some(Self::from_q(q.recip())) };
        }
        // Solve M x = e_0 where column j of M is ζ^j · self.
        let n = self.coeffs.len();
        let mut columns = Vec::with_capacity(n);
        for j in 0..n {
            let zj = Cyclotomic::root_of_unity(self.order, j as i64);
            columns.push(self.mul_ref(&zj).coeffs);
        }
        // Augmented rows: row i = (M[i][0..n], rhs_i).
        let mut rows: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut r: Vec<Q> = columns.iter().map(|c| c[i].clone()).collect();
                r.push(if i == 0 { Q::one() } else { Q::zero() });
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
            rows.swap(col, pivot);
            let inv = rows[col][col].recip();
            for v in rows[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pivot_row = rows[col].clone();
                    for (v, p) in rows[r].iter_mut().zip(pivot_row.iter()) {
                        *v -= &f * p;
                    }
                }
            }
        }
        Some(Cyclotomic { order: self.order, coeffs: rows.into_iter().map(|mut r| r.pop().unwrap()).collect() })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            _ => {
                let (a, b) = Self::common(self, other);
                a.coeffs == b.coeffs
            }
        }
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", fmt_q(q));
        }
        let parts: Vec<String> = self.coeffs.iter().map(fmt_q).collect();
        write!(f, "[{}]_{}", parts.join(", "), self.order)
    }
}

impl From<Q> for Cyclotomic {
    fn from(q: Q) -> Self {
        Self::from_q(q)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_ref(rhs)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        self.add_ref(&rhs)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_ref(&-rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.mul_ref(rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        self.mul_ref(&rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}
