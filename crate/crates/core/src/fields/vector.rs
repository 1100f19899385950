//! Polynomial vector fields on the formal disk and their currents.
//!
//! `f ∂_j` is sent to the zero mode of `:f(b) a^j: + Σ_k :(∂_k f)(b) φ^k ψ^j:`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::operator::OperatorExpr;
use super::{Factor, FieldError, FieldExpr, FieldTerm, OperatorMatrix};
use crate::arith::{fmt_q, q_from_int, Rat, Q};
use crate::fock::{Family, FockModule, TwistData};

/// Exponent vector of a monomial `t_1^{i_1} ... t_N^{i_N}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `∂_k` of the monomial as `(coefficient, monomial)`.
    pub fn derivative(&self, k: usize) -> Option<(u32, Monomial)> {
        let e = self.0[k];
        if e == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[k] -= 1;
        Some((e, m))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials in `n` variables of total degree at most `max_degree`.
    pub fn all_up_to(n: usize, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == cur.len() {
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, max_degree, &mut cur, &mut out);
        out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, e) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Finite sum `Σ c · t^I ∂_j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorField {
    n: usize,
    terms: BTreeMap<(Monomial, usize), Q>,
}

impl VectorField {
    pub fn zero(n: usize) -> Self {
        VectorField { n, terms: BTreeMap::new() }
    }

    /// `t^exponents ∂_j` with `j` 0-based.
    pub fn monomial(exponents: Vec<u32>, j: usize) -> Self {
        let n = exponents.len();
        let mut v = Self::zero(n);
        v.add_term(Monomial(exponents), j, Q::one());
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, usize, &Q)> {
        self.terms.iter().map(|((m, j), c)| (m, *j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, j: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (m, j);
        let v = self.terms.remove(&key).unwrap_or_else(Q::zero) + c;
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for ((m, j), v) in &self.terms {
            out.add_term(m.clone(), *j, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((m, j), v) in &other.terms {
            out.add_term(m.clone(), *j, v.clone());
        }
        out
    }

    /// `[f ∂_j, g ∂_k] = f (∂_j g) ∂_k - g (∂_k f) ∂_j`.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for ((f, j), a) in &self.terms {
            for ((g, k), b) in &other.terms {
                let ab = a * b;
                if let Some((e, dg)) = g.derivative(*j) {
                    out.add_term(f.mul(&dg), *k, &ab * q_from_int(e as i64));
                }
                if let Some((e, df)) = f.derivative(*k) {
                    out.add_term(g.mul(&df), *j, -(&ab * q_from_int(e as i64)));
                }
            }
        }
        out
    }

    /// Every monomial term satisfies `Σ m_l i_l ≡ m_j (mod m_g)`.
    pub fn is_admissible(&self, twist: &TwistData) -> bool {
        self.terms.keys().all(|(m, j)| monomial_admissible(m, *j, twist))
    }

    /// The weight-one field whose zero mode represents this vector field.
    pub fn current(&self) -> Result<FieldExpr, FieldError> {
        let mut terms = Vec::new();
        for ((m, j), c) in &self.terms {
            let bs: Vec<Factor> =
                m.0.iter().enumerate().flat_map(|(l, &e)| std::iter::repeat_n(Factor::new(Family::B, l), e as usize)).collect();
            let mut f = bs.clone();
            f.push(Factor::new(Family::A, *j));
            terms.push(FieldTerm::new(c.clone(), f));
            for k in 0..self.n {
                if let Some((e, dm)) = m.derivative(k) {
                    let mut f: Vec<Factor> =
                        dm.0.iter().enumerate().flat_map(|(l, &e)| std::iter::repeat_n(Factor::new(Family::B, l), e as usize)).collect();
                    f.push(Factor::new(Family::Phi, k));
                    f.push(Factor::new(Family::Psi, *j));
                    terms.push(FieldTerm::new(c * q_from_int(e as i64), f));
                }
            }
        }
        FieldExpr::declared(format!("nu({self})"), terms, Q::zero(), 1, 0, false)
    }
}

pub(crate) fn monomial_admissible(m: &Monomial, j: usize, twist: &TwistData) -> bool {
    let mg = twist.mg() as i64;
    let s: i64 = m.0.iter().enumerate().map(|(l, &e)| twist.exponent(l) as i64 * e as i64).sum();
    (s - twist.exponent(j) as i64).rem_euclid(mg) == 0
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, j), c)| if c.is_one() { format!("{m} d{}", j + 1) } else { format!("({})*{m} d{}", fmt_q(c), j + 1) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Zero mode of the current of `v` on the basis of weight `<= w_max` with at
/// most `b0_cap` factors of `b_0` per direction (default: degree + `w_max`).
pub fn vector_field_operator(
    v: &VectorField,
    module: &Arc<FockModule>,
    w_max: Rat,
    b0_cap: Option<u32>,
) -> Result<OperatorMatrix, FieldError> {
    if v.n() != module.n() || v.n() > 3 || v.degree() > 3 {
        return Err(FieldError::Unsupported(v.to_string()));
    }
    if !v.is_admissible(module.twist()) {
        return Err(FieldError::NotAdmissible(v.to_string()));
    }
    let cap = b0_cap.unwrap_or_else(|| v.degree() + w_max.floor().to_integer().max(0) as u32);
    let field = Arc::new(v.current()?);
    OperatorMatrix::from_expr(OperatorExpr::mode(&field, Rat::zero()), module, w_max, Some(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockVector, Mode};

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn lie_bracket_of_polynomial_fields() {
        let e = VectorField::monomial(vec![1], 0);
        let f = VectorField::monomial(vec![2], 0);
        assert_eq!(e.bracket(&f), f);
        let d = VectorField::monomial(vec![0], 0);
        assert_eq!(d.bracket(&e), d);
        // [t1 d2, t2 d1] = t1 d1 - t2 d2
        let x = VectorField::monomial(vec![1, 0], 1);
        let y = VectorField::monomial(vec![0, 1], 0);
        let want = VectorField::monomial(vec![1, 0], 0).add(&VectorField::monomial(vec![0, 1], 1).scale(&q_from_int(-1)));
        assert_eq!(x.bracket(&y), want);
    }

    #[test]
    fn translation_kills_fiber_vacuum_sector() {
        let m = Arc::new(FockModule::untwisted(1));
        let op = vector_field_operator(&VectorField::monomial(vec![0], 0), &m, r(0), Some(0)).unwrap();
        assert!(op.is_zero());
        let b = m.basis_up_to(r(2), None).unwrap();
        assert_eq!(op.domain().len(), m.basis_up_to(r(0), None).unwrap().len());
        assert!(b.len() > op.domain().len());
    }

    #[test]
    fn euler_field_acts_on_b() {
        // [ν(t d), b_{-1}] = b_{-1}: the lowest mode of f(b) for f = t.
        let m = Arc::new(FockModule::untwisted(1));
        let v = VectorField::monomial(vec![1], 0);
        let field = Arc::new(v.current().unwrap());
        let op = OperatorExpr::mode(&field, Rat::zero());
        let b = m.basis_up_to(r(1), Some(1)).unwrap();
        for s in b.states() {
            let x = FockVector::basis(s.clone());
            let bx = m.apply_mode(&Mode::new(Family::B, 0, r(-1)), &x).unwrap();
            let lhs = op.apply(&m, &bx).sub(&m.apply_mode(&Mode::new(Family::B, 0, r(-1)), &op.apply(&m, &x)).unwrap());
            assert_eq!(lhs, bx);
        }
    }

    #[test]
    fn admissibility() {
        let t = TwistData::new(vec![1], 2).unwrap();
        assert!(!VectorField::monomial(vec![0], 0).is_admissible(&t));
        assert!(VectorField::monomial(vec![1], 0).is_admissible(&t));
        assert!(!VectorField::monomial(vec![2], 0).is_admissible(&t));
        let m = Arc::new(FockModule::new(t));
        assert!(matches!(vector_field_operator(&VectorField::monomial(vec![2], 0), &m, r(1), None), Err(FieldError::NotAdmissible(_))));
        let m1 = Arc::new(FockModule::untwisted(1));
        assert!(matches!(vector_field_operator(&VectorField::monomial(vec![4], 0), &m1, r(1), None), Err(FieldError::Unsupported(_))));
        assert_eq!(Monomial::all_up_to(2, 2).len(), 6);
    }
}
