//! Normally ordered field expressions and their modes as operators on
//! truncated Fock bases.

mod apply;
mod operator;
mod suite;
mod vector;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{fmt_q, q_from_int, rat_to_q, Q};
use crate::fock::{Family, FockError, TwistData};

pub use apply::apply_field_mode;
pub use operator::{field_mode_operator, operator_bracket, Mismatch, OperatorExpr, OperatorMatrix};
pub(crate) use suite::zero_modes;
pub use suite::{admissible_monomials, bracket_suite, homotopy_sign_check, vector_field_suite, RelationCheck};
pub use vector::{vector_field_operator, Monomial, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("field term {term} has weight {got}, expected {want}")]
    InhomogeneousWeight { term: usize, got: i64, want: i64 },
    #[error("field term {term} has charge {got}, expected {want}")]
    InhomogeneousCharge { term: usize, got: i64, want: i64 },
    #[error("field term {0} has more than four factors")]
    TooManyFactors(usize),
    #[error("operands have different level, parity or charge")]
    IncompatibleOperands,
    #[error("vector field {0} is not invariant under the twist")]
    NotAdmissible(String),
    #[error("vector field {0} exceeds the supported degree or rank")]
    Unsupported(String),
    #[error("anomaly term allowed only on weight-one fields")]
    BadAnomaly,
}

/// `∂^deriv X^dir` for a generator `X` in one of the four families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub family: Family,
    pub dir: usize,
    pub deriv: u32,
}

impl Factor {
    pub fn new(family: Family, dir: usize) -> Self {
        Factor { family, dir, deriv: 0 }
    }

    pub fn d(family: Family, dir: usize, deriv: u32) -> Self {
        Factor { family, dir, deriv }
    }

    pub fn weight(&self) -> i64 {
        self.family.field_weight() + self.deriv as i64
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.deriv {
            write!(f, "d")?;
        }
        write!(f, "{}{}", self.family, self.dir + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTerm {
    pub coeff: Q,
    pub factors: Vec<Factor>,
}

impl FieldTerm {
    pub fn new(coeff: Q, factors: Vec<Factor>) -> Self {
        FieldTerm { coeff, factors }
    }

    pub fn weight(&self) -> i64 {
        self.factors.iter().map(Factor::weight).sum()
    }

    pub fn charge(&self) -> i64 {
        self.factors.iter().map(|f| f.family.charge()).sum()
    }

    pub fn is_odd(&self) -> bool {
        self.factors.iter().filter(|f| f.family.is_fermion()).count() % 2 == 1
    }
}

/// Homogeneous normally ordered polynomial in the generating fields, with an
/// optional `c z^{-1}` anomaly (which only shifts the zero mode).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldExpr {
    name: String,
    terms: Vec<FieldTerm>,
    anomaly: Q,
    weight: i64,
    charge: i64,
    odd: bool,
}

impl FieldExpr {
    /// Infers weight, charge and parity from the first term.
    pub fn new(name: impl Into<String>, terms: Vec<FieldTerm>, anomaly: Q) -> Result<Self, FieldError> {
        let (weight, charge, odd) = match terms.iter().find(|t| !t.coeff.is_zero()) {
            Some(t) => (t.weight(), t.charge(), t.is_odd()),
            None => (1, 0, false),
        };
        Self::declared(name, terms, anomaly, weight, charge, odd)
    }

    pub fn declared(
        name: impl Into<String>,
        terms: Vec<FieldTerm>,
        anomaly: Q,
        weight: i64,
        charge: i64,
        odd: bool,
    ) -> Result<Self, FieldError> {
        let terms: Vec<FieldTerm> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        for (i, t) in terms.iter().enumerate() {
            if t.factors.len() > 4 {
                return Err(FieldError::TooManyFactors(i));
            }
            if t.weight() != weight {
                return Err(FieldError::InhomogeneousWeight { term: i, got: t.weight(), want: weight });
            }
            if t.charge() != charge || t.is_odd() != odd {
                return Err(FieldError::InhomogeneousCharge { term: i, got: t.charge(), want: charge });
            }
        }
        if !anomaly.is_zero() && (weight != 1 || odd || charge != 0) {
            return Err(FieldError::BadAnomaly);
        }
        Ok(FieldExpr { name: name.into(), terms, anomaly, weight, charge, odd })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[FieldTerm] {
        &self.terms
    }

    pub fn anomaly(&self) -> &Q {
        &self.anomaly
    }

    /// Conformal weight `h` in `F(z) = Σ F_n z^{-n-h}`.
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn charge(&self) -> i64 {
        self.charge
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.name)?;
        if self.terms.is_empty() && self.anomaly.is_zero() {
            return write!(f, " 0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let fs: Vec<String> = t.factors.iter().map(|x| x.to_string()).collect();
            let sep = if i == 0 { " " } else { " + " };
            if t.coeff.is_one() {
                write!(f, "{sep}:{}:", fs.join(" "))?;
            } else {
                write!(f, "{sep}({}):{}:", fmt_q(&t.coeff), fs.join(" "))?;
            }
        }
        if !self.anomaly.is_zero() {
            write!(f, " + ({})/z", fmt_q(&self.anomaly))?;
        }
        Ok(())
    }
}

/// The four generators of the `N = 2` algebra.
#[derive(Clone, Debug)]
pub struct StandardFields {
    pub l: Arc<FieldExpr>,
    pub j: Arc<FieldExpr>,
    pub q: Arc<FieldExpr>,
    pub g: Arc<FieldExpr>,
}

impl StandardFields {
    pub fn all(&self) -> [(&'static str, &Arc<FieldExpr>); 4] {
        [("L", &self.l), ("J", &self.j), ("Q", &self.q), ("G", &self.g)]
    }
}

/// `L = Σ :∂b a: + :∂φ ψ:`, `J = Σ :φ ψ:`, `Q = Σ :a φ:`, `G = Σ :ψ ∂b:`.
pub fn standard_fields(n: usize) -> StandardFields {
    twisted_standard_fields(&TwistData::identity(n))
}

/// The same expressions over twisted modes; `J` gains the anomaly `ι`.
pub fn twisted_standard_fields(twist: &TwistData) -> StandardFields {
    use Family::*;
    let n = twist.n();
    let one = || q_from_int(1);
    let sum = |f: &dyn Fn(usize) -> Vec<Vec<Factor>>| -> Vec<FieldTerm> {
        (0..n).flat_map(|i| f(i).into_iter().map(|fs| FieldTerm::new(one(), fs))).collect()
    };
    let l = sum(&|i| vec![vec![Factor::d(B, i, 1), Factor::new(A, i)], vec![Factor::d(Phi, i, 1), Factor::new(Psi, i)]]);
    let j = sum(&|i| vec![vec![Factor::new(Phi, i), Factor::new(Psi, i)]]);
    let q = sum(&|i| vec![vec![Factor::new(A, i), Factor::new(Phi, i)]]);
    let g = sum(&|i| vec![vec![Factor::new(Psi, i), Factor::d(B, i, 1)]]);
    let mk = |name, terms, anomaly, weight, charge, odd| {
        Arc::new(FieldExpr::declared(name, terms, anomaly, weight, charge, odd).expect("standard field is homogeneous"))
    };
    StandardFields {
        l: mk("L", l, Q::zero(), 2, 0, false),
        j: mk("J", j, rat_to_q(twist.iota()), 1, 0, false),
        q: mk("Q", q, Q::zero(), 1, 1, true),
        g: mk("G", g, Q::zero(), 2, -1, true),
    }
}
