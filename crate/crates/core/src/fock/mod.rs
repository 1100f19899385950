//! Heisenberg ⊗ Clifford Fock modules, untwisted and twisted by a diagonal
//! finite-order automorphism.
//!
//! Each coordinate direction `i` carries four families of modes. With
//! `λ_i = m_i / m_g`, the families `a` and `ψ` live on `λ_i + Z` and `b`, `φ`
//! on `-λ_i + Z`, subject to
//!
//! ```text
//! [a_n, b_m] = δ_{n,-m}        {ψ_n, φ_m} = δ_{n,-m}
//! ```
//!
//! `a_n, ψ_n` annihilate the vacuum for `n >= 0`; `b_n, φ_n` for `n > 0`.
//! A basis vector is a normally ordered monomial in creation modes applied to
//! the vacuum. Its weight is the sum of `-n` over its modes and its charge is
//! `#φ - #ψ + ι` where `ι = Σ λ_i`.

mod module;
mod relations;
mod state;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{fmt_rat, Rat};

pub use module::{product_character, Basis, Block, FockModule};
pub use relations::{canonical_relations_check, RelationsReport};
pub use state::{FockState, FockVector, ModeKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("mode {mode} is not on the level lattice of this module")]
    WrongLattice { mode: String },
    #[error("direction {dir} out of range for N = {n}")]
    BadDirection { dir: usize, n: usize },
    #[error("b_0 states give infinite weight-zero multiplicity; the character is only defined on the sector without them")]
    UnsupportedB0Character,
    #[error("negative weight bound {0}")]
    NegativeWeight(String),
}

/// Eigenvalue exponents `m_1, …, m_N` of a diagonal automorphism of order
/// dividing `m_g`, acting on direction `i` by `exp(2πi m_i / m_g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistData {
    mg: u32,
    exponents: Vec<u32>,
}

impl TwistData {
    pub fn new(exponents: Vec<u32>, mg: u32) -> Result<Self, FockError> {
        if mg == 0 {
            return Err(FockError::InvalidTwist("m_g must be positive".into()));
        }
        if let Some(m) = exponents.iter().find(|&&m| m >= mg) {
            return Err(FockError::InvalidTwist(format!("exponent {m} outside 0..{mg}")));
        }
        Ok(TwistData { mg, exponents })
    }

    pub fn identity(n: usize) -> Self {
        TwistData { mg: 1, exponents: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn mg(&self) -> u32 {
        self.mg
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, dir: usize) -> u32 {
        self.exponents[dir]
    }

    /// `m_i / m_g` for direction `i` (0-based).
    pub fn lambda(&self, dir: usize) -> Rat {
        Rat::new(self.exponents[dir] as i64, self.mg as i64)
    }

    /// Fermionic shift `Σ m_i / m_g`.
    pub fn iota(&self) -> Rat {
        (0..self.n()).map(|i| self.lambda(i)).fold(Rat::zero(), |a, b| a + b)
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&m| m == 0)
    }

    /// Number of directions with `m_i = 0`.
    pub fn fixed_directions(&self) -> usize {
        self.exponents.iter().filter(|&&m| m == 0).count()
    }
}

impl fmt::Display for TwistData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms: Vec<String> = self.exponents.iter().map(|m| m.to_string()).collect();
        write!(f, "({})/{}", ms.join(","), self.mg)
    }
}

/// Parses `"m1,...,mN/mg"`; a bare list means `m_g = 1`.
impl FromStr for TwistData {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('(');
        let (list, mg) = match s.rsplit_once('/') {
            Some((l, d)) => (l, d.trim()),
            None => (s, "1"),
        };
        let list = list.trim().trim_end_matches(')');
        let mg: u32 = mg.parse().map_err(|_| FockError::InvalidTwist(format!("bad m_g {mg:?}")))?;
        let exponents = list
            .split(',')
            .map(|m| m.trim().parse::<u32>().map_err(|_| FockError::InvalidTwist(format!("bad exponent {m:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        TwistData::new(exponents, mg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    Psi,
    Phi,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::Psi, Family::Phi];

    pub fn is_fermion(self) -> bool {
        matches!(self, Family::Psi | Family::Phi)
    }

    /// The family paired with this one by the (anti)commutation relations.
    pub fn partner(self) -> Family {
        match self {
            Family::A => Family::B,
            Family::B => Family::A,
            Family::Psi => Family::Phi,
            Family::Phi => Family::Psi,
        }
    }

    /// Conformal weight of the generating field.
    pub fn field_weight(self) -> i64 {
        match self {
            Family::A | Family::Psi => 1,
            Family::B | Family::Phi => 0,
        }
    }

    /// Contribution to the charge of one creation mode.
    pub fn charge(self) -> i64 {
        match self {
            Family::Psi => -1,
            Family::Phi => 1,
            _ => 0,
        }
    }

    /// Whether modes of this family live on `λ + Z` (as opposed to `-λ + Z`).
    pub fn on_positive_lattice(self) -> bool {
        matches!(self, Family::A | Family::Psi)
    }

    /// Annihilation-type at the given level (in any units with the right sign).
    pub fn annihilates_at(self, ticks: i64) -> bool {
        match self {
            Family::A | Family::Psi => ticks >= 0,
            Family::B | Family::Phi => ticks > 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Family::A => "a",
            Family::B => "b",
            Family::Psi => "psi",
            Family::Phi => "phi",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A single mode `X^i_n`; `dir` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub family: Family,
    pub dir: usize,
    pub level: Rat,
}

impl Mode {
    pub fn new(family: Family, dir: usize, level: Rat) -> Self {
        Mode { family, dir, level }
    }

    pub fn is_annihilator(&self) -> bool {
        self.family.annihilates_at(if self.level.is_zero() {
            0
        } else if self.level > Rat::zero() {
            1
        } else {
            -1
        })
    }

    pub fn is_fermion(&self) -> bool {
        self.family.is_fermion()
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}_{{{}}}", self.family, self.dir + 1, fmt_rat(&self.level))
    }
}
