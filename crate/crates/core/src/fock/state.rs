use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::Family;
use crate::arith::{fmt_q, Q};

/// A mode with its level stored as an integer multiple of `1/m_g`.
///
/// The derived order (direction, family, level) is the canonical order of
/// creation modes inside a [`FockState`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeKey {
    pub dir: u8,
    pub family: Family,
    pub ticks: i32,
}

impl ModeKey {
    pub fn new(dir: usize, family: Family, ticks: i64) -> Self {
        ModeKey { dir: dir as u8, family, ticks: ticks as i32 }
    }

    pub fn is_annihilator(&self) -> bool {
        self.family.annihilates_at(self.ticks as i64)
    }

    pub fn is_fermion(&self) -> bool {
        self.family.is_fermion()
    }

    /// The mode this one contracts with.
    pub fn partner(&self) -> ModeKey {
        ModeKey { dir: self.dir, family: self.family.partner(), ticks: -self.ticks }
    }
}

/// Normally ordered monomial of creation modes applied to the vacuum, with
/// unit coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    bosons: Vec<ModeKey>,
    fermions: Vec<ModeKey>,
}

impl FockState {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub(crate) fn from_sorted(bosons: Vec<ModeKey>, fermions: Vec<ModeKey>) -> Self {
        debug_assert!(bosons.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(fermions.windows(2).all(|w| w[0] < w[1]));
        FockState { bosons, fermions }
    }

    pub fn bosons(&self) -> &[ModeKey] {
        &self.bosons
    }

    pub fn fermions(&self) -> &[ModeKey] {
        &self.fermions
    }

    pub fn modes(&self) -> impl Iterator<Item = &ModeKey> {
        self.bosons.iter().chain(self.fermions.iter())
    }

    pub fn is_vacuum(&self) -> bool {
        self.bosons.is_empty() && self.fermions.is_empty()
    }

    /// Weight in units of `1/m_g`.
    pub fn weight_ticks(&self) -> i64 {
        self.modes().map(|k| -(k.ticks as i64)).sum()
    }

    /// `#φ - #ψ`, without the fermionic shift.
    pub fn fermion_charge(&self) -> i64 {
        self.fermions.iter().map(|k| k.family.charge()).sum()
    }

    /// Number of `b_0` factors in direction `dir`.
    pub fn b0_degree(&self, dir: usize) -> usize {
        self.bosons.iter().filter(|k| k.family == Family::B && k.ticks == 0 && k.dir as usize == dir).count()
    }

    pub fn has_b0(&self) -> bool {
        self.bosons.iter().any(|k| k.family == Family::B && k.ticks == 0)
    }

    /// Applies a single mode. The result is zero or a signed integer multiple
    /// of one basis state.
    pub fn apply(&self, key: ModeKey) -> Option<(i64, FockState)> {
        match (key.is_fermion(), key.is_annihilator()) {
            (false, false) => {
                let mut out = self.clone();
                let pos = out.bosons.partition_point(|k| *k <= key);
                out.bosons.insert(pos, key);
                Some((1, out))
            }
            (false, true) => {
                let partner = key.partner();
                let count = self.bosons.iter().filter(|k| **k == partner).count() as i64;
                if count == 0 {
                    return None;
                }
                let mut out = self.clone();
                let pos = out.bosons.iter().position(|k| *k == partner).unwrap();
                out.bosons.remove(pos);
                // [a_n, b_{-n}] = 1 and [b_n, a_{-n}] = -1
                let sign = if key.family == Family::A { 1 } else { -1 };
                Some((sign * count, out))
            }
            (true, false) => match self.fermions.binary_search(&key) {
                Ok(_) => None,
                Err(pos) => {
                    let mut out = self.clone();
                    out.fermions.insert(pos, key);
                    Some((if pos % 2 == 0 { 1 } else { -1 }, out))
                }
            },
            (true, true) => match self.fermions.binary_search(&key.partner()) {
                Ok(pos) => {
                    let mut out = self.clone();
                    out.fermions.remove(pos);
                    Some((if pos % 2 == 0 { 1 } else { -1 }, out))
                }
                Err(_) => None,
            },
        }
    }

    /// Renders with levels divided by `mg`.
    pub fn display(&self, mg: u32) -> String {
        if self.is_vacuum() {
            return "|0>".into();
        }
        let mut parts = Vec::new();
        for k in self.modes() {
            let level = crate::arith::fmt_rat(&crate::arith::Rat::new(k.ticks as i64, mg as i64));
            parts.push(format!("{}{}_{{{}}}", k.family, k.dir + 1, level));
        }
        format!("{}|0>", parts.join(" "))
    }
}

/// Finite linear combination of basis states with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<FockState, Q>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(state: FockState) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(state, Q::one());
        FockVector { terms }
    }

    pub fn vacuum() -> Self {
        Self::basis(FockState::vacuum())
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

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &FockState) -> Q {
        self.terms.get(s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, state: FockState, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&state) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&state);
                }
            }
            None => {
                self.terms.insert(state, c);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &FockVector, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (s, v) in &other.terms {
            self.add_term(s.clone(), v * c);
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Q::one());
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, c: &Q) -> FockVector {
        if c.is_zero() {
            return FockVector::zero();
        }
        FockVector { terms: self.terms.iter().map(|(s, v)| (s.clone(), v * c)).collect() }
    }

    /// Applies a single mode to every term.
    pub fn apply(&self, key: ModeKey) -> FockVector {
        let mut out = FockVector::zero();
        for (s, c) in &self.terms {
            if let Some((k, t)) = s.apply(key) {
                out.add_term(t, c * Q::from_integer(k.into()));
            }
        }
        out
    }

    pub fn display(&self, mg: u32) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|(s, c)| format!("{}*{}", fmt_q(c), s.display(mg))).collect();
        parts.join(" + ")
    }
}

impl FromIterator<(FockState, Q)> for FockVector {
    fn from_iter<I: IntoIterator<Item = (FockState, Q)>>(iter: I) -> Self {
        let mut out = FockVector::zero();
        for (s, c) in iter {
            out.add_term(s, c);
        }
        out
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(1))
    }
}
