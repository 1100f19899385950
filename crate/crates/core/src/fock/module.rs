use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};

use super::state::{FockState, FockVector, ModeKey};
use super::{Family, FockError, Mode, TwistData};
use crate::arith::{fmt_rat, product_expand, Cyclotomic, ProductFactor, QYSeries, Rat};

/// Grading block `(weight, charge)`.
pub type Block = (Rat, Rat);

/// Truncated basis of a Fock module, sorted by `(weight, charge, state)`.
#[derive(Debug)]
pub struct Basis {
    mg: u32,
    w_max_ticks: i64,
    b0_cap: Option<u32>,
    iota: Rat,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
    blocks: BTreeMap<Block, Range<usize>>,
}

impl Basis {
    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &FockState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn blocks(&self) -> &BTreeMap<Block, Range<usize>> {
        &self.blocks
    }

    pub fn block(&self, b: &Block) -> &[FockState] {
        match self.blocks.get(b) {
            Some(r) => &self.states[r.clone()],
            None => &[],
        }
    }

    pub fn w_max(&self) -> Rat {
        Rat::new(self.w_max_ticks, self.mg as i64)
    }

    pub fn b0_cap(&self) -> Option<u32> {
        self.b0_cap
    }

    /// Whether a state lies in this truncation.
    pub fn contains(&self, s: &FockState) -> bool {
        self.index.contains_key(s)
    }

    pub fn weight(&self, s: &FockState) -> Rat {
        Rat::new(s.weight_ticks(), self.mg as i64)
    }

    pub fn charge(&self, s: &FockState) -> Rat {
        Rat::from_integer(s.fermion_charge()) + self.iota
    }
}

type CacheKey = (i64, Option<u32>);

/// A Fock module for fixed twist data together with a basis cache.
#[derive(Debug)]
pub struct FockModule {
    twist: TwistData,
    cache: RwLock<HashMap<CacheKey, Arc<Basis>>>,
}

impl Clone for FockModule {
    fn clone(&self) -> Self {
        FockModule::new(self.twist.clone())
    }
}

impl FockModule {
    pub fn new(twist: TwistData) -> Self {
        FockModule { twist, cache: RwLock::new(HashMap::new()) }
    }

    pub fn untwisted(n: usize) -> Self {
        Self::new(TwistData::identity(n))
    }

    pub fn twist(&self) -> &TwistData {
        &self.twist
    }

    pub fn n(&self) -> usize {
        self.twist.n()
    }

    pub fn mg(&self) -> u32 {
        self.twist.mg()
    }

    pub fn iota(&self) -> Rat {
        self.twist.iota()
    }

    /// Residue of `ticks` modulo `m_g` required for a family in a direction.
    fn residue(&self, family: Family, dir: usize) -> i64 {
        let mg = self.mg() as i64;
        let m = self.twist.exponent(dir) as i64;
        if family.on_positive_lattice() {
            m.rem_euclid(mg)
        } else {
            (-m).rem_euclid(mg)
        }
    }

    pub fn on_lattice(&self, family: Family, dir: usize, ticks: i64) -> bool {
        dir < self.n() && ticks.rem_euclid(self.mg() as i64) == self.residue(family, dir)
    }

    /// Lowest creation level of a family in a direction, in ticks (i.e. the
    /// creation level of largest value).
    pub fn top_creation_ticks(&self, family: Family, dir: usize) -> i64 {
        let mg = self.mg() as i64;
        let r = self.residue(family, dir);
        match family {
            Family::A | Family::Psi => r - mg,
            Family::B | Family::Phi => {
                if r == 0 {
                    0
                } else {
                    r - mg
                }
            }
        }
    }

    /// Converts a mode to its internal key, checking the level lattice.
    pub fn key(&self, mode: &Mode) -> Result<ModeKey, FockError> {
        if mode.dir >= self.n() {
            return Err(FockError::BadDirection { dir: mode.dir, n: self.n() });
        }
        let t = mode.level * Rat::from_integer(self.mg() as i64);
        if !t.is_integer() || !self.on_lattice(mode.family, mode.dir, t.to_integer()) {
            return Err(FockError::WrongLattice { mode: mode.to_string() });
        }
        Ok(ModeKey::new(mode.dir, mode.family, t.to_integer()))
    }

    pub fn level(&self, key: &ModeKey) -> Rat {
        Rat::new(key.ticks as i64, self.mg() as i64)
    }

    pub fn apply_mode(&self, mode: &Mode, v: &FockVector) -> Result<FockVector, FockError> {
        Ok(v.apply(self.key(mode)?))
    }

    /// Creation state `X_{n_1} ... X_{n_k}|0>` built by applying the modes
    /// right to left.
    pub fn create(&self, modes: &[Mode]) -> Result<FockVector, FockError> {
        let mut v = FockVector::vacuum();
        for m in modes.iter().rev() {
            v = self.apply_mode(m, &v)?;
        }
        Ok(v)
    }

    pub fn state_weight(&self, s: &FockState) -> Rat {
        Rat::new(s.weight_ticks(), self.mg() as i64)
    }

    pub fn state_charge(&self, s: &FockState) -> Rat {
        Rat::from_integer(s.fermion_charge()) + self.iota()
    }

    /// Complete basis up to weight `w_max`. With `b0_cap = Some(c)` the
    /// sector with at most `c` factors of `b_0^i` per direction is included;
    /// `None` is the sector without `b_0`.
    pub fn basis_up_to(&self, w_max: Rat, b0_cap: Option<u32>) -> Result<Arc<Basis>, FockError> {
        if w_max.is_negative() {
            return Err(FockError::NegativeWeight(fmt_rat(&w_max)));
        }
        let w_ticks = (w_max * Rat::from_integer(self.mg() as i64)).floor().to_integer();
        let b0_cap = b0_cap.filter(|&c| c > 0);
        let key = (w_ticks, b0_cap);
        if let Some(b) = self.cache.read().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let basis = Arc::new(self.enumerate(w_ticks, b0_cap));
        let mut cache = self.cache.write().unwrap();
        Ok(cache.entry(key).or_insert(basis).clone())
    }

    /// Creation modes of weight at most `w_ticks`, in canonical order.
    fn creation_keys(&self, w_ticks: i64, with_b0: bool) -> Vec<ModeKey> {
        let mg = self.mg() as i64;
        let mut keys = Vec::new();
        for dir in 0..self.n() {
            for family in Family::ALL {
                let mut t = self.top_creation_ticks(family, dir);
                while -t <= w_ticks {
                    if !(family == Family::B && t == 0 && !with_b0) {
                        keys.push(ModeKey::new(dir, family, t));
                    }
                    t -= mg;
                }
            }
        }
        keys.sort();
        keys
    }

    fn enumerate(&self, w_ticks: i64, b0_cap: Option<u32>) -> Basis {
        let keys = self.creation_keys(w_ticks, b0_cap.is_some());
        let mut states = Vec::new();
        let mut bosons = Vec::new();
        let mut fermions = Vec::new();
        fill(&keys, 0, w_ticks, b0_cap.unwrap_or(0), &mut bosons, &mut fermions, &mut states);
        let iota = self.iota();
        let mg = self.mg() as i64;
        let grade = |s: &FockState| (Rat::new(s.weight_ticks(), mg), Rat::from_integer(s.fermion_charge()) + iota);
        states.sort_by(|a, b| grade(a).cmp(&grade(b)).then_with(|| a.cmp(b)));
        let mut blocks: BTreeMap<Block, Range<usize>> = BTreeMap::new();
        for (i, s) in states.iter().enumerate() {
            blocks.entry(grade(s)).and_modify(|r| r.end = i + 1).or_insert(i..i + 1);
        }
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Basis { mg: self.mg(), w_max_ticks: w_ticks, b0_cap, iota, states, index, blocks }
    }

    /// Fock-basis character `Σ q^weight y^charge` over the sector without
    /// `b_0`, truncated at `q_max`.
    pub fn character(&self, q_max: Rat, include_b0: bool) -> Result<QYSeries<Cyclotomic>, FockError> {
        if include_b0 {
            return Err(FockError::UnsupportedB0Character);
        }
        let basis = self.basis_up_to(q_max, None)?;
        let mut s = QYSeries::zero(q_max);
        for st in basis.states() {
            s.add_term(basis.weight(st), basis.charge(st), Cyclotomic::one());
        }
        Ok(s)
    }
}

fn fill(
    keys: &[ModeKey],
    idx: usize,
    budget: i64,
    b0_cap: u32,
    bosons: &mut Vec<ModeKey>,
    fermions: &mut Vec<ModeKey>,
    out: &mut Vec<FockState>,
) {
    if idx == keys.len() {
        out.push(FockState::from_sorted(bosons.clone(), fermions.clone()));
        return;
    }
    let key = keys[idx];
    let cost = -(key.ticks as i64);
    if key.is_fermion() {
        fill(keys, idx + 1, budget, b0_cap, bosons, fermions, out);
        if cost <= budget {
            fermions.push(key);
            fill(keys, idx + 1, budget - cost, b0_cap, bosons, fermions, out);
            fermions.pop();
        }
        return;
    }
    let max_mult = if cost == 0 { b0_cap as i64 } else { budget / cost };
    for mult in 0..=max_mult {
        fill(keys, idx + 1, budget - mult * cost, b0_cap, bosons, fermions, out);
        bosons.push(key);
    }
    bosons.truncate(bosons.len() - (max_mult as usize + 1));
}

/// The character as an infinite product, expanded to `q_max`. Directions with
/// `λ = 0` contribute `∏ (1+y q^{k-1})(1+y^{-1} q^k)(1-q^k)^{-2}`, twisted ones
/// `∏ (1+y q^{k-1+λ})(1+y^{-1} q^{k-λ})(1-q^{k-1+λ})^{-1}(1-q^{k-λ})^{-1}`, and
/// the whole product is multiplied by `y^ι`.
pub fn product_character(twist: &TwistData, q_max: Rat) -> Result<QYSeries<Cyclotomic>, crate::arith::SeriesError> {
    let one = Cyclotomic::one;
    let (y, yinv, y0) = (Rat::from_integer(1), Rat::from_integer(-1), Rat::zero());
    let mut factors = Vec::new();
    for dir in 0..twist.n() {
        let lam = twist.lambda(dir);
        let mut k = 1i64;
        loop {
            let kk = Rat::from_integer(k);
            let low = kk - 1 + lam;
            if low > q_max && kk - lam > q_max {
                break;
            }
            factors.push(ProductFactor::exterior(low, y, one(), 1));
            factors.push(ProductFactor::exterior(kk - lam, yinv, one(), 1));
            if lam.is_zero() {
                factors.push(ProductFactor::symmetric(kk, y0, one(), 2));
            } else {
                factors.push(ProductFactor::symmetric(low, y0, one(), 1));
                factors.push(ProductFactor::symmetric(kk - lam, y0, one(), 1));
            }
            k += 1;
        }
    }
    Ok(product_expand(&factors, q_max)?.shift_y(twist.iota()))
}
