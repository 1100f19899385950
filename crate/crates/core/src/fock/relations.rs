//! The canonical (anti)commutation relations checked on basis vectors.

use std::fmt;

use rayon::prelude::*;

use super::{Family, FockError, FockModule, FockVector, ModeKey};
use crate::arith::{fmt_rat, q_from_int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationsReport {
    pub modes: usize,
    pub pairs: usize,
    pub vectors: usize,
    pub failure: Option<String>,
}

impl RelationsReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.pairs > 0 && self.vectors > 0
    }
}

impl fmt::Display for RelationsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} modes, {} pairs, {} basis vectors", self.modes, self.pairs, self.vectors)?;
        if let Some(m) = &self.failure {
            write!(f, ": {m}")?;
        }
        Ok(())
    }
}

/// `[X, Y]_± = δ` value expected for two mode keys.
fn expected(x: &ModeKey, y: &ModeKey) -> i64 {
    if x.dir != y.dir || x.ticks + y.ticks != 0 || x.family.partner() != y.family {
        return 0;
    }
    match x.family {
        Family::B => -1,
        _ => 1,
    }
}

/// Checks `[a_n, b_m] = δ_{n,-m}`, `{ψ_n, φ_m} = δ_{n,-m}` and the vanishing
/// of every other (anti)commutator, for all modes with `|level| <= max_level`,
/// on every basis vector of weight `<= w_max`.
pub fn canonical_relations_check(
    module: &FockModule,
    w_max: Rat,
    b0_cap: Option<u32>,
    max_level: Rat,
) -> Result<RelationsReport, FockError> {
    let basis = module.basis_up_to(w_max, b0_cap)?;
    let mg = module.mg() as i64;
    let top = (max_level * Rat::from_integer(mg)).floor().to_integer();
    let mut keys = Vec::new();
    for dir in 0..module.n() {
        for family in Family::ALL {
            for t in -top..=top {
                if module.on_lattice(family, dir, t) {
                    keys.push(ModeKey::new(dir, family, t));
                }
            }
        }
    }
    let vectors: Vec<FockVector> = basis.states().iter().map(|s| FockVector::basis(s.clone())).collect();
    // images[k][i] = keys[k] applied to basis vector i
    let images: Vec<Vec<FockVector>> = keys.par_iter().map(|k| vectors.iter().map(|v| v.apply(*k)).collect()).collect();
    // [Y, X]_± = ∓[X, Y]_± and the expected value flips with it, so i <= j suffices.
    let pairs: Vec<(usize, usize)> = (0..keys.len()).flat_map(|i| (i..keys.len()).map(move |j| (i, j))).collect();
    let failure = pairs.par_iter().find_map_first(|&(i, j)| {
        let (x, y) = (keys[i], keys[j]);
        let anti = x.is_fermion() && y.is_fermion();
        let c = q_from_int(expected(&x, &y));
        (0..vectors.len()).find_map(|v| {
            let xy = images[j][v].apply(x);
            let yx = images[i][v].apply(y);
            let lhs = if anti { xy.add(&yx) } else { xy.sub(&yx) };
            if lhs == vectors[v].scale(&c) {
                return None;
            }
            let lv = |k: &ModeKey| format!("{}{}_{}", k.family.symbol(), k.dir + 1, fmt_rat(&module.level(k)));
            Some(format!("[{}, {}] on {} gives {}", lv(&x), lv(&y), basis.states()[v].display(module.mg()), lhs.display(module.mg())))
        })
    });
    Ok(RelationsReport { modes: keys.len(), pairs: pairs.len(), vectors: vectors.len(), failure })
}
