//! Modes of normally ordered products.
//!
//! With `X(z) = Σ X_l z^{-l-h_X}`, the derivative `∂^d X` has mode coefficient
//! `(-l-h_X)(-l-h_X-1)...` (`d` factors) in front of `X_l`. The `n`-th mode of
//! a product term is the sum over level splittings `l_1 + ... + l_k = n` of
//! the mode monomial with creation modes moved left and annihilation modes
//! moved right, each fermionic transposition contributing a sign.

use num_traits::Zero;

use super::{FieldExpr, FieldTerm};
use crate::arith::{falling_factorial, q_from_int, Rat, Q};
use crate::fock::{FockModule, FockState, FockVector, ModeKey};

/// `F_n v`, exact on any vector.
pub fn apply_field_mode(field: &FieldExpr, n: Rat, module: &FockModule, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    let mg = module.mg() as i64;
    let t = n * Rat::from_integer(mg);
    if !t.is_integer() {
        return out;
    }
    let n_ticks = t.to_integer();
    for (state, c) in v.iter() {
        for term in field.terms() {
            let img = apply_term(term, n_ticks, module, state);
            out.add_assign_scaled(&img, c);
        }
        if n_ticks == 0 && !field.anomaly().is_zero() {
            out.add_term(state.clone(), c * field.anomaly());
        }
    }
    out
}

fn apply_term(term: &FieldTerm, n_ticks: i64, module: &FockModule, state: &FockState) -> FockVector {
    let mut out = FockVector::zero();
    let w = state.weight_ticks();
    if w - n_ticks < 0 || term.factors.is_empty() {
        return out;
    }
    let k = term.factors.len();
    // Candidate levels for every factor but the last.
    let mut candidates: Vec<Vec<i64>> = Vec::with_capacity(k - 1);
    for f in &term.factors[..k - 1] {
        if f.dir >= module.n() {
            return out;
        }
        let mut c = Vec::new();
        let mut t = module.top_creation_ticks(f.family, f.dir);
        while t >= n_ticks - w {
            c.push(t);
            t -= module.mg() as i64;
        }
        for m in state.modes() {
            if m.dir as usize == f.dir && m.family == f.family.partner() {
                let lvl = -(m.ticks as i64);
                if f.family.annihilates_at(lvl) && !c.contains(&lvl) {
                    c.push(lvl);
                }
            }
        }
        if c.is_empty() {
            return out;
        }
        candidates.push(c);
    }
    let last = term.factors[k - 1];
    if last.dir >= module.n() {
        return out;
    }
    let mut levels = vec![0i64; k];
    let mut idx = vec![0usize; k - 1];
    loop {
        let mut sum = 0;
        for j in 0..k - 1 {
            levels[j] = candidates[j][idx[j]];
            sum += levels[j];
        }
        levels[k - 1] = n_ticks - sum;
        if module.on_lattice(last.family, last.dir, levels[k - 1]) {
            if let Some((c, s)) = ordered_monomial(term, &levels, module, state) {
                out.add_term(s, c);
            }
        }
        // odometer
        let mut j = 0;
        loop {
            if j == k - 1 {
                return out;
            }
            idx[j] += 1;
            if idx[j] < candidates[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// One normally ordered mode monomial applied to a basis state.
fn ordered_monomial(term: &FieldTerm, levels: &[i64], module: &FockModule, state: &FockState) -> Option<(Q, FockState)> {
    let mg = module.mg() as i64;
    let keys: Vec<ModeKey> = term.factors.iter().zip(levels).map(|(f, &t)| ModeKey::new(f.dir, f.family, t)).collect();
    // Fermionic sign of moving annihilators past later creators.
    let mut sign = 1i64;
    for i in 0..keys.len() {
        if keys[i].is_fermion() && keys[i].is_annihilator() {
            for kj in &keys[i + 1..] {
                if kj.is_fermion() && !kj.is_annihilator() {
                    sign = -sign;
                }
            }
        }
    }
    let mut coeff = 1i64;
    let mut cur = state.clone();
    let order = keys.iter().filter(|k| k.is_annihilator()).rev().chain(keys.iter().filter(|k| !k.is_annihilator()).rev());
    for key in order {
        let (c, next) = cur.apply(*key)?;
        coeff *= c;
        cur = next;
    }
    let mut q = q_from_int(sign * coeff);
    for (f, &t) in term.factors.iter().zip(levels) {
        if f.deriv > 0 {
            let x = Q::new((-t - f.family.field_weight() * mg).into(), mg.into());
            q *= falling_factorial(&x, f.deriv);
        }
    }
    if q.is_zero() {
        return None;
    }
    Some((q * &term.coeff, cur))
}
