//! Creation-mode monomials of the fiber Fock space, enumerated directly.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    A,
    B,
    Psi,
    Phi,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NaiveState {
    pub weight: Rat,
    /// `#φ - #ψ`, without any vacuum shift.
    pub charge: i64,
    /// Per direction, `#a + #ψ - #b - #φ`: the state lies in `T^{⊗d}` of that line.
    pub degree: Vec<i64>,
}

/// Creation modes of one line with eigenvalue exponent `lambda`, as
/// `(weight, kind)`, of weight at most `q_max`. No `b_0`.
fn creation_modes(lambda: Rat, q_max: Rat) -> Vec<(Rat, Kind)> {
    let mut out = Vec::new();
    let one = Rat::from_integer(1);
    let mut k = one;
    while k - one + lambda <= q_max || k - lambda <= q_max {
        // a, ψ at level λ - k; b, φ at level -λ - (k - 1).
        let high = k - lambda;
        let low = k - one + lambda;
        if high <= q_max {
            out.push((high, Kind::A));
            out.push((high, Kind::Psi));
        }
        if low <= q_max {
            if !low.is_zero() {
                out.push((low, Kind::B));
            }
            out.push((low, Kind::Phi));
        }
        k += one;
    }
    out
}

/// All creation monomials of weight `<= q_max` on lines with the given
/// eigenvalue exponents.
pub fn fiber_states(lambdas: &[Rat], q_max: Rat) -> Vec<NaiveState> {
    let modes: Vec<(usize, Rat, Kind)> =
        lambdas.iter().enumerate().flat_map(|(d, &l)| creation_modes(l, q_max).into_iter().map(move |(w, k)| (d, w, k))).collect();
    let mut out = Vec::new();
    let start = NaiveState { weight: Rat::zero(), charge: 0, degree: vec![0; lambdas.len()] };
    extend(&modes, 0, q_max, start, &mut out);
    out.sort();
    out
}

fn extend(modes: &[(usize, Rat, Kind)], i: usize, q_max: Rat, cur: NaiveState, out: &mut Vec<NaiveState>) {
    if i == modes.len() {
        out.push(cur);
        return;
    }
    let (dir, w, kind) = modes[i];
    let max_mult = match kind {
        Kind::Psi | Kind::Phi => 1,
        Kind::A | Kind::B => ((q_max - cur.weight) / w).floor().to_integer(),
    };
    let mut s = cur;
    for mult in 0..=max_mult {
        if s.weight > q_max {
            break;
        }
        extend(modes, i + 1, q_max, s.clone(), out);
        if mult == max_mult {
            break;
        }
        s.weight += w;
        match kind {
            Kind::A => s.degree[dir] += 1,
            Kind::Psi => {
                s.degree[dir] += 1;
                s.charge -= 1;
            }
            Kind::B => s.degree[dir] -= 1,
            Kind::Phi => {
                s.degree[dir] -= 1;
                s.charge += 1;
            }
        }
    }
}

/// `Σ q^{weight} y^{charge + Σλ}` over [`fiber_states`].
pub fn fiber_character(lambdas: &[Rat], q_max: Rat) -> BTreeMap<(Rat, Rat), i64> {
    let iota: Rat = lambdas.iter().sum();
    let mut out = BTreeMap::new();
    for s in fiber_states(lambdas, q_max) {
        *out.entry((s.weight, Rat::from_integer(s.charge) + iota)).or_insert(0) += 1;
    }
    out
}
