//! The orbifold elliptic genus of `P^1` modulo `z ↦ -z`, from fiber states
//! and Čech traces.
//!
//! Over the untwisted sector a fiber state of degree `d` spans a graded piece
//! isomorphic to `T^{⊗d}`, so its contribution to `L(h, ·)` is the Čech trace
//! of `h` on `T^{⊗d}`. The twisted sector consists of the two fixed points,
//! where the generator acts on every mode by `-1`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::modes::fiber_states;
use crate::p1::{tensor_power_trace, tensor_power_trace_at_sign};
use crate::Rat;

pub fn p1_mod_z2(q_max: Rat) -> BTreeMap<(Rat, Rat), Rat> {
    let half = Rat::new(1, 2);
    let mut out: BTreeMap<(Rat, Rat), Rat> = BTreeMap::new();
    let mut add = |q: Rat, y: Rat, c: Rat| {
        let e = out.entry((q, y)).or_insert_with(Rat::zero);
        *e += c;
    };
    for s in fiber_states(&[Rat::zero()], q_max) {
        let d = s.degree[0];
        let at_e: i64 = tensor_power_trace(d).values().sum();
        let at_g = tensor_power_trace_at_sign(d, -1);
        add(s.weight, Rat::from_integer(s.charge) - half, Rat::from_integer(at_e + at_g) * half);
    }
    for s in fiber_states(&[half], q_max) {
        let d = s.degree[0];
        let at_g = if d.rem_euclid(2) == 0 { 1 } else { -1 };
        // two fixed points; charge shifted by 1/2 and then by the global -1/2
        add(s.weight, Rat::from_integer(s.charge), Rat::from_integer(2 * (1 + at_g)) * half);
    }
    out.retain(|_, c| !c.is_zero());
    out
}
