//! Line bundles on `P^1` through Čech monomial bases on the two standard
//! charts, with `z ↦ ω z` acting on the coordinate `z` of the chart at 0.

use std::collections::BTreeMap;

/// `χ(P^1, O(n))`: sections `z^i` with `0 <= i <= n`, classes `z^i` with
/// `n < i < 0`.
pub fn euler_characteristic(n: i64) -> i64 {
    let h0 = (0..=n).count() as i64;
    let h1 = ((n + 1)..0).count() as i64;
    h0 - h1
}

/// Alternating trace of `z ↦ ω z` on `H^*(P^1, T^{⊗k})` as a map from powers
/// of `ω` to signed multiplicities. `z^i ∂_z^k` has eigenvalue `ω^{k - i}`.
pub fn tensor_power_trace(k: i64) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for i in 0..=2 * k {
        *out.entry(k - i).or_insert(0) += 1;
    }
    for i in (2 * k + 1)..0 {
        *out.entry(k - i).or_insert(0) -= 1;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// [`tensor_power_trace`] at `ω = ±1`.
pub fn tensor_power_trace_at_sign(k: i64, omega: i64) -> i64 {
    tensor_power_trace(k).iter().map(|(e, c)| c * omega.pow(e.unsigned_abs() as u32)).sum()
}
