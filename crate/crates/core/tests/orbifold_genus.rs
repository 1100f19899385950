use cdr_core::arith::{Cyclotomic, Rat};
use cdr_core::genus::{ell_orb, ell_orb_via_traces, lefschetz_table, sector_contribution};
use cdr_core::orbifold::{bundled_input, cr_poincare, fermionic_shift, parse_orbifold_input, CrPolynomial, OrbifoldInput};
use proptest::prelude::*;
use serde_json::{json, Value};

fn frac(a: usize, n: usize) -> String {
    format!("{}/{}", a % n, n)
}

/// P¹ with `Z/n` acting by `z ↦ e^{2πi/n} z`, fixed points `0` and `∞`.
fn p1_mod_zn(n: usize) -> OrbifoldInput {
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let line = |lambda: String, zeta: String, w: i64, tangent: bool| json!({"lambda": lambda, "zeta": zeta, "w": w, "tangent": tangent});
    let mut p1_loc = serde_json::Map::new();
    let mut p1_chars = serde_json::Map::new();
    for h in 0..n {
        let pts = if h == 0 {
            json!([{"point": "0", "lines": [line("0".into(), "0".into(), 1, true)]},
                   {"point": "inf", "lines": [line("0".into(), "0".into(), -1, true)]}])
        } else {
            json!([{"point": "0", "lines": [line("0".into(), frac(h, n), 0, true)]},
                   {"point": "inf", "lines": [line("0".into(), frac(n - h, n), 0, true)]}])
        };
        p1_loc.insert(h.to_string(), pts);
        p1_chars.insert(h.to_string(), json!([1, 0, 1]));
    }
    let mut classes = vec![json!({"rep": 0, "components": [{
        "name": "P1", "mg": 1, "exponents": [0],
        "cohomology": {"characters": p1_chars}, "localization": p1_loc
    }]})];
    for g in 1..n {
        let point = |name: &str, m: usize| {
            let mut loc = serde_json::Map::new();
            let mut chars = serde_json::Map::new();
            for h in 0..n {
                let zeta = if name == "0" { frac(h, n) } else { frac(n - h, n) };
                loc.insert(h.to_string(), json!([{"point": name, "lines": [line(frac(m, n), zeta, 0, false)]}]));
                chars.insert(h.to_string(), json!([1]));
            }
            json!({"name": name, "mg": n, "exponents": [m], "cohomology": {"characters": chars}, "localization": loc})
        };
        classes.push(json!({"rep": g, "components": [point("0", g), point("inf", n - g)]}));
    }
    let v: Value = json!({"dim": 1, "group": {"order": n, "table": table}, "classes": classes});
    parse_orbifold_input(&v.to_string()).unwrap()
}

fn r(n: i64) -> Rat {
    Rat::from_integer(n)
}

#[test]
fn bundled_p1_z2_shape() {
    let input = parse_orbifold_input(bundled_input("p1_z2.json").unwrap()).unwrap();
    assert_eq!(input.classes.len(), 2);
    assert_eq!(input.components().count(), 3);
    assert!(input.warnings.is_empty());
    assert_eq!(input, p1_mod_zn(2));
}

#[test]
fn point_with_trivial_group() {
    let v = json!({"dim": 0, "group": {"order": 1, "table": [[0]]}, "classes": [{"rep": 0, "components": [{
        "name": "pt", "mg": 1, "exponents": [],
        "cohomology": {"characters": {"0": [1]}}, "localization": {"0": [{"point": "pt", "lines": []}]}
    }]}]});
    let input = parse_orbifold_input(&v.to_string()).unwrap();
    let one = cdr_core::arith::QYSeries::one(r(2));
    assert_eq!(ell_orb(&input, r(2)).unwrap(), one);
    assert_eq!(ell_orb_via_traces(&input, r(2)).unwrap(), one);
    assert_eq!(cr_poincare(&input).unwrap(), CrPolynomial([(r(0), 1)].into_iter().collect()));
}

#[test]
fn twisted_sector_of_p1_z2() {
    let input = p1_mod_zn(2);
    let s = sector_contribution(&input, 1, r(0)).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s.coeff(r(0), Rat::new(1, 2)), Cyclotomic::from_int(2));
}

#[test]
fn s3_representatives_agree() {
    let input = parse_orbifold_input(bundled_input("p1_s3.json").unwrap()).unwrap();
    let cr = cr_poincare(&input).unwrap();
    let genus = ell_orb(&input, r(1)).unwrap();
    assert_eq!(genus, ell_orb_via_traces(&input, r(1)).unwrap());
    for k in 0..input.classes.len() {
        for h in 0..input.group.order() {
            let alt = input.with_representative(k, h);
            assert_eq!(cr_poincare(&alt).unwrap(), cr);
            assert_eq!(ell_orb(&alt, r(1)).unwrap(), genus);
            let shifts = |i: &OrbifoldInput| i.classes[k].components.iter().map(fermionic_shift).collect::<Vec<_>>();
            assert_eq!(shifts(&alt), shifts(&input));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn cyclic_quotients_of_p1(n in 2usize..=6) {
        let input = p1_mod_zn(n);
        let mut want = CrPolynomial([(r(0), 1), (r(2), 1)].into_iter().collect());
        for j in 1..n {
            want.add_term(Rat::new(2 * j as i64, n as i64), 2);
        }
        prop_assert_eq!(cr_poincare(&input).unwrap(), want);
        let q = r(1);
        let a = ell_orb(&input, q).unwrap();
        prop_assert_eq!(a.first_difference(&ell_orb_via_traces(&input, q).unwrap()), None);
        prop_assert!(a.terms().all(|(_, _, c)| c.is_rational_integer()));
        for e in lefschetz_table(&input, q).unwrap() {
            prop_assert!(e.element == 0 || e.number.is_t_independent(), "{} {}", e.component, e.element);
        }
    }
}
