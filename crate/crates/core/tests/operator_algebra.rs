use std::sync::Arc;

use cdr_core::arith::{q_from_int, Rat};
use cdr_core::brst::{brst_operator, cohomology_table, d_squared_check, homotopy_identity_check};
use cdr_core::fields::{bracket_suite, field_mode_operator, operator_bracket, twisted_standard_fields, vector_field_suite};
use cdr_core::fock::{FockModule, TwistData};
use proptest::prelude::*;

fn twist() -> impl Strategy<Value = TwistData> {
    (1usize..=2, 1u32..=3).prop_flat_map(|(n, mg)| proptest::collection::vec(0..mg, n).prop_map(move |ms| TwistData::new(ms, mg).unwrap()))
}

fn r(n: i64) -> Rat {
    Rat::from_integer(n)
}

#[test]
fn j_level_is_n() {
    for n in 1..=2 {
        let t = TwistData::identity(n);
        let m = Arc::new(FockModule::new(t.clone()));
        let j = twisted_standard_fields(&t).j;
        let w = r(2);
        let jp = field_mode_operator(&j, r(1), &m, w).unwrap();
        let jm = field_mode_operator(&j, r(-1), &m, w - r(1)).unwrap();
        let br = operator_bracket(&jp, &jm).unwrap();
        let id = cdr_core::fields::OperatorMatrix::identity(&m, w - r(1), None).unwrap();
        assert_eq!(br.first_mismatch(&id.scale(&q_from_int(n as i64))), None);
    }
}

#[test]
fn differential_is_minus_q0() {
    let t: TwistData = "1/2".parse().unwrap();
    let m = Arc::new(FockModule::new(t.clone()));
    let d = brst_operator(&m, Rat::new(3, 2), None).unwrap();
    let q0 = field_mode_operator(&twisted_standard_fields(&t).q, r(0), &m, Rat::new(3, 2)).unwrap();
    assert_eq!(d.first_mismatch(&q0.scale(&q_from_int(-1))), None);
    assert!(!d.is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn brst_structure(t in twist()) {
        let m = Arc::new(FockModule::new(t.clone()));
        let w = r(1);
        prop_assert!(d_squared_check(&m, w, Some(1)).unwrap().passed());
        let h = homotopy_identity_check(&m, w, Some(1)).unwrap();
        prop_assert!(h.holds());
        prop_assert_eq!(h.sign, -1);
        let c = cohomology_table(&m, Rat::new(3, 2), None).unwrap();
        prop_assert!(c.concentrated_in_weight_zero());
        prop_assert_eq!(c.total(), 1usize << t.fixed_directions());
    }

    #[test]
    fn brackets_and_vector_fields(t in twist()) {
        let m = Arc::new(FockModule::new(t.clone()));
        for c in bracket_suite(&m, Rat::new(3, 2), 1).unwrap() {
            prop_assert!(c.passed(), "{}", c);
        }
        let v = vector_field_suite(&m, r(1), 2, 1).unwrap();
        prop_assert!(v.passed(), "{}", v);
    }
}
