//! The invariant suite behind `cdr selftest`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cdr_core::arith::{Cyclotomic, LaurentPoly, Rat};
use cdr_core::brst::{cohomology_table, d_squared_check, homotopy_identity_check};
use cdr_core::fields::{bracket_suite, vector_field_suite};
use cdr_core::fock::{canonical_relations_check, product_character, FockModule, TwistData};
use cdr_core::genus::{ell_orb, ell_orb_via_traces, lefschetz_table, localized_sum};
use cdr_core::orbifold::{bundled_input, cr_poincare, parse_orbifold_input, CrPolynomial, OrbifoldInput};

use crate::report::Report;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn r(n: i64) -> Rat {
    Rat::from_integer(n)
}

fn half(n: i64) -> Rat {
    Rat::new(n, 2)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn twists() -> Vec<TwistData> {
    ["0/1", "0,0/1", "1/2", "1/3", "0,1/2", "1,2/3"].iter().map(|s| s.parse().expect("valid twist")).collect()
}

fn bundled(name: &str) -> Result<OrbifoldInput, String> {
    parse_orbifold_input(bundled_input(name).ok_or("missing bundled input")?).map_err(err)
}

fn relations() -> Outcome {
    let mut pairs = 0;
    for t in twists() {
        let rep = canonical_relations_check(&FockModule::new(t.clone()), half(3), Some(1), r(2)).map_err(err)?;
        if !rep.passed() {
            return Err(format!("{t}: {rep}"));
        }
        pairs += rep.pairs;
    }
    Ok(format!("{pairs} mode pairs"))
}

fn brackets() -> Outcome {
    let mut n = 0;
    for t in twists() {
        for c in bracket_suite(&Arc::new(FockModule::new(t.clone())), r(2), 2).map_err(err)? {
            if !c.passed() {
                return Err(format!("{t}: {c}"));
            }
            n += c.instances;
        }
    }
    Ok(format!("{n} mode pairs"))
}

fn brst() -> Outcome {
    for t in twists() {
        let m = Arc::new(FockModule::new(t.clone()));
        let d2 = d_squared_check(&m, r(2), Some(1)).map_err(err)?;
        let h = homotopy_identity_check(&m, r(2), Some(1)).map_err(err)?;
        if !d2.passed() || !h.holds() || h.sign != -1 {
            return Err(format!("{t}: {d2}; homotopy sign {} failure {:?}", h.sign, h.failure));
        }
    }
    Ok("d^2 = 0, {G_0, Q_0} = L_0".into())
}

fn cohomology(t: &TwistData, w: Rat) -> Result<(), String> {
    let c = cohomology_table(&Arc::new(FockModule::new(t.clone())), w, None).map_err(err)?;
    let want = 1usize << t.fixed_directions();
    if c.concentrated_in_weight_zero() && c.total() == want {
        Ok(())
    } else {
        Err(format!("{t}: support {:?}, expected {want} at weight 0", c.support()))
    }
}

fn character(t: &TwistData, q: Rat) -> Result<(), String> {
    let a = FockModule::new(t.clone()).character(q, false).map_err(err)?;
    let b = product_character(t, q).map_err(err)?;
    match a.first_difference(&b) {
        None => Ok(()),
        Some((q, y)) => Err(format!("{t}: differs from the product at q^{q} y^{y}")),
    }
}

fn weight_zero() -> Outcome {
    twists().iter().try_for_each(|t| cohomology(t, half(3)))?;
    Ok("dimension 2^#fixed".into())
}

fn characters() -> Outcome {
    twists().iter().try_for_each(|t| character(t, r(2)))?;
    Ok("up to q^2".into())
}

fn vector_fields() -> Outcome {
    let mut n = 0;
    for t in twists() {
        let c = vector_field_suite(&Arc::new(FockModule::new(t.clone())), r(2), 2, 2).map_err(err)?;
        if !c.passed() {
            return Err(format!("{t}: {c}"));
        }
        n += c.instances;
    }
    Ok(format!("{n} vector-field pairs"))
}

fn chen_ruan() -> Outcome {
    let p = cr_poincare(&bundled("p1_z2.json")?).map_err(err)?;
    if p != CrPolynomial([(r(0), 1), (r(1), 2), (r(2), 1)].into_iter().collect()) {
        return Err(format!("P1/Z2 gives {p}"));
    }
    let s3 = bundled("p1_s3.json")?;
    let base = cr_poincare(&s3).map_err(err)?;
    for k in 0..s3.classes.len() {
        for h in 0..s3.group.order() {
            if cr_poincare(&s3.with_representative(k, h)).map_err(err)? != base {
                return Err(format!("P1/S3 class {k} conjugated by {h}"));
            }
        }
    }
    Ok(format!("P1/Z2: {p}; P1/S3: {base}"))
}

fn genus() -> Outcome {
    let input = bundled("p1_z2.json")?;
    let a = ell_orb(&input, r(2)).map_err(err)?;
    let b = ell_orb_via_traces(&input, r(2)).map_err(err)?;
    if let Some((q, y)) = a.first_difference(&b) {
        return Err(format!("paths differ at q^{q} y^{y}"));
    }
    let q0 = a.truncate(r(0)).to_string();
    if q0 != "y^(-1/2) + 2 - y^(1/2)" {
        return Err(format!("q^0 coefficient {q0}"));
    }
    Ok(format!("paths agree, q^0: {q0}"))
}

fn localization() -> Outcome {
    let t = |k: i64| LaurentPoly::monomial(Cyclotomic::from_int(1), k);
    let den = |w: i64| LaurentPoly::one().sub(&t(-w));
    let chi = |k: i64| localized_sum(&[(t(k), den(1)), (t(-k), den(-1))]).is_constant();
    match (chi(0), chi(-1)) {
        (Some(o), Some(w)) if o == Cyclotomic::from_int(1) && w == Cyclotomic::from_int(-1) => Ok("chi(O) = 1, chi(O(-2)) = -1".into()),
        (o, w) => Err(format!("chi(O) = {o:?}, chi(O(-2)) = {w:?}")),
    }
}

fn sampled(seed: u64, samples: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts: Vec<TwistData> = (0..samples)
        .map(|_| {
            let n = rng.gen_range(1..=2);
            let mg = rng.gen_range(1..=4);
            TwistData::new((0..n).map(|_| rng.gen_range(0..mg)).collect(), mg).expect("exponents in range")
        })
        .collect();
    ts.iter().try_for_each(|t| character(t, half(3)).and_then(|_| cohomology(t, r(1))))?;
    Ok(ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "))
}

pub fn run(seed: u64, samples: usize) -> Report {
    let checks: [(&str, Check); 9] = [
        ("relations", relations),
        ("brackets", brackets),
        ("brst", brst),
        ("weight-zero cohomology", weight_zero),
        ("characters", characters),
        ("vector fields", vector_fields),
        ("chen-ruan", chen_ruan),
        ("genus", genus),
        ("localization", localization),
    ];
    let mut rep = Report::default();
    let mut results = Vec::new();
    let mut record = |rep: &mut Report, name: &str, o: Outcome| {
        match &o {
            Ok(d) => rep.line(format!("ok    {name} ({d})")),
            Err(d) => {
                rep.line(format!("FAIL  {name}: {d}"));
                rep.fail();
            }
        }
        results.push(json!({"check": name, "ok": o.is_ok(), "detail": o.unwrap_or_else(|e| e)}));
    };
    for (name, f) in checks {
        record(&mut rep, name, f());
    }
    record(&mut rep, &format!("sampled twists (seed {seed})"), sampled(seed, samples));
    let info = bundled("p1_z2.json")
        .and_then(|i| lefschetz_table(&i, r(2)).map_err(err))
        .map(|t| t.iter().filter(|e| !e.number.is_t_independent()).map(|e| e.number.t_dependent.len()).sum::<usize>());
    match info {
        Ok(0) => rep.line("info  every localization sum on P1/Z2 is t-independent"),
        Ok(k) => rep.line(format!("info  {k} localization coefficients on P1/Z2 depend on t (evaluated at t = 1)")),
        Err(e) => rep.line(format!("info  localization table unavailable: {e}")),
    }
    let passed = results.iter().filter(|v| v["ok"] == Value::Bool(true)).count();
    rep.line(format!("selftest: {passed} of {} checks pass", results.len()));
    rep.set("seed", json!(seed));
    rep.set("checks", Value::Array(results));
    rep
}
