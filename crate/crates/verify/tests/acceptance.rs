//! Acceptance criteria, one line each. All comparisons are exact.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use cdr_core::arith::{fmt_rat, Cyclotomic, LaurentPoly, QYSeries, Rat};
use cdr_core::brst::{cohomology_table, d_squared_check, homotopy_identity_check};
use cdr_core::fields::{apply_field_mode, bracket_suite, twisted_standard_fields, vector_field_suite};
use cdr_core::fock::{canonical_relations_check, product_character, FockModule, FockVector, TwistData};
use cdr_core::genus::{ell_orb, ell_orb_via_traces, lefschetz_table, localized_sum, sector_contribution};
use cdr_core::orbifold::{bundled_input, cr_poincare, fermionic_shift, parse_orbifold_input, CrPolynomial, OrbifoldInput};
use cdr_verify::genus::p1_mod_z2;
use cdr_verify::modes::fiber_character;
use cdr_verify::p1::{euler_characteristic, tensor_power_trace};
use num_traits::Zero;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn r(n: i64) -> Rat {
    Rat::from_integer(n)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Every nontrivial diagonal twist with `N <= 2` and `m_g <= 3`, exponents sorted.
fn twisted() -> Vec<TwistData> {
    let mut out = Vec::new();
    for mg in 2..=3u32 {
        for m in 1..mg {
            out.push(TwistData::new(vec![m], mg).unwrap());
        }
        for a in 0..mg {
            for b in a..mg {
                if a + b > 0 {
                    out.push(TwistData::new(vec![a, b], mg).unwrap());
                }
            }
        }
    }
    out
}

fn untwisted() -> Vec<TwistData> {
    vec![TwistData::identity(1), TwistData::identity(2)]
}

fn all_twists() -> Vec<TwistData> {
    untwisted().into_iter().chain(twisted()).collect()
}

fn module(t: &TwistData) -> Arc<FockModule> {
    Arc::new(FockModule::new(t.clone()))
}

fn integer_terms(s: &QYSeries<Cyclotomic>) -> Result<BTreeMap<(Rat, Rat), i64>, String> {
    s.terms()
        .map(|(q, y, c)| {
            let v = c.as_rational().filter(|v| v.is_integer()).ok_or_else(|| format!("q^{q} y^{y}: {c} is not an integer"))?;
            Ok(((q, y), i64::try_from(v.to_integer()).map_err(err)?))
        })
        .collect()
}

fn p1_z2() -> OrbifoldInput {
    parse_orbifold_input(bundled_input("p1_z2.json").unwrap()).unwrap()
}

fn p1_s3() -> OrbifoldInput {
    parse_orbifold_input(bundled_input("p1_s3.json").unwrap()).unwrap()
}

fn relations() -> Outcome {
    let (mut pairs, mut vectors) = (0, 0);
    for t in untwisted() {
        let rep = canonical_relations_check(&FockModule::new(t.clone()), r(3), Some(2), r(4)).map_err(err)?;
        ensure(rep.passed(), || format!("{t}: {rep}"))?;
        pairs += rep.pairs;
        vectors += rep.vectors;
    }
    for t in twisted() {
        let rep = canonical_relations_check(&FockModule::new(t.clone()), r(2), Some(2), r(3)).map_err(err)?;
        ensure(rep.passed(), || format!("{t}: {rep}"))?;
        pairs += rep.pairs;
        vectors += rep.vectors;
    }
    Ok(format!("{} modules, {pairs} mode pairs, {vectors} basis vectors", 2 + twisted().len()))
}

fn bracket_table() -> Outcome {
    let mut instances = 0;
    for t in all_twists() {
        let m = module(&t);
        for c in bracket_suite(&m, r(2), 2).map_err(err)? {
            ensure(c.passed(), || format!("{t}: {c}"))?;
            instances += c.instances;
        }
        let f = twisted_standard_fields(&t);
        let vac = FockVector::vacuum();
        let jj = apply_field_mode(&f.j, r(1), &m, &apply_field_mode(&f.j, r(-1), &m, &vac)).sub(&apply_field_mode(
            &f.j,
            r(-1),
            &m,
            &apply_field_mode(&f.j, r(1), &m, &vac),
        ));
        ensure(jj == vac.scale(&cdr_core::arith::q_from_int(t.n() as i64)), || format!("{t}: [J_1, J_-1]|0> = {}", jj.display(t.mg())))?;
        let ll = apply_field_mode(&f.l, r(2), &m, &apply_field_mode(&f.l, r(-2), &m, &vac));
        ensure(ll.is_zero(), || format!("{t}: L_2 L_-2 |0> = {}", ll.display(t.mg())))?;
    }
    Ok(format!("{} modules, {instances} mode pairs; [J_1, J_-1] = N, no Virasoro central term", all_twists().len()))
}

fn brst() -> Outcome {
    let mut signs = Vec::new();
    for t in all_twists() {
        let m = module(&t);
        let cap = if t.fixed_directions() > 0 { Some(2) } else { None };
        let d2 = d_squared_check(&m, r(2), cap).map_err(err)?;
        ensure(d2.passed(), || format!("{t}: {d2}"))?;
        let h = homotopy_identity_check(&m, r(2), cap).map_err(err)?;
        ensure(h.holds(), || format!("{t}: homotopy fails at {:?}", h.failure))?;
        signs.push(h.sign);
    }
    ensure(signs.iter().all(|&s| s == signs[0]), || format!("signs differ: {signs:?}"))?;
    Ok(format!("d^2 = 0 and {{G_0, d}} = {}L_0 (so {{G_0, Q_0}} = L_0) on {} modules", if signs[0] < 0 { "-" } else { "+" }, signs.len()))
}

fn cohomology() -> Outcome {
    let mut seen = Vec::new();
    for t in all_twists() {
        let c = cohomology_table(&module(&t), r(2), None).map_err(err)?;
        let want = 1usize << t.fixed_directions();
        ensure(c.concentrated_in_weight_zero() && c.total() == want, || {
            format!("{t}: support {:?}, expected total {want} at weight 0", c.support())
        })?;
        seen.push(format!("{t}:{}", c.total()));
    }
    Ok(format!("weight <= 2: {}", seen.join(" ")))
}

fn characters() -> Outcome {
    let check = |t: &TwistData, q_max: Rat| -> Result<(), String> {
        let m = FockModule::new(t.clone());
        let enumerated = m.character(q_max, false).map_err(err)?;
        let product = product_character(t, q_max).map_err(err)?;
        if let Some((q, y)) = enumerated.first_difference(&product) {
            return Err(format!("{t}: enumeration and product differ at q^{q} y^{y}"));
        }
        let lambdas: Vec<Rat> = (0..t.n()).map(|i| t.lambda(i)).collect();
        let naive = fiber_character(&lambdas, q_max);
        ensure(integer_terms(&enumerated)? == naive, || format!("{t}: character differs from the mode-by-mode count"))
    };
    for t in untwisted() {
        check(&t, r(4))?;
    }
    for t in twisted() {
        check(&t, Rat::new(5, 2))?;
    }
    let n1 = FockModule::untwisted(1).character(r(1), false).map_err(err)?;
    let q1: Vec<String> = n1.terms().filter(|(q, _, _)| *q == r(1)).map(|(_, y, c)| format!("{c}*y^{}", fmt_rat(&y))).collect();
    let want = ["1*y^-1", "3*y^0", "3*y^1", "1*y^2"];
    ensure(q1 == want, || format!("untwisted N=1 q^1 coefficient {q1:?}"))?;
    Ok(format!("{} modules; untwisted N=1 q^1 coefficient y^-1 + 3 + 3y + y^2", all_twists().len()))
}

fn spectrum() -> Outcome {
    let mut states = 0;
    for t in all_twists() {
        let m = module(&t);
        let f = twisted_standard_fields(&t);
        let mg = Rat::from_integer(t.mg() as i64);
        let vac = FockVector::vacuum();
        let j0 = apply_field_mode(&f.j, Rat::zero(), &m, &vac);
        ensure(j0 == vac.scale(&cdr_core::arith::rat_to_q(t.iota())), || format!("{t}: J_0|0> = {}", j0.display(t.mg())))?;
        let cap = if t.fixed_directions() > 0 { Some(1) } else { None };
        let basis = m.basis_up_to(r(2), cap).map_err(err)?;
        for s in basis.states() {
            let v = FockVector::basis(s.clone());
            let (w, p) = (basis.weight(s), basis.charge(s));
            ensure(apply_field_mode(&f.l, Rat::zero(), &m, &v) == v.scale(&cdr_core::arith::rat_to_q(w)), || {
                format!("{t}: L_0 eigenvalue of {}", s.display(t.mg()))
            })?;
            ensure(apply_field_mode(&f.j, Rat::zero(), &m, &v) == v.scale(&cdr_core::arith::rat_to_q(p)), || {
                format!("{t}: J_0 eigenvalue of {}", s.display(t.mg()))
            })?;
            ensure((w * mg).is_integer() && w >= Rat::zero(), || format!("{t}: weight {w}"))?;
            ensure((p - t.iota()).is_integer(), || format!("{t}: charge {p}"))?;
        }
        states += basis.len();
    }
    Ok(format!("{states} states: L_0 in (1/m_g)Z>=0, J_0 in iota + Z, vacuum charge iota"))
}

fn vector_fields() -> Outcome {
    let mut pairs = 0;
    for t in all_twists() {
        let c = vector_field_suite(&module(&t), r(2), 2, 2).map_err(err)?;
        ensure(c.passed(), || format!("{t}: {c}"))?;
        pairs += c.instances;
    }
    Ok(format!("{pairs} admissible pairs of degree <= 2 on {} modules", all_twists().len()))
}

fn chen_ruan() -> Outcome {
    let p = cr_poincare(&p1_z2()).map_err(err)?;
    let want = CrPolynomial([(r(0), 1), (r(1), 2), (r(2), 1)].into_iter().collect());
    ensure(p == want, || format!("P1/Z2: {p}"))?;
    let s3 = p1_s3();
    let base = cr_poincare(&s3).map_err(err)?;
    let base_genus = ell_orb(&s3, r(1)).map_err(err)?;
    let mut variants = 0;
    for k in 0..s3.classes.len() {
        for h in 0..s3.group.order() {
            let alt = s3.with_representative(k, h);
            ensure(cr_poincare(&alt).map_err(err)? == base, || format!("class {k} conjugated by {h}: CR polynomial changes"))?;
            ensure(ell_orb(&alt, r(1)).map_err(err)? == base_genus, || format!("class {k} conjugated by {h}: genus changes"))?;
            let shifts = |i: &OrbifoldInput| i.classes[k].components.iter().map(fermionic_shift).collect::<Vec<_>>();
            ensure(shifts(&alt) == shifts(&s3), || format!("class {k} conjugated by {h}: shifts change"))?;
            variants += 1;
        }
    }
    Ok(format!("P1/Z2: {p}; P1/S3: {base}, invariant under {variants} re-representations"))
}

fn genus_t_independent() -> Outcome {
    let table = lefschetz_table(&p1_z2(), r(2)).map_err(err)?;
    let bad: Vec<String> = table
        .iter()
        .filter(|e| !e.number.is_t_independent())
        .map(|e| {
            let (q, y) = e.number.t_dependent[0];
            format!(
                "L(h={}) on {}: {} coefficients depend on t, e.g. q^{} y^{} -> {}",
                e.element,
                e.component,
                e.number.t_dependent.len(),
                fmt_rat(&q),
                fmt_rat(&y),
                e.number.equivariant.coeff(q, y)
            )
        })
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} localization sums", table.len()))
}

fn genus_integral() -> Outcome {
    let input = p1_z2();
    for k in 0..input.classes.len() {
        let s = sector_contribution(&input, k, r(2)).map_err(err)?;
        integer_terms(&s)?;
    }
    let e = ell_orb(&input, r(2)).map_err(err)?;
    let terms = integer_terms(&e)?;
    Ok(format!("{} integer coefficients up to q^2", terms.len()))
}

fn genus_paths() -> Outcome {
    let input = p1_z2();
    let a = ell_orb(&input, r(2)).map_err(err)?;
    let b = ell_orb_via_traces(&input, r(2)).map_err(err)?;
    if let Some((q, y)) = a.first_difference(&b) {
        return Err(format!("first difference at q^{q} y^{y}: {} vs {}", a.coeff(q, y), b.coeff(q, y)));
    }
    Ok(format!("{} terms agree up to q^2", a.len()))
}

fn genus_constant_term() -> Outcome {
    let oracle = p1_mod_z2(r(2));
    let q0: BTreeMap<Rat, Rat> = oracle.iter().filter(|((q, _), _)| q.is_zero()).map(|((_, y), c)| (*y, *c)).collect();
    let want: BTreeMap<Rat, Rat> = [(Rat::new(-1, 2), r(1)), (r(0), r(2)), (Rat::new(1, 2), r(-1))].into_iter().collect();
    ensure(q0 == want, || format!("oracle constant term {q0:?}"))?;
    let e = ell_orb(&p1_z2(), r(2)).map_err(err)?;
    let got: BTreeMap<(Rat, Rat), Rat> = integer_terms(&e)?.into_iter().map(|(k, v)| (k, r(v))).collect();
    ensure(got == oracle, || "genus differs from the Čech/fiber-state oracle".to_string())?;
    Ok(format!("q^0: {}; all {} terms up to q^2 match the oracle", e.truncate(Rat::zero()), got.len()))
}

fn localization_sanity() -> Outcome {
    let t = |k: i64| LaurentPoly::monomial(Cyclotomic::one(), k);
    let den = |w: i64| LaurentPoly::one().sub(&t(-w));
    // T^k has fiber t^k at 0 and t^{-k} at infinity.
    let chi = |k: i64| localized_sum(&[(t(k), den(1)), (t(-k), den(-1))]).to_laurent().ok_or("not a Laurent polynomial".to_string());
    let o = chi(0)?;
    let omega = chi(-1)?;
    ensure(o == LaurentPoly::constant(Cyclotomic::from_int(euler_characteristic(0))), || format!("chi(O) = {o}"))?;
    ensure(omega == LaurentPoly::constant(Cyclotomic::from_int(euler_characteristic(-2))), || format!("chi(O(-2)) = {omega}"))?;
    for k in -3..=3 {
        let want = tensor_power_trace(k)
            .into_iter()
            .fold(LaurentPoly::zero(), |acc, (e, c)| acc.add(&LaurentPoly::monomial(Cyclotomic::from_int(c), e)));
        let got = chi(k)?;
        ensure(got == want, || format!("T^{k}: localized {got}, Čech {want}"))?;
    }
    Ok(format!("chi(O) = {o}, chi(O(-2)) = {omega}; equivariant T^k for |k| <= 3 match Čech"))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Check); 13] = [
        ("1", "canonical (anti)commutators on Fock bases", relations),
        ("2", "N=2 bracket table, untwisted and twisted", bracket_table),
        ("3", "BRST differential and homotopy", brst),
        ("4", "fiber BRST cohomology at weight 0, dimension 2^#fixed", cohomology),
        ("5", "character enumeration equals product formula", characters),
        ("6", "L_0/J_0 spectra and vacuum charge", spectrum),
        ("7", "vector fields act by a Lie algebra homomorphism", vector_fields),
        ("8", "Chen-Ruan polynomial and conjugation invariance", chen_ruan),
        ("9a", "every localization sum is t-independent", genus_t_independent),
        ("9b", "averaged genus coefficients are integers", genus_integral),
        ("9c", "sector sum equals sector traces", genus_paths),
        ("9d", "P1/Z2 genus constant term y^-1/2 - y^1/2 + 2", genus_constant_term),
        ("10", "chi(P1, O) = 1 and chi(P1, O(-2)) = -1 by localization", localization_sanity),
    ];
    let total = Instant::now();
    let mut failed = Vec::new();
    for (id, title, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:<3} PASS  {title} ({detail}) [{secs:.1}s]"),
            Err(detail) => {
                println!("criterion {id:<3} FAIL  {title}: {detail} [{secs:.1}s]");
                failed.push(id);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass in {:.1}s", criteria.len() - failed.len(), criteria.len(), total.elapsed().as_secs_f64());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
