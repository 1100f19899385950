//! Equivariant characters of the sector bundles, holomorphic Lefschetz numbers
//! by fixed-point localization, and the orbifold elliptic genus.
//!
//! Localization uses an auxiliary torus with parameter `t`. A line with
//! `h`-eigenvalue `exp(2πi ζ)` and torus weight `w` has eigenvalue
//! `u = exp(2πi ζ) t^w`. Numbers are reported at `t = 1`; coefficients that
//! still depend on `t` before that evaluation are listed in
//! [`LefschetzNumber::t_dependent`].

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{fmt_rat, q_from_int, Cyclotomic, LaurentPoly, ProductFactor, QYSeries, Rat, RationalFunctionT, SeriesError, Q};
use crate::fock::{Family, FockError, FockModule, TwistData};
use crate::orbifold::{fermionic_shift, OrbifoldError, OrbifoldInput, SectorComponent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("component {component}: no localization data for element {element}")]
    MissingLocalization { component: String, element: usize },
    #[error("fixed point {point} is not isolated (a tangent line has eigenvalue 1)")]
    NotIsolated { point: String },
    #[error("component {component}, element {element}: localized sum at q^{q} y^{y} is not a Laurent polynomial in t")]
    LocalizationInconsistency { component: String, element: usize, q: String, y: String },
    #[error("component {component}, element {element}: localized sum at q^{q} y^{y} depends on t: {value}")]
    TDependent { component: String, element: usize, q: String, y: String, value: String },
    #[error("class of element {class}: averaged coefficient of q^{q} y^{y} is {value}, not an integer")]
    NonIntegral { class: usize, q: String, y: String, value: String },
}

/// One line of `TX` at a fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineDatum {
    /// `g`-eigenvalue exponent in `[0, 1)`.
    pub lambda: Rat,
    /// `h`-eigenvalue exponent.
    pub zeta: Rat,
    /// Auxiliary torus weight.
    pub w: i64,
    pub tangent: bool,
}

impl LineDatum {
    pub fn eigenvalue(&self) -> LaurentPoly {
        LaurentPoly::monomial(Cyclotomic::from_exponent(self.zeta), self.w)
    }

    pub fn inverse_eigenvalue(&self) -> LaurentPoly {
        LaurentPoly::monomial(Cyclotomic::from_exponent(-self.zeta), -self.w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub point: String,
    pub lines: Vec<LineDatum>,
}

impl FixedPoint {
    /// `∏_{tangent} (1 - u^{-1})`.
    pub fn denominator(&self) -> Result<LaurentPoly, GenusError> {
        let mut d = LaurentPoly::one();
        for l in self.lines.iter().filter(|l| l.tangent) {
            d = d.mul(&LaurentPoly::one().sub(&l.inverse_eigenvalue()));
        }
        if d.is_zero() {
            return Err(GenusError::NotIsolated { point: self.point.clone() });
        }
        Ok(d)
    }
}

/// Fixed points of `h` (with the torus) on one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationDatum {
    pub component: String,
    pub element: usize,
    pub points: Vec<FixedPoint>,
}

impl LocalizationDatum {
    pub fn of(c: &SectorComponent, h: usize) -> Result<Self, GenusError> {
        let points = c
            .localization
            .as_ref()
            .and_then(|l| l.get(&h))
            .ok_or_else(|| GenusError::MissingLocalization { component: c.name.clone(), element: h })?;
        Ok(LocalizationDatum { component: c.name.clone(), element: h, points: points.clone() })
    }
}

/// Trace of `h` and the torus on the fiber of the sector bundle over a fixed
/// point, as a series with coefficients in `Z[ζ][t, t^{-1}]`.
pub fn sector_bundle_character(lines: &[LineDatum], q_max: Rat) -> Result<QYSeries<LaurentPoly>, GenusError> {
    let one = Rat::one();
    let mut factors = Vec::new();
    for l in lines {
        let (u, ui) = (l.eigenvalue(), l.inverse_eigenvalue());
        let mut k = Rat::one();
        loop {
            // b, φ sit at q^{k-1+λ}; a, ψ at q^{k-λ}.
            let low = k - one + l.lambda;
            let high = k - l.lambda;
            if low > q_max && high > q_max {
                break;
            }
            factors.push(ProductFactor::exterior(low, one, ui.clone(), 1));
            factors.push(ProductFactor::exterior(high, -one, u.clone(), 1));
            if low > Rat::zero() {
                factors.push(ProductFactor::symmetric(low, Rat::zero(), ui.clone(), 1));
            }
            factors.push(ProductFactor::symmetric(high, Rat::zero(), u.clone(), 1));
            k += one;
        }
    }
    Ok(crate::arith::product_expand(&factors, q_max)?)
}

/// `Σ_p V_p / ∏_{tangent} (1 - u^{-1})` for fiber characters `V_p`.
pub fn localized_sum(points: &[(LaurentPoly, LaurentPoly)]) -> RationalFunctionT {
    points.iter().fold(RationalFunctionT::zero(), |acc, (v, d)| {
        acc.add(&RationalFunctionT::new(v.clone(), d.clone()).expect("denominator is nonzero"))
    })
}

/// A holomorphic Lefschetz number as a `q, y` series.
#[derive(Clone, Debug, PartialEq)]
pub struct LefschetzNumber {
    /// Torus-equivariant value.
    pub equivariant: QYSeries<LaurentPoly>,
    /// Value at `t = 1`.
    pub value: QYSeries<Cyclotomic>,
    /// Terms whose equivariant coefficient is not constant in `t`.
    pub t_dependent: Vec<(Rat, Rat)>,
}

impl LefschetzNumber {
    pub fn is_t_independent(&self) -> bool {
        self.t_dependent.is_empty()
    }

    /// The value, rejecting any residual `t`-dependence.
    pub fn strict(&self, component: &str, element: usize) -> Result<&QYSeries<Cyclotomic>, GenusError> {
        match self.t_dependent.first() {
            None => Ok(&self.value),
            Some(&(q, y)) => Err(GenusError::TDependent {
                component: component.to_string(),
                element,
                q: fmt_rat(&q),
                y: fmt_rat(&y),
                value: self.equivariant.coeff(q, y).to_string(),
            }),
        }
    }
}

fn localize(
    component: &str,
    element: usize,
    chars: Vec<(QYSeries<LaurentPoly>, LaurentPoly)>,
    q_max: Rat,
) -> Result<LefschetzNumber, GenusError> {
    let mut keys: Vec<(Rat, Rat)> = chars.iter().flat_map(|(s, _)| s.terms().map(|(q, y, _)| (q, y))).collect();
    keys.sort();
    keys.dedup();
    let mut equivariant = QYSeries::zero(q_max);
    let mut value = QYSeries::zero(q_max);
    let mut t_dependent = Vec::new();
    for (q, y) in keys {
        let pts: Vec<(LaurentPoly, LaurentPoly)> = chars.iter().map(|(s, d)| (s.coeff(q, y), d.clone())).collect();
        let sum = localized_sum(&pts).to_laurent().ok_or_else(|| GenusError::LocalizationInconsistency {
            component: component.to_string(),
            element,
            q: fmt_rat(&q),
            y: fmt_rat(&y),
        })?;
        if sum.as_constant().is_none() {
            t_dependent.push((q, y));
        }
        value.add_term(q, y, sum.eval_at_one());
        equivariant.add_term(q, y, sum);
    }
    Ok(LefschetzNumber { equivariant, value, t_dependent })
}

/// `L(h, V_{g,α})` by summing fiber characters over the fixed points.
pub fn lefschetz_localized(d: &LocalizationDatum, q_max: Rat) -> Result<LefschetzNumber, GenusError> {
    let chars = d
        .points
        .iter()
        .map(|p| Ok((sector_bundle_character(&p.lines, q_max)?, p.denominator()?)))
        .collect::<Result<Vec<_>, GenusError>>()?;
    localize(&d.component, d.element, chars, q_max)
}

/// One Lefschetz number of the input: class representative, component, `h`.
#[derive(Clone, Debug)]
pub struct LefschetzEntry {
    pub class: usize,
    pub component: String,
    pub element: usize,
    pub number: LefschetzNumber,
}

/// `L(h, V_{g,α})` for every class, component and `h ∈ C(g)`.
pub fn lefschetz_table(input: &OrbifoldInput, q_max: Rat) -> Result<Vec<LefschetzEntry>, GenusError> {
    let jobs: Vec<(usize, &SectorComponent, usize)> = input
        .classes
        .iter()
        .flat_map(|c| c.components.iter().flat_map(move |a| input.group.centralizer(c.rep).into_iter().map(move |h| (c.rep, a, h))))
        .collect();
    jobs.par_iter()
        .map(|&(class, a, h)| {
            let number = lefschetz_localized(&LocalizationDatum::of(a, h)?, q_max)?;
            Ok(LefschetzEntry { class, component: a.name.clone(), element: h, number })
        })
        .collect()
}

fn check_integral(class: usize, s: &QYSeries<Cyclotomic>) -> Result<(), GenusError> {
    match s.terms().find(|(_, _, c)| !c.is_rational_integer()) {
        None => Ok(()),
        Some((q, y, c)) => Err(GenusError::NonIntegral { class, q: fmt_rat(&q), y: fmt_rat(&y), value: c.to_string() }),
    }
}

fn average(values: &[&QYSeries<Cyclotomic>], q_max: Rat) -> QYSeries<Cyclotomic> {
    let sum = values.iter().fold(QYSeries::zero(q_max), |acc, v| acc.add(v));
    sum.scale(&Cyclotomic::from_q(Q::one() / q_from_int(values.len() as i64)))
}

/// `Σ_α y^{ι(g,α)} (1/|C(g)|) Σ_h L(h, V_{g,α})` for `input.classes[class]`.
pub fn sector_contribution(input: &OrbifoldInput, class: usize, q_max: Rat) -> Result<QYSeries<Cyclotomic>, GenusError> {
    let c = &input.classes[class];
    let cent = input.group.centralizer(c.rep);
    let mut out = QYSeries::zero(q_max);
    for a in &c.components {
        let numbers =
            cent.par_iter().map(|&h| lefschetz_localized(&LocalizationDatum::of(a, h)?, q_max)).collect::<Result<Vec<_>, GenusError>>()?;
        let values: Vec<&QYSeries<Cyclotomic>> = numbers.iter().map(|n| &n.value).collect();
        out = out.add(&average(&values, q_max).shift_y(fermionic_shift(a)));
    }
    check_integral(c.rep, &out)?;
    Ok(out)
}

/// `y^{-N/2} Σ_{[g]} Σ_α y^{ι(g,α)} (1/|C(g)|) Σ_{h ∈ C(g)} L(h, V_{g,α})`.
pub fn ell_orb(input: &OrbifoldInput, q_max: Rat) -> Result<QYSeries<Cyclotomic>, GenusError> {
    let parts =
        (0..input.classes.len()).into_par_iter().map(|k| sector_contribution(input, k, q_max)).collect::<Result<Vec<_>, GenusError>>()?;
    let total = parts.iter().fold(QYSeries::zero(q_max), |acc, p| acc.add(p));
    Ok(total.shift_y(Rat::new(-(input.dim as i64), 2)))
}

/// The fiber trace at a fixed point read off the twisted Fock basis: each
/// state contributes `q^{L_0} y^{J_0}` times the eigenvalues of its modes.
fn fock_trace(module: &FockModule, lines: &[LineDatum], q_max: Rat) -> Result<QYSeries<LaurentPoly>, GenusError> {
    let basis = module.basis_up_to(q_max, None)?;
    let mut acc: HashMap<(Rat, Rat), BTreeMap<(Rat, i64), i64>> = HashMap::new();
    for s in basis.states() {
        let (mut zeta, mut w) = (Rat::zero(), 0i64);
        for k in s.modes() {
            let l = &lines[k.dir as usize];
            let sign = match k.family {
                Family::A | Family::Psi => 1,
                Family::B | Family::Phi => -1,
            };
            zeta += l.zeta * Rat::from_integer(sign);
            w += sign * l.w;
        }
        *acc.entry((basis.weight(s), basis.charge(s))).or_default().entry((zeta, w)).or_insert(0) += 1;
    }
    let mut out = QYSeries::zero(q_max);
    for ((q, y), monos) in acc {
        let mut c = LaurentPoly::zero();
        for ((z, w), n) in monos {
            c = c.add(&LaurentPoly::monomial(&Cyclotomic::from_exponent(z) * &Cyclotomic::from_int(n), w));
        }
        out.add_term(q, y, c);
    }
    Ok(out)
}

/// The same genus organized as a sum over sectors of `C(g)`-invariant Euler
/// characteristics, with fiber traces taken over the twisted Fock basis and
/// charges read from `J_0` including its vacuum anomaly.
pub fn ell_orb_via_traces(input: &OrbifoldInput, q_max: Rat) -> Result<QYSeries<Cyclotomic>, GenusError> {
    let mut jobs = Vec::new();
    for c in &input.classes {
        let cent = input.group.centralizer(c.rep);
        for a in &c.components {
            jobs.push((a, cent.clone()));
        }
    }
    let modules: std::sync::Mutex<HashMap<TwistData, Arc<FockModule>>> = Default::default();
    let module_for = |lines: &[LineDatum], mg: u32| -> Result<Arc<FockModule>, GenusError> {
        let exps = lines.iter().map(|l| (l.lambda * Rat::from_integer(mg as i64)).to_integer() as u32).collect();
        let twist = TwistData::new(exps, mg)?;
        let mut m = modules.lock().unwrap();
        Ok(m.entry(twist.clone()).or_insert_with(|| Arc::new(FockModule::new(twist))).clone())
    };
    let parts = jobs
        .par_iter()
        .map(|(a, cent)| {
            let mut euler = QYSeries::zero(q_max);
            for &h in cent {
                let d = LocalizationDatum::of(a, h)?;
                let chars = d
                    .points
                    .iter()
                    .map(|p| Ok((fock_trace(&*module_for(&p.lines, a.twist.mg())?, &p.lines, q_max)?, p.denominator()?)))
                    .collect::<Result<Vec<_>, GenusError>>()?;
                euler = euler.add(&localize(&a.name, h, chars, q_max)?.value);
            }
            let inv = euler.scale(&Cyclotomic::from_q(Q::one() / q_from_int(cent.len() as i64)));
            check_integral(a.rep, &inv)?;
            Ok(inv)
        })
        .collect::<Result<Vec<_>, GenusError>>()?;
    let total = parts.iter().fold(QYSeries::zero(q_max), |acc, p| acc.add(p));
    Ok(total.shift_y(Rat::new(-(input.dim as i64), 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::{bundled_input, parse_orbifold_input};

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn line(lambda: Rat, zeta: Rat, w: i64) -> LineDatum {
        LineDatum { lambda, zeta, w, tangent: lambda.is_zero() }
    }

    fn at_one(s: &QYSeries<LaurentPoly>) -> String {
        s.map(|c| c.eval_at_one()).to_string()
    }

    #[test]
    fn fiber_characters_at_q0() {
        let q0 = Rat::zero();
        assert_eq!(at_one(&sector_bundle_character(&[line(r(1, 2), q0, 0)], q0).unwrap()), "1");
        assert_eq!(at_one(&sector_bundle_character(&[line(q0, q0, 0)], q0).unwrap()), "1 + y");
        assert_eq!(at_one(&sector_bundle_character(&[line(q0, r(1, 2), 0)], q0).unwrap()), "1 - y");
    }

    #[test]
    fn fiber_character_matches_fock_at_trivial_eigenvalue() {
        for lambda in [Rat::zero(), r(1, 2), r(1, 3), r(2, 3)] {
            let l = line(lambda, Rat::zero(), 0);
            let mg = *lambda.denom() as u32;
            let m = FockModule::new(TwistData::new(vec![(*lambda.numer()) as u32], mg).unwrap());
            let a = sector_bundle_character(std::slice::from_ref(&l), r(2, 1)).unwrap();
            let b = fock_trace(&m, &[l], r(2, 1)).unwrap().shift_y(-m.iota());
            assert_eq!(a, b, "lambda = {lambda}");
        }
    }

    #[test]
    fn point_component_needs_no_denominator() {
        let d = LocalizationDatum {
            component: "pt".into(),
            element: 1,
            points: vec![FixedPoint { point: "p".into(), lines: vec![line(r(1, 2), r(1, 2), 0)] }],
        };
        let l = lefschetz_localized(&d, r(1, 1)).unwrap();
        assert!(l.is_t_independent());
        let fiber = sector_bundle_character(&d.points[0].lines, r(1, 1)).unwrap();
        assert_eq!(l.value, fiber.map(|c| c.eval_at_one()));
    }

    #[test]
    fn euler_characteristics_of_p1() {
        let t = |k| LaurentPoly::monomial(Cyclotomic::one(), k);
        let den = |u: i64| LaurentPoly::one().sub(&t(-u));
        let chi = |f0: LaurentPoly, finf: LaurentPoly| localized_sum(&[(f0, den(1)), (finf, den(-1))]).to_laurent().unwrap();
        assert_eq!(chi(t(0), t(0)), LaurentPoly::one());
        // Cotangent fibers carry u^{-1}.
        assert_eq!(chi(t(-1), t(1)), LaurentPoly::constant(Cyclotomic::from_int(-1)));
        // Tangent fibers: the equivariant index keeps its weights.
        assert_eq!(chi(t(1), t(-1)).to_string(), "t^-1 + 1 + t");
    }

    #[test]
    fn p1_z2_q0_term() {
        let input = parse_orbifold_input(bundled_input("p1_z2.json").unwrap()).unwrap();
        let e = ell_orb(&input, Rat::zero()).unwrap();
        assert_eq!(e.to_string(), "y^(-1/2) + 2 - y^(1/2)");
    }

    #[test]
    fn non_isolated_point_rejected() {
        let p = FixedPoint { point: "x".into(), lines: vec![line(Rat::zero(), Rat::zero(), 0)] };
        assert!(matches!(p.denominator(), Err(GenusError::NotIsolated { .. })));
    }

    #[test]
    fn missing_localization() {
        let mut input = parse_orbifold_input(bundled_input("p1_z2.json").unwrap()).unwrap();
        input.classes[1].components[0].localization.as_mut().unwrap().remove(&1);
        assert!(matches!(ell_orb(&input, Rat::zero()), Err(GenusError::MissingLocalization { element: 1, .. })));
    }

    #[test]
    fn non_laurent_sum_is_inconsistent() {
        // A single torus-fixed point on P^1 cannot close up.
        let d = LocalizationDatum {
            component: "P1".into(),
            element: 0,
            points: vec![FixedPoint { point: "0".into(), lines: vec![line(Rat::zero(), Rat::zero(), 1)] }],
        };
        assert!(matches!(lefschetz_localized(&d, Rat::zero()), Err(GenusError::LocalizationInconsistency { .. })));
    }
}
