//! Global quotients `[X/G]`: group bookkeeping, sector data, fermionic shifts,
//! invariant dimensions and the Chen–Ruan graded dimension.

mod group;
mod input;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{fmt_rat, frac, Rat};
use crate::fock::TwistData;
use crate::genus::FixedPoint;

pub use group::{ConjugacyClass, GroupData, GroupError};
pub use input::{bundled_input, parse_orbifold_input, BUNDLED_INPUTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbifoldError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("group: {0}")]
    Group(#[from] GroupError),
    #[error("component {component}: averaged trace in degree {degree} is {value}, not a nonnegative integer")]
    NonIntegralAverage { component: String, degree: usize, value: String },
    #[error("component {component}: no trace for element {element}")]
    MissingTrace { component: String, element: usize },
    #[error("no sector data for the conjugacy class of element {0}")]
    MissingClass(usize),
}

impl OrbifoldError {
    pub(crate) fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        OrbifoldError::Input { path: path.into(), message: message.into() }
    }
}

/// Cohomology of one fixed component, either with the `C(g)` action or already
/// reduced to invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CohomologyData {
    /// Trace of each `h ∈ C(g)` on `H^0, H^1, …`.
    Characters(BTreeMap<usize, Vec<i64>>),
    InvariantDims(Vec<i64>),
}

/// One connected component `X_α^g` of the fixed locus of a class representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorComponent {
    pub name: String,
    pub rep: usize,
    pub twist: TwistData,
    pub cohomology: CohomologyData,
    /// Fixed points of `h` (and the auxiliary torus) on the component, per `h ∈ C(g)`.
    pub localization: Option<BTreeMap<usize, Vec<FixedPoint>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorClass {
    pub rep: usize,
    pub components: Vec<SectorComponent>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldInput {
    pub dim: usize,
    pub group: GroupData,
    pub classes: Vec<SectorClass>,
    pub warnings: Vec<String>,
}

impl OrbifoldInput {
    /// Order of the cyclotomic field holding every trace: lcm of element orders.
    pub fn cyclotomic_order(&self) -> usize {
        self.group.exponent()
    }

    pub fn components(&self) -> impl Iterator<Item = &SectorComponent> {
        self.classes.iter().flat_map(|c| c.components.iter())
    }

    /// The same input with class `class` represented by `h g h^{-1}`.
    pub fn with_representative(&self, class: usize, h: usize) -> Self {
        let mut out = self.clone();
        let c = &mut out.classes[class];
        c.rep = self.group.conjugate(h, c.rep);
        c.components = self.classes[class].components.iter().map(|s| conjugate_sector(s, h, &self.group)).collect();
        out
    }

    /// Checks every group and sector invariant; `warnings` collects classes
    /// without components.
    pub fn validate(&mut self) -> Result<(), OrbifoldError> {
        let g = &self.group;
        let classes = g.conjugacy_classes();
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        self.warnings.clear();
        for (ci, class) in self.classes.iter().enumerate() {
            let path = format!("classes[{ci}]");
            if class.rep >= g.order() {
                return Err(OrbifoldError::at(
                    format!("{path}.rep"),
                    format!("element {} not in a group of order {}", class.rep, g.order()),
                ));
            }
            let k = g.class_index(class.rep);
            if let Some(prev) = seen.insert(k, ci) {
                return Err(OrbifoldError::at(
                    format!("{path}.rep"),
                    format!("element {} is conjugate to the representative of classes[{prev}]", class.rep),
                ));
            }
            if class.rep == g.identity() {
                if class.components.len() != 1 || !class.components[0].twist.is_identity() {
                    return Err(OrbifoldError::at(
                        format!("{path}.components"),
                        "the identity class needs exactly one component with all exponents zero",
                    ));
                }
            } else if class.components.is_empty() {
                self.warnings.push(format!("{path}: class of element {} has no components and contributes 0", class.rep));
            }
            for (ai, comp) in class.components.iter().enumerate() {
                validate_component(comp, class.rep, self.dim, g, &format!("{path}.components[{ai}]"))?;
            }
        }
        if let Some(missing) = classes.iter().enumerate().find(|(k, _)| !seen.contains_key(k)) {
            return Err(OrbifoldError::at("classes", format!("no entry for the conjugacy class of element {}", missing.1.rep)));
        }
        Ok(())
    }
}

fn validate_component(c: &SectorComponent, rep: usize, dim: usize, g: &GroupData, path: &str) -> Result<(), OrbifoldError> {
    if c.rep != rep {
        return Err(OrbifoldError::at(path, format!("component belongs to element {} but sits in the class of {rep}", c.rep)));
    }
    if c.twist.n() != dim {
        return Err(OrbifoldError::at(format!("{path}.exponents"), format!("expected {dim} exponents, found {}", c.twist.n())));
    }
    let ord = g.element_order(rep) as u64;
    let mg = c.twist.mg() as u64;
    for (i, &m) in c.twist.exponents().iter().enumerate() {
        if !(ord * m as u64).is_multiple_of(mg) {
            return Err(OrbifoldError::at(
                format!("{path}.exponents[{i}]"),
                format!("exp(2πi·{m}/{mg}) is not an eigenvalue of an element of order {ord}"),
            ));
        }
    }
    let cent: BTreeSet<usize> = g.centralizer(rep).into_iter().collect();
    match &c.cohomology {
        CohomologyData::Characters(ch) => {
            let p = format!("{path}.cohomology.characters");
            let mut len = None;
            for (h, traces) in ch {
                if !cent.contains(h) {
                    return Err(OrbifoldError::at(format!("{p}.{h}"), format!("element {h} does not commute with {rep}")));
                }
                if *len.get_or_insert(traces.len()) != traces.len() {
                    return Err(OrbifoldError::at(format!("{p}.{h}"), "trace lists differ in length"));
                }
            }
            if let Some(h) = cent.iter().find(|h| !ch.contains_key(h)) {
                return Err(OrbifoldError::at(format!("{p}.{h}"), "missing traces for a centralizer element"));
            }
            if let Some(k) = ch[&g.identity()].iter().position(|&d| d < 0) {
                return Err(OrbifoldError::at(format!("{p}.{}[{k}]", g.identity()), "traces of the identity are dimensions"));
            }
        }
        CohomologyData::InvariantDims(d) => {
            if let Some(k) = d.iter().position(|&x| x < 0) {
                return Err(OrbifoldError::at(format!("{path}.cohomology.invariant_dims[{k}]"), "negative dimension"));
            }
        }
    }
    let Some(loc) = &c.localization else { return Ok(()) };
    let p = format!("{path}.localization");
    for h in loc.keys() {
        if !cent.contains(h) {
            return Err(OrbifoldError::at(format!("{p}.{h}"), format!("element {h} does not commute with {rep}")));
        }
    }
    if let Some(h) = cent.iter().find(|h| !loc.contains_key(h)) {
        return Err(OrbifoldError::at(format!("{p}.{h}"), format!("missing localization data for component {} and element {h}", c.name)));
    }
    let mut expected: Vec<Rat> = (0..dim).map(|i| c.twist.lambda(i)).collect();
    expected.sort();
    for (h, points) in loc {
        let hord = g.element_order(*h) as i64;
        for (pi, pt) in points.iter().enumerate() {
            let pp = format!("{p}.{h}[{pi}]");
            if pt.lines.len() != dim {
                return Err(OrbifoldError::at(format!("{pp}.lines"), format!("expected {dim} lines, found {}", pt.lines.len())));
            }
            let mut lambdas: Vec<Rat> = pt.lines.iter().map(|l| l.lambda).collect();
            lambdas.sort();
            if lambdas != expected {
                return Err(OrbifoldError::at(format!("{pp}.lines"), "line eigenvalues do not match the component exponents"));
            }
            for (li, l) in pt.lines.iter().enumerate() {
                let lp = format!("{pp}.lines[{li}]");
                if l.tangent != l.lambda.is_zero() {
                    return Err(OrbifoldError::at(format!("{lp}.tangent"), "a line is tangent to the fixed locus exactly when lambda = 0"));
                }
                if !(frac(l.zeta) * Rat::from_integer(hord)).is_integer() {
                    return Err(OrbifoldError::at(
                        format!("{lp}.zeta"),
                        format!("exp(2πi·{}) is not an eigenvalue of an element of order {hord}", fmt_rat(&l.zeta)),
                    ));
                }
                if l.tangent && frac(l.zeta).is_zero() && l.w == 0 {
                    return Err(OrbifoldError::at(lp, "fixed point is not isolated: tangent line with trivial h and torus weight"));
                }
            }
        }
    }
    Ok(())
}

/// `ι(g, α) = Σ m_i / m_g`.
pub fn fermionic_shift(c: &SectorComponent) -> Rat {
    c.twist.iota()
}

/// `dim H^k(X_α^g)^{C(g)}` by averaging traces over the centralizer.
pub fn invariant_dims(c: &SectorComponent, group: &GroupData) -> Result<Vec<i64>, OrbifoldError> {
    let ch = match &c.cohomology {
        CohomologyData::InvariantDims(d) => return Ok(d.clone()),
        CohomologyData::Characters(ch) => ch,
    };
    let cent = group.centralizer(c.rep);
    let len = ch.values().next().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let mut sum = 0i64;
        for h in &cent {
            let traces = ch.get(h).ok_or(OrbifoldError::MissingTrace { component: c.name.clone(), element: *h })?;
            sum += traces.get(k).copied().unwrap_or(0);
        }
        let avg = Rat::new(sum, cent.len() as i64);
        if !avg.is_integer() || avg < Rat::zero() {
            return Err(OrbifoldError::NonIntegralAverage { component: c.name.clone(), degree: k, value: fmt_rat(&avg) });
        }
        out.push(avg.to_integer());
    }
    Ok(out)
}

/// Polynomial in `t` with rational exponents and integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrPolynomial(pub BTreeMap<Rat, i64>);

impl CrPolynomial {
    pub fn add_term(&mut self, exp: Rat, c: i64) {
        let e = self.0.entry(exp).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: Rat) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    pub fn total(&self) -> i64 {
        self.0.values().sum()
    }

    /// `[(exponent, coefficient)]` with exponents as `"a/b"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.0.iter().map(|(e, c)| serde_json::json!([fmt_rat(e), c])).collect())
    }
}

impl fmt::Display for CrPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in &self.0 {
            let mono = if e.is_zero() {
                None
            } else if e.is_one() {
                Some("t".to_string())
            } else if e.is_integer() {
                Some(format!("t^{}", e))
            } else {
                Some(format!("t^({})", fmt_rat(e)))
            };
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match mono {
                None => write!(f, "{mag}")?,
                Some(m) if mag == 1 => write!(f, "{m}")?,
                Some(m) => write!(f, "{mag}*{m}")?,
            }
        }
        Ok(())
    }
}

/// `Σ_{[g]} Σ_α Σ_k dim H^k(X_α^g)^{C(g)} · t^{k + 2ι(g,α)}`.
pub fn cr_poincare(input: &OrbifoldInput) -> Result<CrPolynomial, OrbifoldError> {
    let g = &input.group;
    let covered: BTreeSet<usize> = input.classes.iter().map(|c| g.class_index(c.rep)).collect();
    if let Some(c) = g.conjugacy_classes().iter().enumerate().find(|(k, _)| !covered.contains(k)) {
        return Err(OrbifoldError::MissingClass(c.1.rep));
    }
    let comps: Vec<&SectorComponent> = input.components().collect();
    let parts: Vec<Vec<(Rat, i64)>> = comps
        .par_iter()
        .map(|c| {
            let shift = fermionic_shift(c) * Rat::from_integer(2);
            let dims = invariant_dims(c, g)?;
            Ok(dims.into_iter().enumerate().map(|(k, d)| (Rat::from_integer(k as i64) + shift, d)).collect())
        })
        .collect::<Result<_, OrbifoldError>>()?;
    let mut out = CrPolynomial::default();
    for (e, d) in parts.into_iter().flatten() {
        out.add_term(e, d);
    }
    Ok(out)
}

/// Relabels a component of `g` as a component of `h g h^{-1}`; traces and
/// localization data are moved along `x ↦ h x h^{-1}`.
pub fn conjugate_sector(c: &SectorComponent, h: usize, group: &GroupData) -> SectorComponent {
    let conj = |x: usize| group.conjugate(h, x);
    let cohomology = match &c.cohomology {
        CohomologyData::Characters(ch) => CohomologyData::Characters(ch.iter().map(|(x, t)| (conj(*x), t.clone())).collect()),
        CohomologyData::InvariantDims(d) => CohomologyData::InvariantDims(d.clone()),
    };
    SectorComponent {
        name: c.name.clone(),
        rep: conj(c.rep),
        twist: c.twist.clone(),
        cohomology,
        localization: c.localization.as_ref().map(|l| l.iter().map(|(x, p)| (conj(*x), p.clone())).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(rep: usize, exps: Vec<u32>, mg: u32, coh: CohomologyData) -> SectorComponent {
        SectorComponent { name: "c".into(), rep, twist: TwistData::new(exps, mg).unwrap(), cohomology: coh, localization: None }
    }

    fn chars(pairs: &[(usize, Vec<i64>)]) -> CohomologyData {
        CohomologyData::Characters(pairs.iter().cloned().collect())
    }

    #[test]
    fn shifts() {
        assert_eq!(fermionic_shift(&comp(0, vec![0], 1, CohomologyData::InvariantDims(vec![1]))), Rat::zero());
        assert_eq!(fermionic_shift(&comp(1, vec![1], 2, CohomologyData::InvariantDims(vec![1]))), Rat::new(1, 2));
        assert_eq!(fermionic_shift(&comp(1, vec![1, 1], 2, CohomologyData::InvariantDims(vec![1]))), Rat::one());
    }

    #[test]
    fn averaged_dimensions() {
        let z2 = GroupData::cyclic(2);
        assert_eq!(invariant_dims(&comp(1, vec![1], 2, chars(&[(0, vec![1]), (1, vec![1])])), &z2).unwrap(), vec![1]);
        assert_eq!(invariant_dims(&comp(1, vec![1], 2, chars(&[(0, vec![2]), (1, vec![0])])), &z2).unwrap(), vec![1]);
        assert_eq!(invariant_dims(&comp(1, vec![1], 2, chars(&[(0, vec![1]), (1, vec![-1])])), &z2).unwrap(), vec![0]);
        assert!(matches!(
            invariant_dims(&comp(1, vec![1], 2, chars(&[(0, vec![1]), (1, vec![0])])), &z2),
            Err(OrbifoldError::NonIntegralAverage { .. })
        ));
    }

    fn p1_z2() -> OrbifoldInput {
        let g = GroupData::cyclic(2);
        let p1 = comp(0, vec![0], 1, chars(&[(0, vec![1, 0, 1]), (1, vec![1, 0, 1])]));
        let pt = |name: &str| SectorComponent { name: name.into(), ..comp(1, vec![1], 2, chars(&[(0, vec![1]), (1, vec![1])])) };
        OrbifoldInput {
            dim: 1,
            group: g,
            classes: vec![SectorClass { rep: 0, components: vec![p1] }, SectorClass { rep: 1, components: vec![pt("0"), pt("inf")] }],
            warnings: vec![],
        }
    }

    #[test]
    fn cr_of_p1_mod_z2() {
        let mut input = p1_z2();
        input.validate().unwrap();
        let p = cr_poincare(&input).unwrap();
        assert_eq!(p.to_string(), "1 + 2*t + t^2");
        for c in input.classes.iter_mut().flat_map(|c| c.components.iter_mut()) {
            if let CohomologyData::Characters(ch) = &mut c.cohomology {
                ch.values_mut().for_each(|t| t.iter_mut().for_each(|x| *x *= 2));
            }
        }
        assert_eq!(cr_poincare(&input).unwrap().to_string(), "2 + 4*t + 2*t^2");
    }

    #[test]
    fn trivial_group_gives_ordinary_poincare() {
        let input = OrbifoldInput {
            dim: 1,
            group: GroupData::cyclic(1),
            classes: vec![SectorClass { rep: 0, components: vec![comp(0, vec![0], 1, CohomologyData::InvariantDims(vec![1, 0, 1]))] }],
            warnings: vec![],
        };
        assert_eq!(cr_poincare(&input).unwrap().to_string(), "1 + t^2");
    }

    #[test]
    fn missing_class_is_reported() {
        let mut input = p1_z2();
        input.classes.pop();
        assert_eq!(cr_poincare(&input), Err(OrbifoldError::MissingClass(1)));
        assert!(matches!(input.validate(), Err(OrbifoldError::Input { .. })));
    }

    #[test]
    fn empty_class_warns() {
        let mut input = p1_z2();
        input.classes[1].components.clear();
        input.validate().unwrap();
        assert_eq!(input.warnings.len(), 1);
        assert_eq!(cr_poincare(&input).unwrap().to_string(), "1 + t^2");
    }

    #[test]
    fn conjugation_by_centralizer_is_identity() {
        let input = p1_z2();
        let c = &input.classes[1].components[0];
        assert_eq!(&conjugate_sector(c, 1, &input.group), c);
        let e = &input.classes[0].components[0];
        assert_eq!(&conjugate_sector(e, 1, &input.group), e);
    }

    #[test]
    fn exponent_must_match_element_order() {
        let mut input = p1_z2();
        input.classes[1].components[0].twist = TwistData::new(vec![1], 3).unwrap();
        let err = input.validate().unwrap_err().to_string();
        assert!(err.starts_with("classes[1].components[0].exponents[0]"), "{err}");
    }

    #[test]
    fn display_of_fractional_exponents() {
        let mut p = CrPolynomial::default();
        for (e, c) in [(Rat::zero(), 1), (Rat::new(2, 3), 1), (Rat::one(), 2), (Rat::new(4, 3), 1), (Rat::from_integer(2), 1)] {
            p.add_term(e, c);
        }
        assert_eq!(p.to_string(), "1 + t^(2/3) + 2*t + t^(4/3) + t^2");
        p.add_term(Rat::one(), -3);
        assert_eq!(p.to_string(), "1 + t^(2/3) - t + t^(4/3) + t^2");
    }
}
