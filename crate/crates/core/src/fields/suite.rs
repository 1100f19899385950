//! Bracket tables checked as exact operator identities on truncated bases.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::operator::{field_mode_operator, field_mode_operator_capped, scalar_matrix};
use super::vector::monomial_admissible;
use super::{twisted_standard_fields, vector_field_operator, FieldError, FieldExpr, Monomial, OperatorMatrix, VectorField};
use crate::arith::{q_from_int, Rat, Q};
use crate::fock::FockModule;

/// Outcome of one family of operator identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: String,
    /// Instances (mode pairs or vector-field pairs) compared.
    pub instances: usize,
    /// Instances with no representable block under the truncation.
    pub skipped: usize,
    /// Basis vectors on which both sides were compared.
    pub vectors: usize,
    pub failure: Option<String>,
}

impl RelationCheck {
    fn new(relation: impl Into<String>) -> Self {
        RelationCheck { relation: relation.into(), instances: 0, skipped: 0, vectors: 0, failure: None }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.instances > 0
    }
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{:<44} {:>4} instances {:>7} vectors  {}", self.relation, self.instances, self.vectors, status)?;
        if let Some(why) = &self.failure {
            write!(f, "\n    {why}")?;
        }
        Ok(())
    }
}

struct ModeTable<'a> {
    module: &'a Arc<FockModule>,
    w_max: Rat,
    cache: HashMap<(usize, i64), Option<OperatorMatrix>>,
    fields: [Arc<FieldExpr>; 4],
}

impl<'a> ModeTable<'a> {
    fn get(&mut self, f: usize, n: i64) -> Result<Option<&OperatorMatrix>, FieldError> {
        if !self.cache.contains_key(&(f, n)) {
            let m = match field_mode_operator(&self.fields[f], Rat::from_integer(n), self.module, self.w_max) {
                Ok(m) => Some(m),
                Err(FieldError::Truncation(_)) => None,
                Err(e) => return Err(e),
            };
            self.cache.insert((f, n), m);
        }
        Ok(self.cache[&(f, n)].as_ref())
    }
}

const L: usize = 0;
const J: usize = 1;
const QF: usize = 2;
const G: usize = 3;

/// Right-hand side `Σ c F_{m+n} + central · δ_{m+n,0}`.
struct Rhs {
    terms: Vec<(Q, usize)>,
    central: Q,
}

/// Checks the full `N = 2` bracket table for modes `|m|, |n| <= max_mode` on
/// the basis of weight `<= w_max`:
///
/// ```text
/// [L_m, L_n] = (m-n) L_{m+n}
/// [L_m, J_n] = -n J_{m+n} - (N/2) m(m+1) δ_{m+n,0}
/// [L_m, Q_n] = -n Q_{m+n}
/// [L_m, G_n] = (m-n) G_{m+n}
/// [J_m, J_n] = N m δ_{m+n,0}
/// [J_m, Q_n] = Q_{m+n}
/// [J_m, G_n] = -G_{m+n}
/// {Q_m, Q_n} = 0
/// {G_m, G_n} = 0
/// {Q_m, G_n} = L_{m+n} + m J_{m+n} + (N/2) m(m-1) δ_{m+n,0}
/// ```
pub fn bracket_suite(module: &Arc<FockModule>, w_max: Rat, max_mode: i64) -> Result<Vec<RelationCheck>, FieldError> {
    let f = twisted_standard_fields(module.twist());
    let mut table = ModeTable { module, w_max, cache: HashMap::new(), fields: [f.l, f.j, f.q, f.g] };
    let n_dirs = Q::from_integer((module.n() as i64).into());
    let half_n = &n_dirs / q_from_int(2);
    let qi = |x: i64| q_from_int(x);
    type RhsFn<'r> = Box<dyn Fn(i64, i64) -> Rhs + 'r>;
    let relations: Vec<(&str, usize, usize, RhsFn)> = vec![
        ("[L_m, L_n] = (m-n) L_{m+n}", L, L, Box::new(|m, n| Rhs { terms: vec![(qi(m - n), L)], central: Q::zero() })),
        (
            "[L_m, J_n] = -n J_{m+n} - (N/2)m(m+1)",
            L,
            J,
            Box::new(|m, n| Rhs { terms: vec![(qi(-n), J)], central: -(&half_n * qi(m * (m + 1))) }),
        ),
        ("[L_m, Q_n] = -n Q_{m+n}", L, QF, Box::new(|_, n| Rhs { terms: vec![(qi(-n), QF)], central: Q::zero() })),
        ("[L_m, G_n] = (m-n) G_{m+n}", L, G, Box::new(|m, n| Rhs { terms: vec![(qi(m - n), G)], central: Q::zero() })),
        ("[J_m, J_n] = N m", J, J, Box::new(|m, _| Rhs { terms: vec![], central: &n_dirs * qi(m) })),
        ("[J_m, Q_n] = Q_{m+n}", J, QF, Box::new(|_, _| Rhs { terms: vec![(qi(1), QF)], central: Q::zero() })),
        ("[J_m, G_n] = -G_{m+n}", J, G, Box::new(|_, _| Rhs { terms: vec![(qi(-1), G)], central: Q::zero() })),
        ("{Q_m, Q_n} = 0", QF, QF, Box::new(|_, _| Rhs { terms: vec![], central: Q::zero() })),
        ("{G_m, G_n} = 0", G, G, Box::new(|_, _| Rhs { terms: vec![], central: Q::zero() })),
        (
            "{Q_m, G_n} = L_{m+n} + m J_{m+n} + (N/2)m(m-1)",
            QF,
            G,
            Box::new(|m, _| Rhs { terms: vec![(qi(1), L), (qi(m), J)], central: &half_n * qi(m * (m - 1)) }),
        ),
    ];
    let mut out = Vec::new();
    for (name, fa, fb, rhs) in relations {
        let mut check = RelationCheck::new(name);
        for m in -max_mode..=max_mode {
            for n in -max_mode..=max_mode {
                let a = table.get(fa, m)?.cloned();
                let b = table.get(fb, n)?.cloned();
                let (Some(a), Some(b)) = (a, b) else {
                    check.skipped += 1;
                    continue;
                };
                let br = match a.bracket(&b) {
                    Ok(br) => br,
                    Err(FieldError::Truncation(_)) => {
                        check.skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let r = rhs(m, n);
                let expected = expected_matrix(&mut table, &r, m + n, &br)?;
                check.instances += 1;
                check.vectors += br.domain().len();
                let mismatch = match &expected {
                    Some(e) => br.first_mismatch(e),
                    None => br.columns().iter().zip(br.domain().states()).find(|(c, _)| !c.is_zero()).map(|(c, s)| super::Mismatch {
                        block: (br.domain().weight(s), br.domain().charge(s)),
                        state: s.display(module.mg()),
                        left: c.display(module.mg()),
                        right: "0".into(),
                    }),
                };
                if let (Some(mm), None) = (mismatch, &check.failure) {
                    check.failure = Some(format!("m={m}, n={n}: {mm}"));
                }
            }
        }
        out.push(check);
    }
    Ok(out)
}

fn expected_matrix(table: &mut ModeTable, r: &Rhs, level: i64, like: &OperatorMatrix) -> Result<Option<OperatorMatrix>, FieldError> {
    let mut parts: Vec<(Q, OperatorMatrix)> = Vec::new();
    for (c, f) in &r.terms {
        if c.is_zero() {
            continue;
        }
        match table.get(*f, level)? {
            Some(m) => parts.push((c.clone(), m.clone())),
            None => return Err(FieldError::Truncation(format!("right-hand side at level {level}"))),
        }
    }
    if level == 0 && !r.central.is_zero() {
        let id = scalar_matrix(table.module, 1, like.domain().w_max(), like.domain().b0_cap())?;
        parts.push((r.central.clone(), id));
    }
    if parts.is_empty() {
        return Ok(None);
    }
    // Scalars carry no parity or charge; match them to the bracket.
    if parts.iter().any(|(_, m)| m.level() != like.level() || m.charge() != like.charge() || m.is_odd() != like.is_odd()) {
        return Err(FieldError::IncompatibleOperands);
    }
    let refs: Vec<(Q, &OperatorMatrix)> = parts.iter().map(|(c, m)| (c.clone(), m)).collect();
    OperatorMatrix::linear_combination(&refs).map(Some)
}

/// Admissible monomial vector fields `t^I ∂_j` of degree `<= max_degree`.
pub fn admissible_monomials(module: &FockModule, max_degree: u32) -> Vec<VectorField> {
    let n = module.n();
    let mut out = Vec::new();
    for m in Monomial::all_up_to(n, max_degree) {
        for j in 0..n {
            if monomial_admissible(&m, j, module.twist()) {
                out.push(VectorField::monomial(m.0.clone(), j));
            }
        }
    }
    out
}

/// `[ν(v), ν(w)] = ν([v, w])` for every pair of admissible monomial vector
/// fields of degree `<= max_degree`.
pub fn vector_field_suite(module: &Arc<FockModule>, w_max: Rat, max_degree: u32, b0_cap: u32) -> Result<RelationCheck, FieldError> {
    let fields = admissible_monomials(module, max_degree);
    let ops: Vec<OperatorMatrix> =
        fields.iter().map(|v| vector_field_operator(v, module, w_max, Some(b0_cap))).collect::<Result<_, _>>()?;
    let mut check = RelationCheck::new("[nu(v), nu(w)] = nu([v, w])");
    for i in 0..fields.len() {
        for j in i..fields.len() {
            let br = ops[i].bracket(&ops[j])?;
            let vw = fields[i].bracket(&fields[j]);
            check.instances += 1;
            check.vectors += br.domain().len();
            let mismatch = if vw.is_zero() {
                br.columns().iter().zip(br.domain().states()).find(|(c, _)| !c.is_zero()).map(|(_, s)| s.display(module.mg()))
            } else {
                let rhs = vector_field_operator(&vw, module, w_max, Some(b0_cap))?;
                br.first_mismatch(&rhs).map(|m| m.to_string())
            };
            if let (Some(mm), None) = (mismatch, &check.failure) {
                check.failure = Some(format!("[{}, {}]: {mm}", fields[i], fields[j]));
            }
        }
    }
    Ok(check)
}

/// Zero mode operators `G_0`, `Q_0`, `L_0` on the basis of weight `<= w_max`.
pub(crate) fn zero_modes(module: &Arc<FockModule>, w_max: Rat, b0_cap: Option<u32>) -> Result<[OperatorMatrix; 3], FieldError> {
    let f = twisted_standard_fields(module.twist());
    let z = Rat::zero();
    Ok([
        field_mode_operator_capped(&f.g, z, module, w_max, b0_cap)?,
        field_mode_operator_capped(&f.q, z, module, w_max, b0_cap)?,
        field_mode_operator_capped(&f.l, z, module, w_max, b0_cap)?,
    ])
}

/// Determines the global sign `s` with `{G_0, Q_0} = s L_0` and checks it on
/// every basis vector. Returns the sign and the check record.
pub fn homotopy_sign_check(module: &Arc<FockModule>, w_max: Rat, b0_cap: Option<u32>) -> Result<(i64, RelationCheck), FieldError> {
    let [g0, q0, l0] = zero_modes(module, w_max, b0_cap)?;
    let anti = g0.bracket(&q0)?;
    let mut check = RelationCheck::new("{G_0, Q_0} = s L_0");
    check.instances = 1;
    check.vectors = anti.domain().len();
    let sign = if anti.first_mismatch(&l0).is_none() {
        1
    } else if anti.first_mismatch(&l0.scale(&q_from_int(-1))).is_none() {
        -1
    } else {
        check.failure = anti.first_mismatch(&l0).map(|m| m.to_string());
        0
    };
    Ok((sign, check))
}
