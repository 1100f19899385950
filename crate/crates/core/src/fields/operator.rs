use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::apply::apply_field_mode;
use super::{FieldError, FieldExpr};
use crate::arith::{fmt_q, fmt_rat, q_from_int, Rat, Q};
use crate::fock::{Basis, Block, FockModule, FockState, FockVector};

/// Symbolic operator built from field modes; applies exactly to any vector.
#[derive(Clone, Debug)]
pub enum OperatorExpr {
    Mode {
        field: Arc<FieldExpr>,
        n: Rat,
    },
    /// `c · Id`.
    Scalar(Q),
    /// `A ∘ B`.
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
    /// `AB - (-1)^{|A||B|} BA`.
    Bracket(Box<OperatorExpr>, Box<OperatorExpr>),
    Lin(Vec<(Q, OperatorExpr)>),
}

impl OperatorExpr {
    pub fn mode(field: &Arc<FieldExpr>, n: Rat) -> Self {
        OperatorExpr::Mode { field: field.clone(), n }
    }

    /// Amount by which the operator lowers the weight.
    pub fn level(&self) -> Rat {
        match self {
            OperatorExpr::Mode { n, .. } => *n,
            OperatorExpr::Scalar(_) => Rat::zero(),
            OperatorExpr::Compose(a, b) | OperatorExpr::Bracket(a, b) => a.level() + b.level(),
            OperatorExpr::Lin(ts) => ts.first().map(|(_, e)| e.level()).unwrap_or_else(Rat::zero),
        }
    }

    pub fn is_odd(&self) -> bool {
        match self {
            OperatorExpr::Mode { field, .. } => field.is_odd(),
            OperatorExpr::Scalar(_) => false,
            OperatorExpr::Compose(a, b) | OperatorExpr::Bracket(a, b) => a.is_odd() ^ b.is_odd(),
            OperatorExpr::Lin(ts) => ts.first().map(|(_, e)| e.is_odd()).unwrap_or(false),
        }
    }

    pub fn charge(&self) -> i64 {
        match self {
            OperatorExpr::Mode { field, .. } => field.charge(),
            OperatorExpr::Scalar(_) => 0,
            OperatorExpr::Compose(a, b) | OperatorExpr::Bracket(a, b) => a.charge() + b.charge(),
            OperatorExpr::Lin(ts) => ts.first().map(|(_, e)| e.charge()).unwrap_or(0),
        }
    }

    pub fn apply(&self, module: &FockModule, v: &FockVector) -> FockVector {
        match self {
            OperatorExpr::Mode { field, n } => apply_field_mode(field, *n, module, v),
            OperatorExpr::Scalar(c) => v.scale(c),
            OperatorExpr::Compose(a, b) => a.apply(module, &b.apply(module, v)),
            OperatorExpr::Bracket(a, b) => {
                let ab = a.apply(module, &b.apply(module, v));
                let ba = b.apply(module, &a.apply(module, v));
                if a.is_odd() && b.is_odd() {
                    ab.add(&ba)
                } else {
                    ab.sub(&ba)
                }
            }
            OperatorExpr::Lin(ts) => {
                let mut out = FockVector::zero();
                for (c, e) in ts {
                    out.add_assign_scaled(&e.apply(module, v), c);
                }
                out
            }
        }
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Mode { field, n } => write!(f, "{}_{{{}}}", field.name(), fmt_rat(n)),
            OperatorExpr::Scalar(c) => write!(f, "{}", fmt_q(c)),
            OperatorExpr::Compose(a, b) => write!(f, "{a} {b}"),
            OperatorExpr::Bracket(a, b) => write!(f, "[{a}, {b}]"),
            OperatorExpr::Lin(ts) => {
                if ts.is_empty() {
                    return write!(f, "0");
                }
                for (i, (c, e)) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    if c.is_one() {
                        write!(f, "{e}")?;
                    } else {
                        write!(f, "({})*{e}", fmt_q(c))?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// First basis vector on which two operators differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub block: Block,
    pub state: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "block (w={}, p={}) state {}: {} != {}",
            fmt_rat(&self.block.0),
            fmt_rat(&self.block.1),
            self.state,
            self.left,
            self.right
        )
    }
}

/// An operator together with its exact images of every basis vector in a
/// truncated domain. The domain is the set of basis states of weight at most
/// `domain().w_max()` (and the given `b_0` cap); images of a level-`n`
/// operator land in weight `w - n`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    expr: OperatorExpr,
    module: Arc<FockModule>,
    domain: Arc<Basis>,
    columns: Vec<FockVector>,
}

fn cap_min(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    }
}

impl OperatorMatrix {
    /// Evaluates `expr` on the basis up to weight `dom_w` (with `b_0` cap).
    pub fn from_expr(expr: OperatorExpr, module: &Arc<FockModule>, dom_w: Rat, b0_cap: Option<u32>) -> Result<Self, FieldError> {
        if dom_w.is_negative() {
            return Err(FieldError::Truncation(format!("{expr} has empty domain (w <= {})", fmt_rat(&dom_w))));
        }
        let domain = module.basis_up_to(dom_w, b0_cap)?;
        let columns = domain.states().par_iter().map(|s| expr.apply(module, &FockVector::basis(s.clone()))).collect();
        Ok(OperatorMatrix { expr, module: module.clone(), domain, columns })
    }

    pub fn identity(module: &Arc<FockModule>, dom_w: Rat, b0_cap: Option<u32>) -> Result<Self, FieldError> {
        Self::from_expr(OperatorExpr::Scalar(Q::one()), module, dom_w, b0_cap)
    }

    pub fn expr(&self) -> &OperatorExpr {
        &self.expr
    }

    pub fn module(&self) -> &Arc<FockModule> {
        &self.module
    }

    pub fn domain(&self) -> &Arc<Basis> {
        &self.domain
    }

    pub fn columns(&self) -> &[FockVector] {
        &self.columns
    }

    pub fn level(&self) -> Rat {
        self.expr.level()
    }

    pub fn is_odd(&self) -> bool {
        self.expr.is_odd()
    }

    pub fn charge(&self) -> i64 {
        self.expr.charge()
    }

    /// Blocks of the domain on which this operator is represented.
    pub fn blocks(&self) -> Vec<Block> {
        self.domain.blocks().keys().copied().collect()
    }

    pub fn image(&self, s: &FockState) -> FockVector {
        match self.domain.index_of(s) {
            Some(i) => self.columns[i].clone(),
            None => self.expr.apply(&self.module, &FockVector::basis(s.clone())),
        }
    }

    fn image_of(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (s, c) in v.iter() {
            match self.domain.index_of(s) {
                Some(i) => out.add_assign_scaled(&self.columns[i], c),
                None => out.add_assign_scaled(&self.expr.apply(&self.module, &FockVector::basis(s.clone())), c),
            }
        }
        out
    }

    /// Domain on which `self ∘ other` is represented.
    fn compose_domain(&self, other: &OperatorMatrix) -> (Rat, Option<u32>) {
        let w = other.domain.w_max().min(self.domain.w_max() + other.level());
        (w, cap_min(self.domain.b0_cap(), other.domain.b0_cap()))
    }

    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, FieldError> {
        let (w, cap) = self.compose_domain(other);
        self.combine(other, w, cap, OperatorExpr::Compose(Box::new(self.expr.clone()), Box::new(other.expr.clone())), |a, b, s| {
            a.image_of(&b.image(s))
        })
    }

    /// Graded commutator on the blocks where both orders are represented.
    pub fn bracket(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, FieldError> {
        let (w1, c1) = self.compose_domain(other);
        let (w2, c2) = other.compose_domain(self);
        let anti = self.is_odd() && other.is_odd();
        self.combine(
            other,
            w1.min(w2),
            cap_min(c1, c2),
            OperatorExpr::Bracket(Box::new(self.expr.clone()), Box::new(other.expr.clone())),
            |a, b, s| {
                let ab = a.image_of(&b.image(s));
                let ba = b.image_of(&a.image(s));
                if anti {
                    ab.add(&ba)
                } else {
                    ab.sub(&ba)
                }
            },
        )
    }

    fn combine(
        &self,
        other: &OperatorMatrix,
        w: Rat,
        cap: Option<u32>,
        expr: OperatorExpr,
        f: impl Fn(&OperatorMatrix, &OperatorMatrix, &FockState) -> FockVector + Sync,
    ) -> Result<OperatorMatrix, FieldError> {
        if w.is_negative() {
            return Err(FieldError::Truncation(format!("{expr} needs weight above the truncation")));
        }
        let domain = self.module.basis_up_to(w, cap)?;
        let columns = domain.states().par_iter().map(|s| f(self, other, s)).collect();
        Ok(OperatorMatrix { expr, module: self.module.clone(), domain, columns })
    }

    /// `Σ c_i A_i` on the common domain; all operands must share level,
    /// parity and charge (scalars are allowed at level 0).
    pub fn linear_combination(terms: &[(Q, &OperatorMatrix)]) -> Result<OperatorMatrix, FieldError> {
        let first = terms.first().ok_or(FieldError::IncompatibleOperands)?.1;
        let mut w = first.domain.w_max();
        let mut cap = first.domain.b0_cap();
        for (_, t) in terms {
            if t.level() != first.level() || t.is_odd() != first.is_odd() || t.charge() != first.charge() {
                return Err(FieldError::IncompatibleOperands);
            }
            w = w.min(t.domain.w_max());
            cap = cap_min(cap, t.domain.b0_cap());
        }
        let expr = OperatorExpr::Lin(terms.iter().map(|(c, t)| (c.clone(), t.expr.clone())).collect());
        let domain = first.module.basis_up_to(w, cap)?;
        let columns = domain
            .states()
            .par_iter()
            .map(|s| {
                let mut out = FockVector::zero();
                for (c, t) in terms {
                    out.add_assign_scaled(&t.image(s), c);
                }
                out
            })
            .collect();
        Ok(OperatorMatrix { expr, module: first.module.clone(), domain, columns })
    }

    pub fn scale(&self, c: &Q) -> OperatorMatrix {
        OperatorMatrix {
            expr: OperatorExpr::Lin(vec![(c.clone(), self.expr.clone())]),
            module: self.module.clone(),
            domain: self.domain.clone(),
            columns: self.columns.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// First basis vector of the common domain where the operators differ.
    pub fn first_mismatch(&self, other: &OperatorMatrix) -> Option<Mismatch> {
        let (small, _) = if self.domain.len() <= other.domain.len() { (self, other) } else { (other, self) };
        let mg = self.module.mg();
        for s in small.domain.states() {
            if !self.domain.contains(s) || !other.domain.contains(s) {
                continue;
            }
            let (l, r) = (self.image(s), other.image(s));
            if l != r {
                return Some(Mismatch {
                    block: (small.domain.weight(s), small.domain.charge(s)),
                    state: s.display(mg),
                    left: l.display(mg),
                    right: r.display(mg),
                });
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(FockVector::is_zero)
    }

    /// Columns expressed in a target basis as sparse `(row, value)` lists.
    pub fn sparse_columns(&self, target: &Basis) -> Result<Vec<Vec<(usize, Q)>>, FieldError> {
        self.columns
            .iter()
            .map(|v| {
                v.iter()
                    .map(|(s, c)| {
                        target
                            .index_of(s)
                            .map(|i| (i, c.clone()))
                            .ok_or_else(|| FieldError::Truncation(format!("image {} outside target basis", s.display(self.module.mg()))))
                    })
                    .collect()
            })
            .collect()
    }
}

/// `F_n` on the basis of weight `w <= min(w_max, w_max + n)`, so that every
/// image stays below `w_max`.
pub fn field_mode_operator(field: &Arc<FieldExpr>, n: Rat, module: &Arc<FockModule>, w_max: Rat) -> Result<OperatorMatrix, FieldError> {
    field_mode_operator_capped(field, n, module, w_max, None)
}

pub(crate) fn field_mode_operator_capped(
    field: &Arc<FieldExpr>,
    n: Rat,
    module: &Arc<FockModule>,
    w_max: Rat,
    b0_cap: Option<u32>,
) -> Result<OperatorMatrix, FieldError> {
    let dom = w_max.min(w_max + n);
    if dom.is_negative() {
        return Err(FieldError::Truncation(format!("{}_{{{}}} raises weight past w_max = {}", field.name(), fmt_rat(&n), fmt_rat(&w_max))));
    }
    OperatorMatrix::from_expr(OperatorExpr::mode(field, n), module, dom, b0_cap)
}

pub fn operator_bracket(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix, FieldError> {
    a.bracket(b)
}

/// `c · Id` matrix, used for central terms.
pub(crate) fn scalar_matrix(module: &Arc<FockModule>, c: i64, dom_w: Rat, b0_cap: Option<u32>) -> Result<OperatorMatrix, FieldError> {
    OperatorMatrix::from_expr(OperatorExpr::Scalar(q_from_int(c)), module, dom_w, b0_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::standard_fields;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn virasoro_l1_lm1() {
        let m = Arc::new(FockModule::untwisted(1));
        let f = standard_fields(1);
        let l1 = field_mode_operator(&f.l, r(1), &m, r(2)).unwrap();
        let lm1 = field_mode_operator(&f.l, r(-1), &m, r(2)).unwrap();
        let l0 = field_mode_operator(&f.l, r(0), &m, r(2)).unwrap();
        let br = operator_bracket(&l1, &lm1).unwrap();
        assert_eq!(br.domain().w_max(), r(1));
        let two_l0 = l0.scale(&q_from_int(2));
        assert_eq!(br.first_mismatch(&two_l0), None);
    }

    #[test]
    fn heisenberg_level_of_j() {
        for n in 1..=2 {
            let m = Arc::new(FockModule::untwisted(n));
            let f = standard_fields(n);
            let j1 = field_mode_operator(&f.j, r(1), &m, r(2)).unwrap();
            let jm1 = field_mode_operator(&f.j, r(-1), &m, r(2)).unwrap();
            let br = operator_bracket(&j1, &jm1).unwrap();
            let id = scalar_matrix(&m, n as i64, r(2), None).unwrap();
            assert_eq!(br.first_mismatch(&id), None);
            assert!(!br.is_zero());
        }
    }

    #[test]
    fn q0_squares_to_zero() {
        let m = Arc::new(FockModule::untwisted(2));
        let f = standard_fields(2);
        let q0 = field_mode_operator(&f.q, r(0), &m, r(2)).unwrap();
        assert!(operator_bracket(&q0, &q0).unwrap().is_zero());
        assert!(!q0.is_zero());
    }

    #[test]
    fn truncation_errors() {
        let m = Arc::new(FockModule::untwisted(1));
        let f = standard_fields(1);
        assert!(matches!(field_mode_operator(&f.l, r(-3), &m, r(2)), Err(FieldError::Truncation(_))));
        let a = field_mode_operator(&f.l, r(-2), &m, r(2)).unwrap();
        assert!(matches!(a.compose(&a), Err(FieldError::Truncation(_))));
        let q0 = field_mode_operator(&f.q, r(0), &m, r(1)).unwrap();
        let small = m.basis_up_to(r(0), None).unwrap();
        assert!(q0.sparse_columns(&small).is_err());
    }
}
