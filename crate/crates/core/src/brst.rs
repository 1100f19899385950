//! The differential `d = -Q_0`, the homotopy `{G_0, d} = -L_0`, and blockwise
//! cohomology of truncated Fock modules.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{fmt_rat, q_from_int, Rat, Q};
use crate::fields::{twisted_standard_fields, zero_modes, FieldError, OperatorMatrix, RelationCheck};
use crate::fock::{Block, FockModule};

/// `-Q_0` on the basis of weight `<= w_max`.
pub fn brst_operator(module: &Arc<FockModule>, w_max: Rat, b0_cap: Option<u32>) -> Result<OperatorMatrix, FieldError> {
    let f = twisted_standard_fields(module.twist());
    let q0 = OperatorMatrix::from_expr(crate::fields::OperatorExpr::mode(&f.q, Rat::zero()), module, w_max, b0_cap)?;
    Ok(q0.scale(&q_from_int(-1)))
}

/// Result of checking `{G_0, d} = sign · L_0` block by block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyReport {
    /// `-1` under the conventions here (`{G_0, Q_0} = L_0`); `0` if neither
    /// sign works.
    pub sign: i64,
    pub blocks: Vec<(Block, bool)>,
    pub failure: Option<String>,
}

impl HomotopyReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none() && self.sign != 0
    }
}

pub fn homotopy_identity_check(module: &Arc<FockModule>, w_max: Rat, b0_cap: Option<u32>) -> Result<HomotopyReport, FieldError> {
    let [g0, _, l0] = zero_modes(module, w_max, b0_cap)?;
    let d = brst_operator(module, w_max, b0_cap)?;
    let anti = g0.bracket(&d)?;
    let mut report = HomotopyReport { sign: 0, blocks: Vec::new(), failure: None };
    for sign in [-1i64, 1] {
        let rhs = l0.scale(&q_from_int(sign));
        if anti.first_mismatch(&rhs).is_none() {
            report.sign = sign;
            break;
        }
    }
    let rhs = l0.scale(&q_from_int(if report.sign == 0 { -1 } else { report.sign }));
    let basis = anti.domain().clone();
    for (block, range) in basis.blocks() {
        let ok = range.clone().all(|i| anti.columns()[i] == rhs.image(&basis.states()[i]));
        if !ok && report.failure.is_none() {
            report.failure = Some(format!("block (w={}, p={})", fmt_rat(&block.0), fmt_rat(&block.1)));
        }
        report.blocks.push((*block, ok));
    }
    Ok(report)
}

/// `d ∘ d = 0` on every basis vector.
pub fn d_squared_check(module: &Arc<FockModule>, w_max: Rat, b0_cap: Option<u32>) -> Result<RelationCheck, FieldError> {
    let d = brst_operator(module, w_max, b0_cap)?;
    let dd = d.compose(&d)?;
    let failure = dd
        .columns()
        .iter()
        .zip(dd.domain().states())
        .find(|(c, _)| !c.is_zero())
        .map(|(c, s)| format!("d^2 {} = {}", s.display(module.mg()), c.display(module.mg())));
    Ok(RelationCheck { relation: "d^2 = 0".into(), instances: 1, skipped: 0, vectors: dd.domain().len(), failure })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyEntry {
    pub dim: usize,
    pub kernel: usize,
    /// Rank of the incoming differential.
    pub image: usize,
}

impl CohomologyEntry {
    pub fn cohomology(&self) -> usize {
        self.kernel - self.image
    }
}

/// Blockwise `ker d / im d` on a truncated module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub w_max: Rat,
    pub b0_cap: Option<u32>,
    pub entries: BTreeMap<Block, CohomologyEntry>,
}

impl CohomologyTable {
    /// Blocks with nonzero cohomology.
    pub fn support(&self) -> BTreeMap<Block, usize> {
        self.entries.iter().filter(|(_, e)| e.cohomology() > 0).map(|(b, e)| (*b, e.cohomology())).collect()
    }

    pub fn total(&self) -> usize {
        self.entries.values().map(CohomologyEntry::cohomology).sum()
    }

    /// All cohomology sits at weight zero.
    pub fn concentrated_in_weight_zero(&self) -> bool {
        self.support().keys().all(|(w, _)| w.is_zero())
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>8} {:>8} {:>6} {:>6} {:>6} {:>6}", "weight", "charge", "dim", "ker", "im", "H")?;
        for ((w, p), e) in &self.entries {
            writeln!(f, "{:>8} {:>8} {:>6} {:>6} {:>6} {:>6}", fmt_rat(w), fmt_rat(p), e.dim, e.kernel, e.image, e.cohomology())?;
        }
        Ok(())
    }
}

/// Cohomology of `d` on every `(weight, charge)` block of weight `<= w_max`.
pub fn cohomology_table(module: &Arc<FockModule>, w_max: Rat, b0_cap: Option<u32>) -> Result<CohomologyTable, FieldError> {
    let d = brst_operator(module, w_max, b0_cap)?;
    let basis = d.domain().clone();
    let cols = d.sparse_columns(&basis)?;
    let blocks: Vec<(Block, std::ops::Range<usize>)> = basis.blocks().iter().map(|(b, r)| (*b, r.clone())).collect();
    let ranks: BTreeMap<Block, usize> = blocks
        .par_iter()
        .map(|(b, r)| {
            let block_cols: Vec<Vec<(usize, Q)>> = r.clone().map(|i| cols[i].clone()).collect();
            (*b, rank(&block_cols))
        })
        .collect();
    let mut entries = BTreeMap::new();
    for (b, r) in &blocks {
        let dim = r.len();
        let out_rank = ranks[b];
        let prev = (b.0, b.1 - Rat::one());
        let image = ranks.get(&prev).copied().unwrap_or(0);
        entries.insert(*b, CohomologyEntry { dim, kernel: dim - out_rank, image });
    }
    Ok(CohomologyTable { w_max: basis.w_max(), b0_cap, entries })
}

/// Rank of a sparse matrix given by columns, by exact elimination with the
/// lowest row index as pivot.
pub fn rank(columns: &[Vec<(usize, Q)>]) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
    for col in columns {
        let mut v: BTreeMap<usize, Q> = col.iter().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (*i, c.clone())).collect();
        while let Some((&lead, lead_c)) = v.iter().next() {
            match pivots.get(&lead) {
                Some(p) => {
                    let factor = lead_c / &p[&lead];
                    for (i, c) in p {
                        let e = v.entry(*i).or_insert_with(Q::zero);
                        *e -= &factor * c;
                        if e.is_zero() {
                            v.remove(i);
                        }
                    }
                }
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}
