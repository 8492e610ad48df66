//! Quadratic and bilinear Pfister forms over Laurent towers in
//! characteristic 2: the non-linkage counterexample families, a
//! valuation-based anisotropy criterion with a brute-force search as its
//! independent check, square-span generator sets with windowed
//! intersection dimensions, and the residue-based common-factor
//! construction away from characteristic 2.

mod anisotropy;
mod linkage;
mod span;

pub use anisotropy::{anisotropic_by_values, brute_force_isotropy, AnisotropyVerdict, IsotropyOutcome};
pub use linkage::{
    bilinear_linkage_status, charneq2_common_factor, in_span, slot_mask, span_masks,
    CommonFactorOutcome, LinkageStatus,
};
pub use span::{f2span_intersection_dim, pure_subform_genset, SpanIntersection};

use crate::laurent::{FieldTower, LaurentPoly};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("this construction needs characteristic 2")]
    CharNotTwo,
    #[error("the construction needs n >= 2, got {0}")]
    TooFewSlots(usize),
    #[error("the tower must have {expected} variables, got {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("form slots must be nonzero")]
    ZeroSlot,
    #[error("slot shape not supported: {0}")]
    UnsupportedSlotShape(String),
    #[error("square-span computations are implemented over the base field F2 only")]
    NonF2Base,
    #[error("window too small to contain all generators")]
    WindowTooSmall,
    #[error("slot lists have mismatched lengths: {0} vs {1}")]
    SlotCountMismatch(usize, usize),
    #[error("the 2-rank {0} is below n = {1}; there are no anisotropic n-fold forms")]
    TwoRankBelowN(u32, u32),
}

/// Bilinear Pfister form <<a_1, ..., a_n>>.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilPfister {
    tower: FieldTower,
    slots: Vec<LaurentPoly>,
}

impl BilPfister {
    pub fn new(tower: FieldTower, slots: Vec<LaurentPoly>) -> Result<Self, FormError> {
        if slots.iter().any(LaurentPoly::is_zero) {
            return Err(FormError::ZeroSlot);
        }
        Ok(BilPfister { tower, slots })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn slots(&self) -> &[LaurentPoly] {
        &self.slots
    }

    pub fn fold(&self) -> usize {
        self.slots.len()
    }
}

impl fmt::Display for BilPfister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<<")?;
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ">>")
    }
}

/// Quadratic Pfister form <<a_1, ..., a_{n-1}; b]] in characteristic 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadPfister {
    tower: FieldTower,
    bil_slots: Vec<LaurentPoly>,
    as_slot: LaurentPoly,
}

impl QuadPfister {
    pub fn new(
        tower: FieldTower,
        bil_slots: Vec<LaurentPoly>,
        as_slot: LaurentPoly,
    ) -> Result<Self, FormError> {
        if tower.p() != 2 {
            return Err(FormError::CharNotTwo);
        }
        if bil_slots.iter().any(LaurentPoly::is_zero) {
            return Err(FormError::ZeroSlot);
        }
        Ok(QuadPfister {
            tower,
            bil_slots,
            as_slot,
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn bil_slots(&self) -> &[LaurentPoly] {
        &self.bil_slots
    }

    pub fn as_slot(&self) -> &LaurentPoly {
        &self.as_slot
    }

    pub fn fold(&self) -> usize {
        self.bil_slots.len() + 1
    }
}

impl fmt::Display for QuadPfister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<<")?;
        for (i, s) in self.bil_slots.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "; {}]]", self.as_slot)
    }
}

/// One summand `c * <<multiplier>> (x) [1, w]`, where `[1, w]` is the
/// binary quadratic form `x^2 + xy + w y^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    scalar: LaurentPoly,
    multiplier: Vec<LaurentPoly>,
    w: LaurentPoly,
}

impl Block {
    pub fn new(scalar: LaurentPoly, multiplier: Vec<LaurentPoly>, w: LaurentPoly) -> Result<Self, FormError> {
        if scalar.is_zero() || multiplier.iter().any(LaurentPoly::is_zero) {
            return Err(FormError::ZeroSlot);
        }
        Ok(Block { scalar, multiplier, w })
    }

    pub fn scalar(&self) -> &LaurentPoly {
        &self.scalar
    }

    pub fn multiplier(&self) -> &[LaurentPoly] {
        &self.multiplier
    }

    pub fn w(&self) -> &LaurentPoly {
        &self.w
    }

    /// The 2^{multiplier length} scale factors of the binary pairs inside
    /// the block: products over slot subsets.
    pub fn expanded_scales(&self) -> Vec<LaurentPoly> {
        let mut scales = vec![self.scalar.clone()];
        for slot in &self.multiplier {
            let mut next = Vec::with_capacity(scales.len() * 2);
            for s in &scales {
                next.push(s.clone());
                next.push(s.mul(slot));
            }
            scales = next;
        }
        scales
    }
}

/// Orthogonal sum of blocks plus a residual diagonal bilinear part, all in
/// characteristic 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    tower: FieldTower,
    blocks: Vec<Block>,
    diag: Vec<LaurentPoly>,
}

impl BlockForm {
    pub fn new(tower: FieldTower, blocks: Vec<Block>, diag: Vec<LaurentPoly>) -> Result<Self, FormError> {
        if tower.p() != 2 {
            return Err(FormError::CharNotTwo);
        }
        if diag.iter().any(LaurentPoly::is_zero) {
            return Err(FormError::ZeroSlot);
        }
        Ok(BlockForm { tower, blocks, diag })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn diag(&self) -> &[LaurentPoly] {
        &self.diag
    }

    /// All binary pairs (scale, w): the quadratic form is the sum of
    /// scale * (x^2 + xy + w y^2) over the pairs, plus d * z^2 over diag.
    pub fn expanded_pairs(&self) -> Vec<(LaurentPoly, LaurentPoly)> {
        self.blocks
            .iter()
            .flat_map(|b| {
                b.expanded_scales()
                    .into_iter()
                    .map(move |s| (s, b.w().clone()))
            })
            .collect()
    }

    /// Dimension of the underlying quadratic space.
    pub fn dim(&self) -> usize {
        2 * self
            .blocks
            .iter()
            .map(|b| 1usize << b.multiplier.len())
            .sum::<usize>()
            + self.diag.len()
    }
}

impl fmt::Display for BlockForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in &self.blocks {
            if !first {
                write!(f, " _|_ ")?;
            }
            first = false;
            let scalar = b.scalar().to_string();
            if scalar != "1" {
                write!(f, "{scalar}*")?;
            }
            if !b.multiplier.is_empty() {
                write!(f, "<<")?;
                for (i, s) in b.multiplier.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ">>*")?;
            }
            write!(f, "[1, {}]", b.w())?;
        }
        for d in &self.diag {
            if !first {
                write!(f, " _|_ ")?;
            }
            first = false;
            write!(f, "<{d}>")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Generator set of a square-span: the F^2-span of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2SpanGenSet {
    tower: FieldTower,
    generators: Vec<LaurentPoly>,
}

impl F2SpanGenSet {
    pub fn new(tower: FieldTower, generators: Vec<LaurentPoly>) -> Result<Self, FormError> {
        if generators.iter().any(LaurentPoly::is_zero) {
            return Err(FormError::ZeroSlot);
        }
        Ok(F2SpanGenSet { tower, generators })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn generators(&self) -> &[LaurentPoly] {
        &self.generators
    }
}

/// The parameter of the Witt sum of [1, u] and [1, v]: in characteristic 2
/// the sum is [1, u + v] plus a hyperbolic plane.
pub fn witt_block_sum(u: &LaurentPoly, v: &LaurentPoly) -> LaurentPoly {
    assert_eq!(u.tower().p(), 2, "Witt block sum is a characteristic-2 rule");
    u.add(v)
}

/// The pair of quadratic n-fold forms over an (n+1)-variable tower that
/// share no (n-1)-fold factor, together with the block form Witt
/// equivalent to their sum.
pub fn quad_linkage_counterexample(
    n: usize,
    tower: &FieldTower,
) -> Result<(QuadPfister, QuadPfister, BlockForm), FormError> {
    if tower.p() != 2 {
        return Err(FormError::CharNotTwo);
    }
    if n < 2 {
        return Err(FormError::TooFewSlots(n));
    }
    if tower.n() != n + 1 {
        return Err(FormError::VariableCount {
            expected: n + 1,
            got: tower.n(),
        });
    }
    let common: Vec<LaurentPoly> = (0..n - 2).map(|i| tower.var(i)).collect();
    let phi = QuadPfister::new(
        tower.clone(),
        common.iter().cloned().chain([tower.var(n - 2)]).collect(),
        tower.var_pow(n - 1, -1),
    )?;
    let psi = QuadPfister::new(
        tower.clone(),
        common.iter().cloned().chain([tower.var(n - 1)]).collect(),
        tower.var_pow(n, -1),
    )?;
    let w1 = witt_block_sum(&tower.var_pow(n - 1, -1), &tower.var_pow(n, -1));
    let omega = BlockForm::new(
        tower.clone(),
        vec![
            Block::new(tower.one(), common.clone(), w1)?,
            Block::new(tower.var(n - 2), common.clone(), tower.var_pow(n - 1, -1))?,
            Block::new(tower.var(n - 1), common, tower.var_pow(n, -1))?,
        ],
        Vec::new(),
    )?;
    Ok((phi, psi, omega))
}

/// The pair of bilinear n-fold forms over a tower with at least n+1
/// variables that share no (n-1)-fold factor.
pub fn bilinear_linkage_counterexample(
    n: usize,
    tower: &FieldTower,
) -> Result<(BilPfister, BilPfister), FormError> {
    if tower.p() != 2 {
        return Err(FormError::CharNotTwo);
    }
    if n < 2 {
        return Err(FormError::TooFewSlots(n));
    }
    if tower.n() < n + 1 {
        return Err(FormError::VariableCount {
            expected: n + 1,
            got: tower.n(),
        });
    }
    let common: Vec<LaurentPoly> = (0..n - 2).map(|i| tower.var(i)).collect();
    let phi = BilPfister::new(
        tower.clone(),
        common
            .iter()
            .cloned()
            .chain([tower.var(n - 2), tower.var(n - 1)])
            .collect(),
    )?;
    let psi = BilPfister::new(
        tower.clone(),
        common
            .into_iter()
            .chain([tower.var(n - 2).add(&tower.one()), tower.var(n)])
            .collect(),
    )?;
    Ok((phi, psi))
}
