//! Common factors of Pfister pairs away from characteristic 2, and the
//! linkage trichotomy in characteristic 2.
//!
//! Away from characteristic 2, slots of anisotropic forms over the tower
//! reduce (Hensel) to square classes, i.e. vectors in F_2^{n_vars}; a
//! common (n-1)-fold factor is a basis of an (n-1)-dimensional subspace of
//! the intersection of the two slot spans. Vectors are packed into u64
//! masks with variable 1 at the most significant position, so reduced
//! echelon form is the lexicographically least basis.

use super::FormError;
use crate::laurent::Monomial;

/// Result of the common-factor construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommonFactorOutcome {
    /// Slots of a common (n-1)-fold factor, as square-class monomials.
    Factor(Vec<Monomial>),
    /// One of the slot spans has dimension < n, so the corresponding form
    /// is isotropic and the construction does not apply.
    AnisotropyViolated,
}

fn mask_of(m: &Monomial, n_vars: usize) -> u64 {
    let mut mask = 0u64;
    for (i, e) in m.exps().iter().enumerate() {
        if e.rem_euclid(2) == 1 {
            mask |= 1 << (n_vars - 1 - i);
        }
    }
    mask
}

fn monomial_of(mask: u64, n_vars: usize) -> Monomial {
    Monomial::new(
        (0..n_vars)
            .map(|i| ((mask >> (n_vars - 1 - i)) & 1) as i64)
            .collect(),
    )
}

/// Reduced row echelon form over F_2 on u64 masks; rows come out sorted by
/// pivot (most significant bit first) with each pivot cleared elsewhere.
fn rref(rows: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            if r & b.leading_bit() != 0 {
                r ^= b;
            }
        }
        if r != 0 {
            for b in basis.iter_mut() {
                if *b & r.leading_bit() != 0 {
                    *b ^= r;
                }
            }
            basis.push(r);
        }
    }
    basis.sort_unstable_by_key(|b| std::cmp::Reverse(b.leading_bit()));
    basis
}

trait LeadingBit {
    fn leading_bit(self) -> u64;
}

impl LeadingBit for u64 {
    fn leading_bit(self) -> u64 {
        if self == 0 {
            0
        } else {
            1u64 << (63 - self.leading_zeros())
        }
    }
}

/// Membership of a packed square class in the span of an echelon basis.
pub fn in_span(v: u64, basis: &[u64]) -> bool {
    let mut r = v;
    for &b in basis {
        if r & b.leading_bit() != 0 {
            r ^= b;
        }
    }
    r == 0
}

/// Common (n-1)-fold factor of two anisotropic n-fold slot lists given as
/// square-class monomials over `n_vars` variables. Returns
/// `AnisotropyViolated` when either slot list is F_2-dependent, otherwise
/// the lexicographically least (n-1) basis vectors of the span
/// intersection.
pub fn charneq2_common_factor(
    phi_slots: &[Monomial],
    psi_slots: &[Monomial],
    n_vars: usize,
) -> Result<CommonFactorOutcome, FormError> {
    if phi_slots.len() != psi_slots.len() {
        return Err(FormError::SlotCountMismatch(phi_slots.len(), psi_slots.len()));
    }
    let n = phi_slots.len();
    if n == 0 {
        return Err(FormError::TooFewSlots(0));
    }
    assert!(n_vars <= 64, "square classes are packed into u64 masks");
    for m in phi_slots.iter().chain(psi_slots) {
        assert_eq!(m.len(), n_vars, "slot arity mismatch");
    }
    let wa = rref(&phi_slots.iter().map(|m| mask_of(m, n_vars)).collect::<Vec<_>>());
    let wb = rref(&psi_slots.iter().map(|m| mask_of(m, n_vars)).collect::<Vec<_>>());
    if wa.len() < n || wb.len() < n {
        return Ok(CommonFactorOutcome::AnisotropyViolated);
    }
    // intersection basis: rows (a | a) and (b | 0); after eliminating on
    // the high half, rows with zero high half carry intersection elements
    // in the low half
    let shift = n_vars as u32;
    let rows: Vec<u64> = wa
        .iter()
        .map(|&a| (a << shift) | a)
        .chain(wb.iter().map(|&b| b << shift))
        .collect();
    let reduced = rref(&rows);
    let low_mask = (1u64 << shift) - 1;
    let inter_rows: Vec<u64> = reduced
        .iter()
        .filter(|&&r| r >> shift == 0)
        .map(|&r| r & low_mask)
        .collect();
    let inter = rref(&inter_rows);
    debug_assert!(inter.len() + 1 >= n, "dim(A) + dim(B) - dim(A+B) >= n - 1");
    let factor = inter
        .iter()
        .take(n - 1)
        .map(|&mask| monomial_of(mask, n_vars))
        .collect();
    Ok(CommonFactorOutcome::Factor(factor))
}

/// Echelon basis of the span of the given square classes.
pub fn span_masks(slots: &[Monomial], n_vars: usize) -> Vec<u64> {
    rref(&slots.iter().map(|m| mask_of(m, n_vars)).collect::<Vec<_>>())
}

/// Pack one square class into a u64 mask (variable 1 most significant).
pub fn slot_mask(m: &Monomial, n_vars: usize) -> u64 {
    mask_of(m, n_vars)
}

/// The linkage trichotomy for towers in characteristic 2 whose n-th power
/// ideal is nonzero: linked, 3-linked, and 2-rank equal to n are all
/// equivalent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkageStatus {
    pub two_rank: u32,
    pub n: u32,
    pub linked: bool,
    pub three_linked: bool,
    pub lines: Vec<String>,
}

pub fn bilinear_linkage_status(two_rank: u32, n: u32) -> Result<LinkageStatus, FormError> {
    if two_rank < n {
        return Err(FormError::TwoRankBelowN(two_rank, n));
    }
    let equal = two_rank == n;
    let lines = if equal {
        vec![
            format!("2-rank {two_rank} equals n = {n}"),
            "linked and 3-linked: the three conditions are equivalent and all hold".into(),
        ]
    } else {
        vec![
            format!("2-rank {two_rank} exceeds n = {n}"),
            "not linked: a pair of anisotropic n-fold forms shares no (n-1)-fold factor \
             (square-span intersection falls below the threshold)"
                .into(),
            "not 3-linked: 3-linkage implies linkage".into(),
        ]
    };
    Ok(LinkageStatus {
        two_rank,
        n,
        linked: equal,
        three_linked: equal,
        lines,
    })
}
