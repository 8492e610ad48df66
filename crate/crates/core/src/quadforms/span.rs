//! Square-span generator sets and windowed intersection dimensions.
//!
//! Over the base field F_2, squaring is F_2-linear on coefficient vectors,
//! so the span `sum F^2 g_i` restricted to scalars supported in a window
//! is the column space of an exact F_2 matrix: one column per (generator,
//! scalar monomial), the column being the generator shifted by the doubled
//! exponent. Intersections are read off by sparse elimination, and the
//! reported dimension is the number of distinct exponent-parity classes
//! among the leading monomials of the intersection — for an intersection
//! spanned over F^2 by generators with distinct leading parities this is
//! exactly the F^2-dimension. The caller checks saturation by growing the
//! window one step in every coordinate.

use super::{BilPfister, F2SpanGenSet, FormError};
use crate::laurent::PrecisionWindow;
use std::collections::{HashMap, HashSet};

/// Generators of the value set of the pure subform of a Pfister form with
/// monomial-or-binomial slots: the 2^n - 1 products of slot subsets.
pub fn pure_subform_genset(phi: &BilPfister) -> Result<F2SpanGenSet, FormError> {
    if phi.tower().p() != 2 {
        return Err(FormError::CharNotTwo);
    }
    for s in phi.slots() {
        if s.num_terms() > 2 {
            return Err(FormError::UnsupportedSlotShape(format!(
                "slot {s} has {} terms; supported slots are monomials and monomial + monomial",
                s.num_terms()
            )));
        }
    }
    let n = phi.fold();
    let mut generators = Vec::with_capacity((1usize << n) - 1);
    for mask in 1u32..(1 << n) {
        let mut g = phi.tower().one();
        for (i, s) in phi.slots().iter().enumerate() {
            if mask >> i & 1 == 1 {
                g = g.mul(s);
            }
        }
        generators.push(g);
    }
    F2SpanGenSet::new(phi.tower().clone(), generators)
}

/// Windowed intersection readout; `stabilized` compares against the window
/// grown by one in every coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanIntersection {
    pub dim_at_window: usize,
    pub stabilized: bool,
}

/// Dimension over F^2 of (span of A) meet (span of B), with square scalars
/// restricted to the window.
pub fn f2span_intersection_dim(
    a: &F2SpanGenSet,
    b: &F2SpanGenSet,
    window: &PrecisionWindow,
) -> Result<SpanIntersection, FormError> {
    let tower = a.tower();
    assert_eq!(tower, b.tower(), "generator sets over different towers");
    let base = tower.base();
    if base.p() != 2 || base.ext_degree() != 1 || base.is_rat_func() {
        return Err(FormError::NonF2Base);
    }
    if window.len() != tower.n() || !window.contains_zero() {
        return Err(FormError::WindowTooSmall);
    }
    let dim_at_window = parity_rank(a, b, window);
    let dim_grown = parity_rank(a, b, &window.grown());
    Ok(SpanIntersection {
        dim_at_window,
        stabilized: dim_at_window == dim_grown,
    })
}

/// Sorted-ids sparse vector over F_2; XOR is symmetric difference.
type SparseVec = Vec<u32>;

fn xor(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn parity_rank(a: &F2SpanGenSet, b: &F2SpanGenSet, window: &PrecisionWindow) -> usize {
    let scalars = window.monomials();
    // index all element monomials 2e + f in valuation order, so that the
    // minimum id of a sparse vector is its leading monomial
    let mut all_monos: Vec<Vec<i64>> = Vec::new();
    for gens in [a.generators(), b.generators()] {
        for g in gens {
            for (f, _) in g.terms() {
                for e in &scalars {
                    let m: Vec<i64> = e.iter().zip(f.exps()).map(|(x, y)| 2 * x + y).collect();
                    all_monos.push(m);
                }
            }
        }
    }
    all_monos.sort_by(|x, y| crate::laurent::value::cmp_right_to_left(x, y));
    all_monos.dedup();
    let ids: HashMap<&[i64], u32> = all_monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i as u32))
        .collect();
    let column = |g: &crate::laurent::LaurentPoly, e: &[i64]| -> SparseVec {
        let mut col: SparseVec = g
            .terms()
            .map(|(f, _)| {
                let m: Vec<i64> = e.iter().zip(f.exps()).map(|(x, y)| 2 * x + y).collect();
                ids[m.as_slice()]
            })
            .collect();
        col.sort_unstable();
        col
    };

    // eliminate all columns, tracking the contribution of the A side; a
    // column combination that cancels completely is an element of both
    // spans, and its tracked A-side value is that element
    let mut stored: Vec<(SparseVec, SparseVec)> = Vec::new();
    let mut pivots: HashMap<u32, usize> = HashMap::new();
    let mut intersection: Vec<SparseVec> = Vec::new();
    let mut feed = |mut vec: SparseVec, mut a_part: SparseVec| {
        loop {
            let Some(&lead) = vec.first() else {
                if !a_part.is_empty() {
                    intersection.push(a_part);
                }
                return;
            };
            match pivots.get(&lead) {
                Some(&ix) => {
                    vec = xor(&vec, &stored[ix].0);
                    a_part = xor(&a_part, &stored[ix].1);
                }
                None => {
                    pivots.insert(lead, stored.len());
                    stored.push((vec, a_part));
                    return;
                }
            }
        }
    };
    for g in a.generators() {
        for e in &scalars {
            let col = column(g, e);
            feed(col.clone(), col);
        }
    }
    for g in b.generators() {
        for e in &scalars {
            feed(column(g, e), Vec::new());
        }
    }

    // echelonize the intersection elements and count the distinct
    // exponent-parity classes of their leading monomials
    let mut echelon: HashMap<u32, SparseVec> = HashMap::new();
    for mut v in intersection {
        while let Some(&lead) = v.first() {
            match echelon.get(&lead) {
                Some(w) => v = xor(&v, w),
                None => {
                    echelon.insert(lead, v);
                    break;
                }
            }
        }
    }
    let parities: HashSet<Vec<u8>> = echelon
        .keys()
        .map(|&lead| {
            all_monos[lead as usize]
                .iter()
                .map(|e| (e.rem_euclid(2)) as u8)
                .collect()
        })
        .collect();
    parities.len()
}
