//! Symbol-identity simplification: additivity in the first slot for a
//! shared second slot, multiplicativity in the second slot for a shared
//! first slot, `[x^p - x + a, b) = [a, b)`, and `[a, b^p) = 1`.
//!
//! First slots are kept canonical modulo visible images of `x^p - x`:
//! terms of positive valuation (which are images over the complete field),
//! and constant terms, reduced by the base-field rule.

use super::{BrauerClass, SymbolAS};
use crate::basefield::artin;
use crate::laurent::LaurentPoly;

/// Apply the identity rules to a fixpoint with a deterministic first-match
/// strategy. Never increases the symbol count; the result represents the
/// same class.
pub fn simplify(class: &BrauerClass) -> BrauerClass {
    let mut symbols: Vec<SymbolAS> = class
        .symbols()
        .iter()
        .filter_map(canonicalize_symbol)
        .collect();
    loop {
        if let Some((i, j)) = first_pair(&symbols, |x, y| x.b() == y.b()) {
            let merged_a = symbols[i].a().add(symbols[j].a());
            let b = symbols[i].b().clone();
            symbols.remove(j);
            symbols.remove(i);
            if let Some(s) = canonicalize_slots(merged_a, b) {
                symbols.insert(i, s);
            }
            continue;
        }
        if let Some((i, j)) = first_pair(&symbols, |x, y| x.a() == y.a()) {
            let a = symbols[i].a().clone();
            let merged_b = symbols[i].b().mul(symbols[j].b());
            symbols.remove(j);
            symbols.remove(i);
            if let Some(s) = canonicalize_slots(a, merged_b) {
                symbols.insert(i, s);
            }
            continue;
        }
        break;
    }
    BrauerClass::new(class.tower().clone(), symbols).expect("tower unchanged")
}

fn first_pair(symbols: &[SymbolAS], eq: impl Fn(&SymbolAS, &SymbolAS) -> bool) -> Option<(usize, usize)> {
    for i in 0..symbols.len() {
        for j in i + 1..symbols.len() {
            if eq(&symbols[i], &symbols[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

fn canonicalize_symbol(s: &SymbolAS) -> Option<SymbolAS> {
    canonicalize_slots(s.a().clone(), s.b().clone())
}

/// Reduce the first slot, drop the symbol if either slot degenerates.
fn canonicalize_slots(a: LaurentPoly, b: LaurentPoly) -> Option<SymbolAS> {
    let a = reduce_as_slot(&a);
    if a.is_zero() || b.is_pth_power() {
        return None;
    }
    Some(SymbolAS { a, b })
}

/// Canonical form of an additive slot modulo x^p - x: positive-valuation
/// terms are images over the complete field and vanish; the constant term
/// reduces by the base-field rule; negative terms stay.
pub(super) fn reduce_as_slot(a: &LaurentPoly) -> LaurentPoly {
    let tower = a.tower().clone();
    let mut out = tower.zero();
    for (m, c) in a.terms() {
        if m.value() > crate::laurent::ValueVec::zero(tower.n()) {
            continue;
        }
        if m.is_unit() {
            let reduced = artin::artin_schreier_reduce(c);
            out.add_term(m.clone(), reduced.canonical);
        } else {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}
