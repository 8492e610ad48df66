//! Symbol-length bounds and reports with verified witness classes.
//!
//! The upper bound over a maximally complete tower with residue cokernel
//! dimension m is n-1 when m < n and n when m >= n. Lower bounds come from
//! explicit division products: the chain class
//! `[a2^-1, a1) * [a3^-1, a2) * ... * [an^-1, a_{n-1})` with n-1 symbols,
//! and for m >= n the class `[b1, a1) * ... * [bn, an)` with b_i
//! independent modulo x^p - x, realized as twisted iterated Laurent series
//! over the field extension the b_i define.

use super::divide::decide_division;
use super::{BrauerClass, BrauerError, DivisionVerdict, SymbolAS, TwistedPresentation};
use crate::basefield::artin::{self, CokernelDim};
use crate::basefield::{BaseFieldDesc, PrimeChar};
use crate::laurent::FieldTower;
use std::fmt;

/// The chain witness class with n-1 symbols over an n-variable tower.
pub fn lemma_div_witness(tower: &FieldTower) -> Result<BrauerClass, BrauerError> {
    let n = tower.n();
    if n < 2 {
        return Err(BrauerError::TooFewVariables(n));
    }
    let symbols = (1..n)
        .map(|i| {
            SymbolAS::new(tower.var_pow(i, -1), tower.var(i - 1)).expect("slots nonzero")
        })
        .collect();
    BrauerClass::new(tower.clone(), symbols)
}

/// Upper bound for the symbol length over an n-variable tower whose base
/// has cokernel dimension `cokdim`: n-1 when cokdim < n, n otherwise.
pub fn arav_bound(cokdim: CokernelDim, n: u32) -> Result<u32, BrauerError> {
    if n == 0 {
        return Err(BrauerError::ZeroVariables);
    }
    Ok(if cokdim.less_than(n) { n - 1 } else { n })
}

/// The known value floor(n/2) for the characteristic-not-p situation over
/// an algebraically closed base; reported only, never computed here.
pub fn known_symlen_char_ne_p(n: u32) -> u32 {
    n / 2
}

/// Division check for the twisted iterated Laurent construction attached
/// to defining elements b_1..b_n: it is a division algebra of degree p^n
/// exactly when the b_i are independent modulo x^p - x.
pub fn twisted_laurent_division_check(tp: &TwistedPresentation) -> DivisionVerdict {
    let p = tp.base().p();
    let n = tp.n();
    let mut trace = vec![format!(
        "L = k[x1..x{n} : xi^{p} - xi = bi] over k = {}, with the i-th twist xi -> xi + 1",
        tp.base()
    )];
    match artin::dependent_combination(tp.betas(), artin::DEFAULT_INDEPENDENCE_LIMIT) {
        Err(e) => DivisionVerdict::unknown(trace, e.to_string()),
        Ok(None) => {
            trace.push(format!(
                "no nonzero F_{p}-combination of the defining elements is of the form \
                 x^{p} - x, so L is a field of degree {p}^{n} and each twist has exact \
                 order {p}; the iterated twisted Laurent construction is a division \
                 algebra of degree {p}^{n}"
            ));
            DivisionVerdict::division(trace)
        }
        Ok(Some((coeffs, witness))) => {
            let combo = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(i, c)| {
                    if *c == 1 {
                        format!("b{}", i + 1)
                    } else {
                        format!("{c}*b{}", i + 1)
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ");
            trace.push(format!(
                "dependent combination {combo} = w^{p} - w with w = {witness}; \
                 L is not a field and the construction is not division"
            ));
            DivisionVerdict::not_division(trace)
        }
    }
}

/// Base-field input for the report: either a concrete descriptor or the
/// symbolic algebraically-closed case, which only fixes cokernel dim 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymlenBase {
    AlgebraicallyClosed,
    Field(BaseFieldDesc),
}

impl fmt::Display for SymlenBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymlenBase::AlgebraicallyClosed => write!(f, "algebraically-closed"),
            SymlenBase::Field(desc) => write!(f, "{desc}"),
        }
    }
}

/// Lower-bound witness attached to a report.
#[derive(Debug, Clone)]
pub enum WitnessReport {
    /// Length-0 claims need no witness.
    Trivial { note: String },
    /// Chain class with n-1 symbols and its division verdict.
    Chain {
        class: BrauerClass,
        verdict: DivisionVerdict,
    },
    /// Twisted construction with n symbols and its division verdict.
    Twisted {
        presentation: TwistedPresentation,
        class: BrauerClass,
        verdict: DivisionVerdict,
    },
}

impl WitnessReport {
    pub fn verdict(&self) -> Option<&DivisionVerdict> {
        match self {
            WitnessReport::Trivial { .. } => None,
            WitnessReport::Chain { verdict, .. } | WitnessReport::Twisted { verdict, .. } => {
                Some(verdict)
            }
        }
    }

    pub fn symbol_count(&self) -> usize {
        match self {
            WitnessReport::Trivial { .. } => 0,
            WitnessReport::Chain { class, .. } | WitnessReport::Twisted { class, .. } => {
                class.len()
            }
        }
    }
}

/// The symbol length of the n-variable tower over the given base, with the
/// claimed value, the upper bound, and a verified lower-bound witness.
#[derive(Debug, Clone)]
pub struct SymlenReport {
    pub base: SymlenBase,
    pub p: PrimeChar,
    pub n: u32,
    pub cokernel: CokernelDim,
    pub claimed: u32,
    pub upper_bound: u32,
    pub witness: WitnessReport,
    pub notes: Vec<String>,
}

pub fn symlen_report(base: SymlenBase, p: PrimeChar, n: u32) -> Result<SymlenReport, BrauerError> {
    if n == 0 {
        return Err(BrauerError::ZeroVariables);
    }
    if let SymlenBase::Field(desc) = &base {
        if desc.p() != p.get() {
            return Err(BrauerError::CharMismatch(desc.p(), p.get()));
        }
    }
    let cokernel = match &base {
        SymlenBase::AlgebraicallyClosed => CokernelDim::Finite(0),
        SymlenBase::Field(desc) => artin::cokernel_dim(desc),
    };
    let upper_bound = arav_bound(cokernel, n)?;
    let claimed = upper_bound;
    let mut notes = Vec::new();
    let witness = if cokernel.less_than(n) {
        // claimed n-1: chain witness (trivial when n = 1)
        if n == 1 {
            WitnessReport::Trivial {
                note: "claimed length 0: every symbol splits".into(),
            }
        } else {
            let desc = match &base {
                SymlenBase::AlgebraicallyClosed => {
                    notes.push(
                        "chain witness verified over the prime field; the division argument \
                         only uses valuation data, so it applies over any base of the same \
                         characteristic"
                            .into(),
                    );
                    BaseFieldDesc::prime_field(p.get()).expect("p prime")
                }
                SymlenBase::Field(desc) => desc.clone(),
            };
            let tower = FieldTower::new(desc, n as usize);
            let class = lemma_div_witness(&tower)?;
            let verdict = decide_division(&class);
            WitnessReport::Chain { class, verdict }
        }
    } else {
        let SymlenBase::Field(desc) = &base else {
            unreachable!("cokernel 0 is always < n >= 1");
        };
        let betas = independent_defining_elements(desc, n as usize);
        if desc.is_rat_func() {
            notes.push(
                "the base field is imperfect; the witness is certified by independence of \
                 the defining elements alone"
                    .into(),
            );
        }
        let presentation = TwistedPresentation::new(desc.clone(), betas)?;
        let verdict = twisted_laurent_division_check(&presentation);
        let class = presentation.as_class();
        WitnessReport::Twisted {
            presentation,
            class,
            verdict,
        }
    };
    Ok(SymlenReport {
        base,
        p,
        n,
        cokernel,
        claimed,
        upper_bound,
        witness,
        notes,
    })
}

/// Default choice of defining elements independent modulo x^p - x: for
/// F_q(t) the poles t^-m with m prime to p; for a finite field the fixed
/// nonzero-trace element (only n = 1 is possible there).
pub fn independent_defining_elements(
    desc: &BaseFieldDesc,
    n: usize,
) -> Vec<crate::basefield::BaseFieldElement> {
    if desc.is_rat_func() {
        let p = desc.p();
        let mut out = Vec::with_capacity(n);
        let mut m = 1u64;
        while out.len() < n {
            if !m.is_multiple_of(p) {
                out.push(desc.t_pow(-(m as i64)));
            }
            m += 1;
        }
        out
    } else {
        let k = desc.fq();
        let tau = desc.constant_elem(k.nonzero_trace_elem());
        vec![tau; n]
    }
}
