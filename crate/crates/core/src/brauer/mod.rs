//! Formal p-torsion Brauer classes over a Laurent tower, presented as
//! lists of degree-p symbols `[a, b)` with `x^p - x = a`, `y^p = b`,
//! `y x y^{-1} = x + 1`.
//!
//! * [`simplify`] applies the standard symbol identities to a fixpoint.
//! * [`decide_division`] runs a recursive sufficient criterion for the
//!   tensor product of the listed symbols to be a division algebra,
//!   splitting off the part ramified at the outermost variable and
//!   descending to residue towers.
//! * [`symlen`] holds the symbol-length bounds and reports with verified
//!   witness classes.

mod divide;
mod simplify;
pub mod symlen;

pub use divide::{decide_division, residue_of_symbol, SymbolResidue};
pub use simplify::simplify;
pub use symlen::{
    arav_bound, known_symlen_char_ne_p, lemma_div_witness, symlen_report, twisted_laurent_division_check,
    SymlenBase, SymlenReport, WitnessReport,
};

use crate::basefield::{BaseFieldDesc, BaseFieldElement, PrimeChar};
use crate::laurent::{FieldTower, LaurentPoly};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrauerError {
    #[error("the second slot of a symbol must be nonzero")]
    ZeroKummerSlot,
    #[error("symbol slots live over different towers")]
    MixedTowers,
    #[error("the chain witness needs at least 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("a twisted presentation needs at least one defining element")]
    EmptyPresentation,
    #[error("symbol length is defined for n >= 1")]
    ZeroVariables,
    #[error("base field characteristic {0} does not match p = {1}")]
    CharMismatch(u64, u64),
}

/// One symbol `[a, b)`: `a` is the additive (Artin-Schreier) slot, `b` the
/// multiplicative (Kummer) slot, which must be nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolAS {
    a: LaurentPoly,
    b: LaurentPoly,
}

impl SymbolAS {
    pub fn new(a: LaurentPoly, b: LaurentPoly) -> Result<Self, BrauerError> {
        if b.is_zero() {
            return Err(BrauerError::ZeroKummerSlot);
        }
        if a.tower() != b.tower() {
            return Err(BrauerError::MixedTowers);
        }
        Ok(SymbolAS { a, b })
    }

    pub fn a(&self) -> &LaurentPoly {
        &self.a
    }

    pub fn b(&self) -> &LaurentPoly {
        &self.b
    }

    pub fn tower(&self) -> &FieldTower {
        self.b.tower()
    }
}

impl fmt::Display for SymbolAS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.a, self.b)
    }
}

/// A formal product of symbols over one tower; the empty list is the
/// trivial class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrauerClass {
    tower: FieldTower,
    p: PrimeChar,
    symbols: Vec<SymbolAS>,
}

impl BrauerClass {
    pub fn new(tower: FieldTower, symbols: Vec<SymbolAS>) -> Result<Self, BrauerError> {
        for s in &symbols {
            if s.tower() != &tower {
                return Err(BrauerError::MixedTowers);
            }
        }
        let p = tower.base().char_prime();
        Ok(BrauerClass { tower, p, symbols })
    }

    pub fn trivial(tower: FieldTower) -> Self {
        let p = tower.base().char_prime();
        BrauerClass {
            tower,
            p,
            symbols: Vec::new(),
        }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn p(&self) -> PrimeChar {
        self.p
    }

    pub fn symbols(&self) -> &[SymbolAS] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Outcome of the division check. `Division` and `NotDivision` are emitted
/// only when one of the implemented proof paths applies; everything else is
/// `Unknown` with a reason.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisionStatus {
    Division,
    NotDivision,
    Unknown,
}

impl fmt::Display for DivisionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisionStatus::Division => write!(f, "Division"),
            DivisionStatus::NotDivision => write!(f, "NotDivision"),
            DivisionStatus::Unknown => write!(f, "Unknown"),
        }
    }
}

/// Verdict with the recursion log; `reason` explains Unknown outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionVerdict {
    pub status: DivisionStatus,
    pub trace: Vec<String>,
    pub reason: Option<String>,
}

impl DivisionVerdict {
    pub fn division(trace: Vec<String>) -> Self {
        DivisionVerdict {
            status: DivisionStatus::Division,
            trace,
            reason: None,
        }
    }

    pub fn not_division(trace: Vec<String>) -> Self {
        DivisionVerdict {
            status: DivisionStatus::NotDivision,
            trace,
            reason: None,
        }
    }

    pub fn unknown(trace: Vec<String>, reason: impl Into<String>) -> Self {
        DivisionVerdict {
            status: DivisionStatus::Unknown,
            trace,
            reason: Some(reason.into()),
        }
    }

    pub fn trace_text(&self) -> String {
        self.trace.join("\n")
    }
}

/// Defining data of the twisted iterated Laurent construction: base field
/// elements b_1..b_n attached to the relations x_i^p - x_i = b_i, with the
/// i-th twist shifting x_i by 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedPresentation {
    base: BaseFieldDesc,
    betas: Vec<BaseFieldElement>,
}

impl TwistedPresentation {
    pub fn new(base: BaseFieldDesc, betas: Vec<BaseFieldElement>) -> Result<Self, BrauerError> {
        if betas.is_empty() {
            return Err(BrauerError::EmptyPresentation);
        }
        assert!(betas.iter().all(|b| b.desc() == &base), "mixed base fields");
        Ok(TwistedPresentation { base, betas })
    }

    pub fn base(&self) -> &BaseFieldDesc {
        &self.base
    }

    pub fn betas(&self) -> &[BaseFieldElement] {
        &self.betas
    }

    pub fn n(&self) -> usize {
        self.betas.len()
    }

    /// The same data displayed as a symbol class [b_1, a1) * ... * [b_n, an).
    pub fn as_class(&self) -> BrauerClass {
        let tower = FieldTower::new(self.base.clone(), self.n());
        let symbols = self
            .betas
            .iter()
            .enumerate()
            .map(|(i, beta)| {
                SymbolAS::new(tower.constant(beta.clone()), tower.var(i))
                    .expect("variables are nonzero")
            })
            .collect();
        BrauerClass::new(tower, symbols).expect("consistent tower")
    }
}
