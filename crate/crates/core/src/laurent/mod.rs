//! The computable fragment of the iterated Laurent series field
//! `F = k((a1))...((an))`: finite k-linear combinations of monomials
//! `a1^{e1} ... an^{en}` with integer exponents, together with the
//! right-to-left lexicographic valuation `v: F^x -> Z^n`, residues at the
//! outermost variable, and windowed inversion.
//!
//! Only inversion is approximate (units of F are genuinely infinite
//! series); everything else is exact. See [`value`] for the ordering
//! convention on exponent tuples.

pub mod value;

pub use value::{Monomial, ValueVec};

use crate::basefield::{BaseFieldDesc, BaseFieldElement, FieldError};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("the zero element has no valuation")]
    ZeroElement,
    #[error("variable names must be distinct and nonempty")]
    BadNames,
    #[error("a term has a negative exponent of the outermost variable")]
    NegativeOuterExponent,
    #[error("the tower has no Laurent variables")]
    NoVariables,
    #[error("precision window does not contain the zero exponent")]
    WindowTooSmall,
    #[error("window bounds must satisfy lo <= hi componentwise")]
    BadWindow,
    #[error("square decomposition needs characteristic 2 over a finite base field")]
    SquareDecomposeUnsupported,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct TowerInner {
    base: BaseFieldDesc,
    names: Vec<String>,
}

/// The field tower `base((names[0]))...((names[n-1]))`; cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldTower(Arc<TowerInner>);

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower({self})")
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.base)?;
        for name in &self.0.names {
            write!(f, "(({name}))")?;
        }
        Ok(())
    }
}

impl FieldTower {
    /// Tower with default variable names a1..an.
    pub fn new(base: BaseFieldDesc, n: usize) -> Self {
        let names = (1..=n).map(|i| format!("a{i}")).collect();
        FieldTower(Arc::new(TowerInner { base, names }))
    }

    pub fn with_names(base: BaseFieldDesc, names: Vec<String>) -> Result<Self, LaurentError> {
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || names[..i].contains(name) {
                return Err(LaurentError::BadNames);
            }
        }
        Ok(FieldTower(Arc::new(TowerInner { base, names })))
    }

    pub fn base(&self) -> &BaseFieldDesc {
        &self.0.base
    }

    pub fn n(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn p(&self) -> u64 {
        self.0.base.p()
    }

    /// The residue tower of the outermost variable: drop the last one.
    pub fn residue(&self) -> Result<FieldTower, LaurentError> {
        if self.n() == 0 {
            return Err(LaurentError::NoVariables);
        }
        let names = self.0.names[..self.n() - 1].to_vec();
        Ok(FieldTower(Arc::new(TowerInner {
            base: self.0.base.clone(),
            names,
        })))
    }

    /// Same base, variable j renamed (used when a root replaces a variable).
    pub fn rename_var(&self, j: usize, name: &str) -> Result<FieldTower, LaurentError> {
        let mut names = self.0.names.clone();
        names[j] = name.to_string();
        FieldTower::with_names(self.0.base.clone(), names)
    }

    pub fn zero(&self) -> LaurentPoly {
        LaurentPoly {
            tower: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> LaurentPoly {
        self.constant(self.base().one())
    }

    pub fn constant(&self, c: BaseFieldElement) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(self.n()), c);
        }
        LaurentPoly {
            tower: self.clone(),
            terms,
        }
    }

    /// The i-th Laurent variable (0-based).
    pub fn var(&self, i: usize) -> LaurentPoly {
        self.monomial(Monomial::var(self.n(), i), self.base().one())
    }

    /// `var(i)^e`.
    pub fn var_pow(&self, i: usize, e: i64) -> LaurentPoly {
        self.monomial(Monomial::var(self.n(), i).pow(e), self.base().one())
    }

    pub fn monomial(&self, m: Monomial, c: BaseFieldElement) -> LaurentPoly {
        assert_eq!(m.len(), self.n(), "monomial arity mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly {
            tower: self.clone(),
            terms,
        }
    }

    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (Monomial, BaseFieldElement)>,
    ) -> LaurentPoly {
        let mut acc = self.zero();
        for (m, c) in terms {
            acc.add_term(m, c);
        }
        acc
    }
}

/// Per-variable exponent bounds used by windowed operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionWindow {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl PrecisionWindow {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self, LaurentError> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(LaurentError::BadWindow);
        }
        Ok(PrecisionWindow { lo, hi })
    }

    /// The symmetric window [-b, b]^n.
    pub fn symmetric(n: usize, b: i64) -> Self {
        PrecisionWindow {
            lo: vec![-b.abs(); n],
            hi: vec![b.abs(); n],
        }
    }

    /// The window [lo, hi]^n.
    pub fn uniform(n: usize, lo: i64, hi: i64) -> Result<Self, LaurentError> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    pub fn contains(&self, exps: &[i64]) -> bool {
        exps.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(e, (l, h))| l <= e && e <= h)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.iter().all(|&l| l <= 0) && self.hi.iter().all(|&h| h >= 0)
    }

    /// Window grown by one in every coordinate, both directions.
    pub fn grown(&self) -> PrecisionWindow {
        PrecisionWindow {
            lo: self.lo.iter().map(|l| l - 1).collect(),
            hi: self.hi.iter().map(|h| h + 1).collect(),
        }
    }

    /// All exponent vectors in the box, odometer order.
    pub fn monomials(&self) -> Vec<Vec<i64>> {
        let n = self.lo.len();
        let mut out = Vec::new();
        let mut cur = self.lo.clone();
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                cur[i] += 1;
                if cur[i] <= self.hi[i] {
                    break;
                }
                cur[i] = self.lo[i];
                i += 1;
            }
        }
    }
}

/// Sparse Laurent polynomial over the tower's base field. Terms are kept in
/// a map ordered by the right-to-left lexicographic order, so iteration is
/// in increasing valuation and the first term is the valuation-minimal one.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    tower: FieldTower,
    terms: BTreeMap<Monomial, BaseFieldElement>,
}

impl LaurentPoly {
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BaseFieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&BaseFieldElement> {
        self.terms.get(m)
    }

    /// The single (monomial, coefficient) pair when there is exactly one.
    pub fn as_single_term(&self) -> Option<(&Monomial, &BaseFieldElement)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn check_same_tower(&self, other: &Self) {
        assert!(
            self.tower == other.tower,
            "mixed towers: {} vs {}",
            self.tower,
            other.tower
        );
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BaseFieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_tower(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            tower: self.tower.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_tower(other);
        let mut out = self.tower.zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BaseFieldElement) -> Self {
        let mut out = self.tower.zero();
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), c1.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.tower.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Termwise p-th power, which is the p-th power in characteristic p.
    pub fn pth_power(&self) -> Self {
        let p = self.tower.p() as i64;
        LaurentPoly {
            tower: self.tower.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.pow(p), c.pth_power()))
                .collect(),
        }
    }

    /// Exact p-th root when every exponent is divisible by p and every
    /// coefficient has one.
    pub fn pth_root(&self) -> Result<Self, FieldError> {
        let p = self.tower.p() as i64;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.exps().iter().any(|e| e % p != 0) {
                return Err(FieldError::NoPthRoot(self.to_string()));
            }
            let root_m = Monomial::new(m.exps().iter().map(|e| e / p).collect());
            terms.insert(root_m, c.pth_root()?);
        }
        Ok(LaurentPoly {
            tower: self.tower.clone(),
            terms,
        })
    }

    pub fn is_pth_power(&self) -> bool {
        self.pth_root().is_ok()
    }

    /// Minimum exponent tuple in right-to-left lexicographic order; the
    /// valuation of the element. Errors on zero.
    pub fn valuation(&self) -> Result<ValueVec, LaurentError> {
        self.terms
            .keys()
            .next()
            .map(Monomial::value)
            .ok_or(LaurentError::ZeroElement)
    }

    /// Coefficient of the valuation-minimal monomial.
    pub fn leading_coeff(&self) -> Result<BaseFieldElement, LaurentError> {
        self.terms
            .values()
            .next()
            .cloned()
            .ok_or(LaurentError::ZeroElement)
    }

    pub fn leading_term(&self) -> Result<(Monomial, BaseFieldElement), LaurentError> {
        self.terms
            .iter()
            .next()
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(LaurentError::ZeroElement)
    }

    /// Substitute the outermost variable by 0. Defined only when no term
    /// carries a negative exponent of it; a ring homomorphism there.
    pub fn residue_outer(&self) -> Result<LaurentPoly, LaurentError> {
        let n = self.tower.n();
        if n == 0 {
            return Err(LaurentError::NoVariables);
        }
        if self.terms.keys().any(|m| m.exps()[n - 1] < 0) {
            return Err(LaurentError::NegativeOuterExponent);
        }
        let residue_tower = self.tower.residue()?;
        let mut out = residue_tower.zero();
        for (m, c) in &self.terms {
            if m.exps()[n - 1] == 0 {
                out.add_term(Monomial::new(m.exps()[..n - 1].to_vec()), c.clone());
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse up to the window: returns y with every term
    /// of x*y - 1 outside `w`. Exact (window ignored) when x is a single
    /// term; otherwise a truncated geometric expansion of the unit part.
    pub fn invert(&self, w: &PrecisionWindow) -> Result<LaurentPoly, LaurentError> {
        let (lead_m, lead_c) = self.leading_term()?;
        let lead_inv_c = lead_c.inv()?;
        let lead_inv_m = lead_m.inv();
        if self.terms.len() == 1 {
            return Ok(self.tower.monomial(lead_inv_m, lead_inv_c));
        }
        if w.len() != self.tower.n() || !w.contains_zero() {
            // the constant term of x*y lands at exponent 0
            return Err(LaurentError::WindowTooSmall);
        }
        // x = lead * (1 - g) with v(g) > 0; sum the geometric series with
        // partial products truncated to a region that no dropped term can
        // re-enter, so the dropped terms are exactly the defect of x*y - 1
        // and all lie outside the window
        let unit_part = self.mul_monomial(&lead_inv_m, &lead_inv_c);
        let g = self.tower.one().sub(&unit_part);
        let nonneg = g
            .terms
            .keys()
            .all(|m| m.exps().iter().all(|&e| e >= 0));
        let max_coord = g
            .terms
            .keys()
            .flat_map(|m| m.exps().iter().map(|e| e.abs()))
            .max()
            .unwrap_or(0);
        let base = (max_coord + 2) as i128;
        let weights: Vec<i128> = (0..self.tower.n())
            .scan(1i128, |acc, _| {
                let v = *acc;
                *acc *= base;
                Some(v)
            })
            .collect();
        let phi_max: i128 = w.hi().iter().zip(&weights).map(|(&h, &wt)| h as i128 * wt).sum();
        // componentwise hi-bound when no exponent can shrink again; the
        // weight bound handles exponent vectors with mixed signs
        let keep = |exps: &[i64]| -> bool {
            if nonneg {
                exps.iter().zip(w.hi()).all(|(e, h)| e <= h)
            } else {
                exps.iter().zip(&weights).map(|(&e, &wt)| e as i128 * wt).sum::<i128>() <= phi_max
            }
        };
        let truncate = |x: &LaurentPoly| -> LaurentPoly {
            LaurentPoly {
                tower: x.tower.clone(),
                terms: x
                    .terms
                    .iter()
                    .filter(|(m, _)| keep(m.exps()))
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect(),
            }
        };
        let mut acc = self.tower.one();
        let mut series = self.tower.one();
        loop {
            acc = truncate(&acc.mul(&g));
            if acc.is_zero() {
                break;
            }
            series = series.add(&acc);
        }
        Ok(series.mul_monomial(&lead_inv_m, &lead_inv_c))
    }

    /// Write x as a sum over parity classes e in {0,1}^n of
    /// `s_e^2 * a1^{e1}...an^{en}`. Characteristic 2 with a finite
    /// (perfect) base field only. Keys are square-free monomials.
    pub fn square_decompose(&self) -> Result<BTreeMap<Monomial, LaurentPoly>, LaurentError> {
        if self.tower.p() != 2 || !self.tower.base().is_perfect() {
            return Err(LaurentError::SquareDecomposeUnsupported);
        }
        let mut classes: BTreeMap<Monomial, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let parity: Vec<i64> = m.exps().iter().map(|e| e.rem_euclid(2)).collect();
            let half = Monomial::new(
                m.exps()
                    .iter()
                    .zip(&parity)
                    .map(|(e, p)| (e - p) / 2)
                    .collect(),
            );
            let sqrt_c = c.pth_root().expect("finite fields are perfect");
            classes
                .entry(Monomial::new(parity))
                .or_insert_with(|| self.tower.zero())
                .add_term(half, sqrt_c);
        }
        Ok(classes)
    }

    /// Inverse of `square_decompose`: sum of s_e^2 * m_e.
    pub fn assemble_squares(
        tower: &FieldTower,
        classes: &BTreeMap<Monomial, LaurentPoly>,
    ) -> LaurentPoly {
        let mut acc = tower.zero();
        for (parity, s) in classes {
            acc = acc.add(&s.pth_power().mul_monomial(parity, &tower.base().one()));
        }
        acc
    }
}

/// p-rank of the tower: each Laurent variable contributes 1, a rational
/// function base contributes 1 more, finite bases are perfect.
pub fn p_rank(tower: &FieldTower) -> usize {
    let base_rank = if tower.base().is_rat_func() { 1 } else { 0 };
    base_rank + tower.n()
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.tower.names();
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            let cs = c.to_string();
            let coeff_is_one = cs == "1";
            if !coeff_is_one || m.is_unit() {
                if cs.contains('+') && !m.is_unit() {
                    factors.push(format!("({cs})"));
                } else {
                    factors.push(cs);
                }
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e == 1 {
                    factors.push(names[i].clone());
                } else {
                    factors.push(format!("{}^{}", names[i], e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
