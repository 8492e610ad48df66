//! Exact arithmetic in the supported coefficient fields `k` and the
//! additive map `x -> x^p - x` with canonical reduction modulo its image.
//!
//! Supported fields: prime fields F_p, finite extensions F_{p^d} presented
//! by an irreducible modulus, and rational function fields F_{p^d}(t).
//! Descriptors serialize as `F2`, `F4:w^2+w+1`, `F2(t)`.

pub mod artin;
pub mod finite;
pub mod fp;
pub mod poly;
pub mod ratfunc;

use finite::FqCtx;
use poly::FqPoly;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a p-th power in this field")]
    NoPthRoot(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not irreducible over F_{1}")]
    ReducibleModulus(String, u64),
    #[error("independence test needs {needed} reductions, budget is {budget}")]
    IndependenceBudget { needed: u128, budget: u128 },
    #[error("invalid base field descriptor `{0}`")]
    BadDescriptor(String),
}

/// A prime integer, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeChar(u64);

impl PrimeChar {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if fp::is_prime(p) {
            Ok(PrimeChar(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for PrimeChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which field a descriptor denotes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseFieldKind {
    /// F_p
    PrimeField { p: u64 },
    /// `F_{p^d} = F_p[w]/(modulus)`, modulus monic irreducible of degree d
    FiniteField { p: u64, d: usize, modulus: Vec<u64> },
    /// F_{p^d}(t)
    RatFunc { p: u64, d: usize, modulus: Vec<u64> },
}

/// Shared, immutable description of a base field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BaseFieldDesc(Arc<BaseFieldKind>);

impl fmt::Debug for BaseFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaseFieldDesc({self})")
    }
}

impl BaseFieldDesc {
    pub fn prime_field(p: u64) -> Result<Self, FieldError> {
        PrimeChar::new(p)?;
        Ok(BaseFieldDesc(Arc::new(BaseFieldKind::PrimeField { p })))
    }

    /// F_{p^d} with the default (lexicographically least) modulus.
    pub fn finite_field(p: u64, d: usize) -> Result<Self, FieldError> {
        PrimeChar::new(p)?;
        if d == 1 {
            return Self::prime_field(p);
        }
        let modulus = fp::find_irreducible(p, d);
        Ok(BaseFieldDesc(Arc::new(BaseFieldKind::FiniteField { p, d, modulus })))
    }

    /// F_{p^d} with an explicit monic modulus (ascending coefficients).
    pub fn finite_field_with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        PrimeChar::new(p)?;
        let d = modulus.len() - 1;
        if d < 1 || modulus[d] != 1 || !fp::is_irreducible_monic(&modulus, p) {
            return Err(FieldError::ReducibleModulus(format!("{modulus:?}"), p));
        }
        if d == 1 {
            return Self::prime_field(p);
        }
        Ok(BaseFieldDesc(Arc::new(BaseFieldKind::FiniteField { p, d, modulus })))
    }

    /// F_{p^d}(t) with the default modulus for the constant field.
    pub fn rat_func(p: u64, d: usize) -> Result<Self, FieldError> {
        PrimeChar::new(p)?;
        let modulus = if d == 1 {
            vec![0, 1]
        } else {
            fp::find_irreducible(p, d)
        };
        Ok(BaseFieldDesc(Arc::new(BaseFieldKind::RatFunc { p, d, modulus })))
    }

    pub fn kind(&self) -> &BaseFieldKind {
        &self.0
    }

    pub fn p(&self) -> u64 {
        match &*self.0 {
            BaseFieldKind::PrimeField { p }
            | BaseFieldKind::FiniteField { p, .. }
            | BaseFieldKind::RatFunc { p, .. } => *p,
        }
    }

    pub fn char_prime(&self) -> PrimeChar {
        PrimeChar(self.p())
    }

    /// Extension degree of the constant field over F_p.
    pub fn ext_degree(&self) -> usize {
        match &*self.0 {
            BaseFieldKind::PrimeField { .. } => 1,
            BaseFieldKind::FiniteField { d, .. } | BaseFieldKind::RatFunc { d, .. } => *d,
        }
    }

    pub fn is_rat_func(&self) -> bool {
        matches!(&*self.0, BaseFieldKind::RatFunc { .. })
    }

    /// Finite fields are perfect; F_q(t) is not.
    pub fn is_perfect(&self) -> bool {
        !self.is_rat_func()
    }

    /// Order of the field when finite.
    pub fn order(&self) -> Option<u64> {
        if self.is_rat_func() {
            None
        } else {
            Some(self.p().pow(self.ext_degree() as u32))
        }
    }

    pub(crate) fn fq(&self) -> FqCtx<'_> {
        FqCtx {
            p: self.p(),
            modulus: self.constant_modulus(),
        }
    }

    fn constant_modulus(&self) -> &[u64] {
        match &*self.0 {
            BaseFieldKind::PrimeField { .. } => &[0, 1],
            BaseFieldKind::FiniteField { modulus, .. } | BaseFieldKind::RatFunc { modulus, .. } => {
                modulus
            }
        }
    }

    pub fn zero(&self) -> BaseFieldElement {
        self.elem_int(0)
    }

    pub fn one(&self) -> BaseFieldElement {
        self.elem_int(1)
    }

    pub fn elem_int(&self, n: i64) -> BaseFieldElement {
        let p = self.p() as i64;
        let c = n.rem_euclid(p) as u64;
        let k = self.fq();
        let scalar = k.from_scalar(c);
        self.constant_elem(scalar)
    }

    pub(crate) fn constant_elem(&self, c: Vec<u64>) -> BaseFieldElement {
        let repr = if self.is_rat_func() {
            let k = self.fq();
            Repr::Ratio {
                num: poly::constant(&k, c),
                den: poly::one(&k),
            }
        } else {
            Repr::Finite(c)
        };
        BaseFieldElement {
            desc: self.clone(),
            repr,
        }
    }

    /// The power-basis generator `w` of the constant field (1 for d = 1).
    pub fn gen_w(&self) -> BaseFieldElement {
        let k = self.fq();
        self.constant_elem(k.gen())
    }

    /// `t^e` in a rational function field; panics on non-RatFunc descriptors.
    pub fn t_pow(&self, e: i64) -> BaseFieldElement {
        assert!(self.is_rat_func(), "t lives in rational function fields");
        let k = self.fq();
        let (num, den) = if e >= 0 {
            (poly::monomial(&k, k.one(), e as usize), poly::one(&k))
        } else {
            (poly::one(&k), poly::monomial(&k, k.one(), (-e) as usize))
        };
        BaseFieldElement {
            desc: self.clone(),
            repr: Repr::Ratio { num, den },
        }
    }

    /// All elements of a finite field; None for F_q(t).
    pub fn all_elements(&self) -> Option<Vec<BaseFieldElement>> {
        if self.is_rat_func() {
            return None;
        }
        let k = self.fq();
        Some(k.all_elements().into_iter().map(|v| self.constant_elem(v)).collect())
    }

    /// Parse a descriptor string: `F2`, `F9`, `F4:w^2+w+1`, `F2(t)`.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let s = s.trim();
        let bad = || FieldError::BadDescriptor(s.to_string());
        let (core, rat) = match s.strip_suffix("(t)") {
            Some(rest) => (rest, true),
            None => (s, false),
        };
        let core = core.strip_prefix('F').ok_or_else(bad)?;
        let (qstr, modstr) = match core.split_once(':') {
            Some((q, m)) => (q, Some(m)),
            None => (core, None),
        };
        let q: u64 = qstr.parse().map_err(|_| bad())?;
        // factor q = p^d
        let (p, d) = factor_prime_power(q).ok_or_else(bad)?;
        let modulus = match modstr {
            None => {
                if d == 1 {
                    vec![0, 1]
                } else {
                    fp::find_irreducible(p, d)
                }
            }
            Some(m) => parse_modulus(m, p, d).ok_or_else(bad)?,
        };
        if rat {
            if d == 1 {
                Self::rat_func(p, 1)
            } else {
                PrimeChar::new(p)?;
                Ok(BaseFieldDesc(Arc::new(BaseFieldKind::RatFunc { p, d, modulus })))
            }
        } else if d == 1 {
            Self::prime_field(p)
        } else {
            Self::finite_field_with_modulus(p, modulus)
        }
    }
}

fn factor_prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut d = 0;
            let mut m = q;
            while m.is_multiple_of(p) {
                m /= p;
                d += 1;
            }
            return if m == 1 { Some((p, d)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Parse `w^2+w+1` into ascending coefficients of degree exactly `d`.
fn parse_modulus(s: &str, p: u64, d: usize) -> Option<Vec<u64>> {
    let mut coeffs = vec![0u64; d + 1];
    for part in s.split('+') {
        let part = part.trim();
        let (c, e) = if let Some(rest) = part.strip_prefix("w^") {
            (1u64, rest.parse::<usize>().ok()?)
        } else if part == "w" {
            (1, 1)
        } else {
            (part.parse::<u64>().ok()?, 0)
        };
        if e > d {
            return None;
        }
        coeffs[e] = (coeffs[e] + c) % p;
    }
    if coeffs[d] != 1 || !fp::is_irreducible_monic(&coeffs, p) {
        return None;
    }
    Some(coeffs)
}

impl fmt::Display for BaseFieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            BaseFieldKind::PrimeField { p } => write!(f, "F{p}"),
            BaseFieldKind::FiniteField { p, d, modulus } => {
                write!(f, "F{}:{}", p.pow(*d as u32), modulus_string(modulus))
            }
            BaseFieldKind::RatFunc { p, d, modulus } => {
                if *d == 1 {
                    write!(f, "F{p}(t)")
                } else {
                    write!(f, "F{}:{}(t)", p.pow(*d as u32), modulus_string(modulus))
                }
            }
        }
    }
}

fn modulus_string(m: &[u64]) -> String {
    let mut parts = Vec::new();
    for (e, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match e {
            0 => {
                parts.push(format!("{c}"));
                continue;
            }
            1 => "w".to_string(),
            _ => format!("w^{e}"),
        };
        if c == 1 {
            parts.push(var);
        } else {
            parts.push(format!("{c}*{var}"));
        }
    }
    parts.join("+")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// coefficient vector over F_p in the power basis, length d
    Finite(Vec<u64>),
    /// reduced fraction num/den of polynomials over F_{p^d}; den monic
    Ratio { num: FqPoly, den: FqPoly },
}

/// An element of a supported base field. Immutable; arithmetic builds new
/// values and keeps representations canonical (fractions reduced, monic
/// denominators).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseFieldElement {
    desc: BaseFieldDesc,
    repr: Repr,
}

impl BaseFieldElement {
    pub fn desc(&self) -> &BaseFieldDesc {
        &self.desc
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Finite(v) => v.iter().all(|&c| c == 0),
            Repr::Ratio { num, .. } => num.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        self == &self.desc.one()
    }

    pub(crate) fn finite_coeffs(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Finite(v) => Some(v),
            Repr::Ratio { .. } => None,
        }
    }

    pub(crate) fn ratio_parts(&self) -> Option<(&FqPoly, &FqPoly)> {
        match &self.repr {
            Repr::Finite(_) => None,
            Repr::Ratio { num, den } => Some((num, den)),
        }
    }

    pub(crate) fn from_ratio(desc: &BaseFieldDesc, num: FqPoly, den: FqPoly) -> Self {
        let k = desc.fq();
        let (num, den) = ratfunc::reduce(&k, num, den);
        BaseFieldElement {
            desc: desc.clone(),
            repr: Repr::Ratio { num, den },
        }
    }

    fn check_same_desc(&self, other: &Self) {
        assert!(
            self.desc == other.desc,
            "mixed base fields: {} vs {}",
            self.desc,
            other.desc
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_desc(other);
        let k = self.desc.fq();
        match (&self.repr, &other.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => BaseFieldElement {
                desc: self.desc.clone(),
                repr: Repr::Finite(k.add(a, b)),
            },
            (Repr::Ratio { num: n1, den: d1 }, Repr::Ratio { num: n2, den: d2 }) => {
                let num = poly::add(&k, &poly::mul(&k, n1, d2), &poly::mul(&k, n2, d1));
                let den = poly::mul(&k, d1, d2);
                Self::from_ratio(&self.desc, num, den)
            }
            _ => unreachable!("same descriptor implies same representation"),
        }
    }

    pub fn neg(&self) -> Self {
        let k = self.desc.fq();
        match &self.repr {
            Repr::Finite(a) => BaseFieldElement {
                desc: self.desc.clone(),
                repr: Repr::Finite(k.neg(a)),
            },
            Repr::Ratio { num, den } => BaseFieldElement {
                desc: self.desc.clone(),
                repr: Repr::Ratio {
                    num: poly::neg(&k, num),
                    den: den.clone(),
                },
            },
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_desc(other);
        let k = self.desc.fq();
        match (&self.repr, &other.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => BaseFieldElement {
                desc: self.desc.clone(),
                repr: Repr::Finite(k.mul(a, b)),
            },
            (Repr::Ratio { num: n1, den: d1 }, Repr::Ratio { num: n2, den: d2 }) => {
                let num = poly::mul(&k, n1, n2);
                let den = poly::mul(&k, d1, d2);
                Self::from_ratio(&self.desc, num, den)
            }
            _ => unreachable!("same descriptor implies same representation"),
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let k = self.desc.fq();
        Ok(match &self.repr {
            Repr::Finite(a) => BaseFieldElement {
                desc: self.desc.clone(),
                repr: Repr::Finite(k.inv(a)),
            },
            Repr::Ratio { num, den } => Self::from_ratio(&self.desc, den.clone(), num.clone()),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pth_power(&self) -> Self {
        let k = self.desc.fq();
        match &self.repr {
            Repr::Finite(a) => BaseFieldElement {
                desc: self.desc.clone(),
                repr: Repr::Finite(k.frobenius(a)),
            },
            Repr::Ratio { num, den } => {
                let p = k.p;
                Self::from_ratio(&self.desc, poly_pth_power(&k, num, p), poly_pth_power(&k, den, p))
            }
        }
    }

    /// Exact p-th root. Total on finite fields; over F_q(t) it exists only
    /// for p-th powers.
    pub fn pth_root(&self) -> Result<Self, FieldError> {
        let k = self.desc.fq();
        match &self.repr {
            Repr::Finite(a) => Ok(BaseFieldElement {
                desc: self.desc.clone(),
                repr: Repr::Finite(k.pth_root(a)),
            }),
            Repr::Ratio { num, den } => {
                let rn = poly::pth_root(&k, num);
                let rd = poly::pth_root(&k, den);
                match (rn, rd) {
                    (Some(n), Some(d)) => Ok(Self::from_ratio(&self.desc, n, d)),
                    _ => Err(FieldError::NoPthRoot(self.to_string())),
                }
            }
        }
    }

    /// x^p - x.
    pub fn wp(&self) -> Self {
        self.pth_power().sub(self)
    }
}

fn poly_pth_power(k: &FqCtx, f: &FqPoly, p: u64) -> FqPoly {
    if f.is_empty() {
        return Vec::new();
    }
    let p = p as usize;
    let mut out = vec![k.zero(); (f.len() - 1) * p + 1];
    for (i, c) in f.iter().enumerate() {
        out[i * p] = k.frobenius(c);
    }
    out
}

impl fmt::Display for BaseFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Finite(v) => write!(f, "{}", finite_string(v)),
            Repr::Ratio { num, den } => {
                if num.is_empty() {
                    return write!(f, "0");
                }
                if poly::degree(den) == Some(0) {
                    return write!(f, "{}", poly_string(num));
                }
                // monomial denominators render as negative powers of t
                if den.iter().take(den.len() - 1).all(|c| c.iter().all(|&x| x == 0)) {
                    let shift = den.len() as i64 - 1;
                    return write!(f, "{}", laurent_t_string(num, -shift));
                }
                let ns = poly_string(num);
                if num.len() > 1 {
                    write!(f, "({ns})/({})", poly_string(den))
                } else {
                    write!(f, "{ns}/({})", poly_string(den))
                }
            }
        }
    }
}

/// Terms of `num * t^shift` in ascending exponent order.
fn laurent_t_string(num: &FqPoly, shift: i64) -> String {
    let mut parts = Vec::new();
    for (e, c) in num.iter().enumerate() {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let cs = finite_string(c);
        let exp = e as i64 + shift;
        let mono = match exp {
            0 => {
                parts.push(cs);
                continue;
            }
            1 => "t".to_string(),
            _ => format!("t^{exp}"),
        };
        if cs == "1" {
            parts.push(mono);
        } else if cs.contains('+') {
            parts.push(format!("({cs})*{mono}"));
        } else {
            parts.push(format!("{cs}*{mono}"));
        }
    }
    parts.join(" + ")
}

fn finite_string(v: &[u64]) -> String {
    let mut parts = Vec::new();
    for (e, &c) in v.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        match e {
            0 => parts.push(format!("{c}")),
            1 => parts.push(if c == 1 { "w".into() } else { format!("{c}*w") }),
            _ => parts.push(if c == 1 {
                format!("w^{e}")
            } else {
                format!("{c}*w^{e}")
            }),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn poly_string(f: &FqPoly) -> String {
    let mut parts = Vec::new();
    for (e, c) in f.iter().enumerate().rev() {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let cs = finite_string(c);
        let mono = match e {
            0 => {
                parts.push(cs);
                continue;
            }
            1 => "t".into(),
            _ => format!("t^{e}"),
        };
        if cs == "1" {
            parts.push(mono);
        } else if cs.contains('+') {
            parts.push(format!("({cs})*{mono}"));
        } else {
            parts.push(format!("{cs}*{mono}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}
