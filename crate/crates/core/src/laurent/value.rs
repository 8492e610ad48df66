//! Exponent vectors and valuation values with the right-to-left
//! lexicographic order.
//!
//! Convention, fixed once here: a tuple is written left to right in
//! variable order `(e_1, ..., e_n)` and compared right to left, so the
//! last coordinate (the outermost Laurent variable) is the most
//! significant. Under this order `(0,-1) < (0,0) < (1,0) < (0,1)` and
//! `v(a1) = (1, 0, ..., 0)`.

use std::cmp::Ordering;
use std::fmt;

/// Single comparison function both `Monomial` and `ValueVec` delegate to.
pub fn cmp_right_to_left(a: &[i64], b: &[i64]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Exponent vector of one Laurent monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<i64>,
}

impl Monomial {
    pub fn new(exps: Vec<i64>) -> Self {
        Monomial { exps }
    }

    pub fn unit(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// Exponent vector of the i-th variable (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|e| -e).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|e| e * k).collect(),
        }
    }

    /// Componentwise parity, the square class of the monomial.
    pub fn parity(&self) -> Vec<u8> {
        self.exps.iter().map(|e| (e.rem_euclid(2)) as u8).collect()
    }

    pub fn value(&self) -> ValueVec {
        ValueVec::new(self.exps.clone())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_right_to_left(&self.exps, &other.exps)
    }
}

/// An element of the tower's value group Z^n, ordered right to left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueVec {
    coords: Vec<i64>,
}

impl ValueVec {
    pub fn new(coords: Vec<i64>) -> Self {
        ValueVec { coords }
    }

    pub fn zero(n: usize) -> Self {
        ValueVec { coords: vec![0; n] }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &ValueVec) -> ValueVec {
        ValueVec {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    /// Coordinates modulo p, for lattice arguments mod p*Z^n.
    pub fn mod_p(&self, p: u64) -> Vec<u64> {
        self.coords.iter().map(|c| c.rem_euclid(p as i64) as u64).collect()
    }
}

impl PartialOrd for ValueVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValueVec {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_right_to_left(&self.coords, &other.coords)
    }
}

impl fmt::Display for ValueVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
