//! Exact computational algebra over iterated Laurent series fields of
//! characteristic p.
//!
//! The library works with the computable fragment of `F = k((a1))...((an))`
//! where `k` is a finite field or a rational function field over one:
//!
//! * [`basefield`] — exact arithmetic in `k` and the additive map
//!   `x -> x^p - x`, with canonical reduction modulo its image.
//! * [`laurent`] — sparse Laurent polynomials over `k`, the right-to-left
//!   lexicographic valuation on the tower, residues and windowed inversion.
//! * [`brauer`] — formal p-torsion Brauer classes as lists of symbols
//!   `[a, b)`, symbol simplification, a recursive division-algebra check,
//!   and symbol-length reports with verified witnesses.
//! * [`quadforms`] — quadratic and bilinear Pfister forms in characteristic
//!   two: anisotropy criteria, square-span intersections and linkage
//!   counterexamples.
//!
//! All values are immutable and all operations are pure; everything is exact
//! (no floating point anywhere).

pub mod basefield;
pub mod brauer;
pub mod laurent;
pub mod quadforms;
