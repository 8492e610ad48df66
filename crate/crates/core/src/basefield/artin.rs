//! Reduction modulo the image of x -> x^p - x, with explicit witnesses.
//!
//! Every element decomposes exactly as `canonical + (witness^p - witness)`.
//! Canonical forms: over F_{p^d} the multiples of a fixed nonzero-trace
//! element; over F_q(t) a fraction whose local expansions carry no
//! coefficient at a pole order divisible by p, whose polynomial part has
//! no positive exponent divisible by p, and whose constant term is
//! canonical in the finite-field sense. These sets meet the image only in
//! zero, so the zero canonical form characterizes the image and equal
//! cosets share one canonical form.

use super::finite::FqCtx;
use super::poly;
use super::ratfunc::{self, Frac};
use super::{BaseFieldDesc, BaseFieldElement, FieldError};
use std::fmt;

/// Default cap on the number of listed elements in independence tests,
/// i.e. at most p^6 - 1 reductions.
pub const DEFAULT_INDEPENDENCE_LIMIT: usize = 6;

/// Exact decomposition input = canonical + (witness^p - witness).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASReduction {
    pub input: BaseFieldElement,
    pub canonical: BaseFieldElement,
    pub witness: BaseFieldElement,
    pub in_image: bool,
}

impl ASReduction {
    /// Recompute the defining identity; used by tests and reports.
    pub fn holds_exactly(&self) -> bool {
        let recombined = self.canonical.add(&self.witness.wp());
        recombined == self.input && self.in_image == self.canonical.is_zero()
    }
}

/// Canonical representative of `beta` modulo x^p - x, with witness. Total
/// and idempotent: reducing a canonical form returns it with witness 0.
pub fn artin_schreier_reduce(beta: &BaseFieldElement) -> ASReduction {
    let desc = beta.desc().clone();
    if let Some(coeffs) = beta.finite_coeffs() {
        let k = desc.fq();
        let (canon, witness) = reduce_finite(&k, coeffs);
        let canonical = desc.constant_elem(canon);
        let witness = desc.constant_elem(witness);
        let in_image = canonical.is_zero();
        return ASReduction {
            input: beta.clone(),
            canonical,
            witness,
            in_image,
        };
    }
    let (num, den) = beta.ratio_parts().expect("ratfunc representation");
    let k = desc.fq();
    let (cleared, mut witness): (Frac, Frac) =
        ratfunc::clear_p_divisible_poles(&k, (num.clone(), den.clone()));
    // split into polynomial part and proper fraction
    let (mut polypart, frac_num) = poly::divrem(&k, &cleared.0, &cleared.1);
    let proper: Frac = (frac_num, cleared.1);
    // positive exponents divisible by p reduce downward:
    // a t^{mp} = (b t^m)^p - b t^m + b t^m with b = a^{1/p}
    let p = k.p as usize;
    while let Some(i) =
        (1..polypart.len()).rev().find(|i| i % p == 0 && !k.is_zero(&polypart[*i]))
    {
        let b = k.pth_root(&polypart[i]);
        polypart[i] = k.zero();
        let m = i / p;
        if polypart.len() <= m {
            polypart.resize(m + 1, k.zero());
        }
        polypart[m] = k.add(&polypart[m], &b);
        witness = ratfunc::frac_add(&k, &witness, &(poly::monomial(&k, b, m), poly::one(&k)));
    }
    poly::trim(&k, &mut polypart);
    // constant term by the finite-field rule
    let c0 = polypart.first().cloned().unwrap_or_else(|| k.zero());
    let (c_canon, c_wit) = reduce_finite(&k, &c0);
    if !polypart.is_empty() {
        polypart[0] = c_canon.clone();
        poly::trim(&k, &mut polypart);
    } else if !k.is_zero(&c_canon) {
        polypart = vec![c_canon.clone()];
    }
    witness = ratfunc::frac_add(&k, &witness, &(poly::constant(&k, c_wit), poly::one(&k)));
    let canonical_frac = ratfunc::frac_add(&k, &(polypart, poly::one(&k)), &proper);
    let canonical = BaseFieldElement::from_ratio(&desc, canonical_frac.0, canonical_frac.1);
    let witness = BaseFieldElement::from_ratio(&desc, witness.0, witness.1);
    let in_image = canonical.is_zero();
    ASReduction {
        input: beta.clone(),
        canonical,
        witness,
        in_image,
    }
}

/// Finite-field rule: canonical forms are the F_p-multiples of a fixed
/// element tau of nonzero trace; the complement is cut out by the trace.
fn reduce_finite(k: &FqCtx, beta: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let tau = k.nonzero_trace_elem();
    let tr_beta = k.trace(beta);
    let tr_tau = k.trace(&tau);
    let j = super::fp::mul_mod(tr_beta, super::fp::inv_mod(tr_tau, k.p), k.p);
    let canonical = k.mul(&k.from_scalar(j), &tau);
    let y = k.sub(beta, &canonical);
    let witness = k
        .artin_schreier_solve(&y)
        .expect("trace-zero difference is in the image");
    (canonical, witness)
}

/// Dimension of k modulo the image of x^p - x, as an F_p-vector space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CokernelDim {
    Finite(u32),
    Infinite,
}

impl CokernelDim {
    /// `self < n` in the sense used by the symbol-length bound.
    pub fn less_than(&self, n: u32) -> bool {
        match self {
            CokernelDim::Finite(m) => *m < n,
            CokernelDim::Infinite => false,
        }
    }
}

impl fmt::Display for CokernelDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CokernelDim::Finite(m) => write!(f, "{m}"),
            CokernelDim::Infinite => write!(f, "infinite"),
        }
    }
}

/// dim of k/(x^p - x)(k): 1 for every finite field, infinite for F_q(t)
/// (the poles t^{-m} with m prime to p are independent).
pub fn cokernel_dim(desc: &BaseFieldDesc) -> CokernelDim {
    if desc.is_rat_func() {
        CokernelDim::Infinite
    } else {
        CokernelDim::Finite(1)
    }
}

/// A nonzero F_p-linear combination of the inputs that lies in the image,
/// if one exists: returns (coefficients, witness with comb = witness^p - witness).
pub fn dependent_combination(
    betas: &[BaseFieldElement],
    max_listed: usize,
) -> Result<Option<(Vec<u64>, BaseFieldElement)>, FieldError> {
    assert!(!betas.is_empty());
    let desc = betas[0].desc().clone();
    let p = desc.p();
    let r = betas.len();
    if r > max_listed {
        let needed = (p as u128).pow(r as u32) - 1;
        let budget = (p as u128).pow(max_listed as u32) - 1;
        return Err(FieldError::IndependenceBudget { needed, budget });
    }
    let mut coeffs = vec![0u64; r];
    loop {
        // odometer over F_p^r, skipping zero
        let mut i = 0;
        loop {
            if i == r {
                return Ok(None);
            }
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        let mut comb = desc.zero();
        for (c, b) in coeffs.iter().zip(betas) {
            if *c != 0 {
                comb = comb.add(&desc.elem_int(*c as i64).mul(b));
            }
        }
        let red = artin_schreier_reduce(&comb);
        if red.in_image {
            return Ok(Some((coeffs.clone(), red.witness)));
        }
    }
}

/// True iff no nonzero F_p-linear combination of the inputs is of the form
/// x^p - x. Decided by reduction of all p^r - 1 combinations.
pub fn as_independent(betas: &[BaseFieldElement]) -> Result<bool, FieldError> {
    Ok(dependent_combination(betas, DEFAULT_INDEPENDENCE_LIMIT)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2t() -> BaseFieldDesc {
        BaseFieldDesc::parse("F2(t)").unwrap()
    }

    #[test]
    fn zero_reduces_to_zero() {
        for desc in [
            BaseFieldDesc::prime_field(2).unwrap(),
            BaseFieldDesc::finite_field(2, 2).unwrap(),
            f2t(),
        ] {
            let red = artin_schreier_reduce(&desc.zero());
            assert!(red.in_image);
            assert!(red.canonical.is_zero());
            assert!(red.witness.is_zero());
            assert!(red.holds_exactly());
        }
    }

    #[test]
    fn one_in_image_over_f4() {
        // w^2 - w = w^2 + w = 1 with the modulus w^2 + w + 1
        let f4 = BaseFieldDesc::finite_field(2, 2).unwrap();
        let red = artin_schreier_reduce(&f4.one());
        assert!(red.in_image);
        assert!(red.holds_exactly());
        assert_eq!(red.witness.wp(), f4.one());
    }

    #[test]
    fn t_minus_two_reduces_to_t_minus_one() {
        let k = f2t();
        let red = artin_schreier_reduce(&k.t_pow(-2));
        assert_eq!(red.canonical, k.t_pow(-1));
        assert_eq!(red.witness, k.t_pow(-1));
        assert!(!red.in_image);
        assert!(red.holds_exactly());
    }

    #[test]
    fn reduction_is_a_projector() {
        let k = f2t();
        let beta = k.t_pow(-4).add(&k.t_pow(3)).add(&k.t_pow(-1));
        let red = artin_schreier_reduce(&beta);
        assert!(red.holds_exactly());
        let again = artin_schreier_reduce(&red.canonical);
        assert_eq!(again.canonical, red.canonical);
        assert!(again.witness.is_zero());
    }

    #[test]
    fn polynomial_part_reduces() {
        // t^2 = (t)^2 - t + t, so t^2 reduces to t
        let k = f2t();
        let red = artin_schreier_reduce(&k.t_pow(2));
        assert_eq!(red.canonical, k.t_pow(1));
        assert!(red.holds_exactly());
    }

    #[test]
    fn independence_examples() {
        let k = f2t();
        assert!(as_independent(&[k.t_pow(-1), k.t_pow(-3)]).unwrap());
        assert!(!as_independent(&[k.t_pow(-1), k.t_pow(-2)]).unwrap());
        let (coeffs, witness) =
            dependent_combination(&[k.t_pow(-1), k.t_pow(-2)], 6).unwrap().unwrap();
        assert_eq!(coeffs, vec![1, 1]);
        assert_eq!(witness, k.t_pow(-1));
        // [0] is dependent over any field
        let f2 = BaseFieldDesc::prime_field(2).unwrap();
        assert!(!as_independent(&[f2.zero()]).unwrap());
    }

    #[test]
    fn reduction_over_extension_constants() {
        // F_4(t): same pole rule, extension-field constant rule
        let k = BaseFieldDesc::parse("F4:w^2+w+1(t)").unwrap();
        let red = artin_schreier_reduce(&k.t_pow(-2));
        assert_eq!(red.canonical, k.t_pow(-1));
        assert!(red.holds_exactly());
        // the constant w has nonzero absolute trace, so it survives; 1 has
        // trace 0 in F_4 and is an image
        let w = k.gen_w();
        let red = artin_schreier_reduce(&w);
        assert!(!red.in_image);
        assert!(red.holds_exactly());
        let red = artin_schreier_reduce(&k.one());
        assert!(red.in_image);
        assert!(red.holds_exactly());
    }

    #[test]
    fn reduction_at_an_irreducible_quadratic_place() {
        // 1/(t^2+t+1)^2 reduces to a simple pole at the same place
        let k = f2t();
        let pi = k.t_pow(2).add(&k.t_pow(1)).add(&k.one());
        let beta = k.one().div(&pi.mul(&pi)).unwrap();
        let red = artin_schreier_reduce(&beta);
        assert!(red.holds_exactly());
        assert!(!red.in_image);
        // the canonical form has a simple pole: multiplying by pi clears it
        assert!(red.canonical.mul(&pi).ratio_parts().unwrap().1.len() == 1);
        // and reducing again changes nothing
        let again = artin_schreier_reduce(&red.canonical);
        assert_eq!(again.canonical, red.canonical);
        assert!(again.witness.is_zero());
    }

    #[test]
    fn cokernel_dimensions() {
        // finite fields: the image of x^p - x has index p, so the quotient
        // is one-dimensional; checked by counting the image
        for desc in [
            BaseFieldDesc::prime_field(2).unwrap(),
            BaseFieldDesc::finite_field(3, 2).unwrap(), // F_9
        ] {
            assert_eq!(cokernel_dim(&desc), CokernelDim::Finite(1));
            let elems = desc.all_elements().unwrap();
            let image: std::collections::HashSet<_> = elems.iter().map(|x| x.wp()).collect();
            assert_eq!(elems.len(), image.len() * desc.p() as usize);
        }
        // F_2(t): odd-order poles give arbitrarily large independent
        // families, so the quotient is infinite-dimensional
        let k = f2t();
        assert_eq!(cokernel_dim(&k), CokernelDim::Infinite);
        assert!(as_independent(&[k.t_pow(-1), k.t_pow(-3), k.t_pow(-5)]).unwrap());
        assert!(as_independent(&[k.t_pow(-1), k.t_pow(-3), k.t_pow(-5), k.t_pow(-7)]).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let k = f2t();
        let betas: Vec<_> = (0..7).map(|i| k.t_pow(-(2 * i + 1))).collect();
        assert!(matches!(
            as_independent(&betas),
            Err(FieldError::IndependenceBudget { .. })
        ));
    }

    #[test]
    fn trace_criterion_matches_enumeration_small_fields() {
        // in_image iff absolute trace vanishes; checked by enumerating the
        // full image for every field of order <= 64
        for (p, dmax) in [(2u64, 6usize), (3, 3), (5, 2), (7, 2)] {
            for d in 1..=dmax {
                if (p as u128).pow(d as u32) > 64 {
                    continue;
                }
                let desc = BaseFieldDesc::finite_field(p, d).unwrap();
                let elems = desc.all_elements().unwrap();
                let image: std::collections::HashSet<_> =
                    elems.iter().map(|x| x.wp()).collect();
                for beta in &elems {
                    let red = artin_schreier_reduce(beta);
                    assert!(red.holds_exactly());
                    assert_eq!(red.in_image, image.contains(beta), "field F_{}^{}", p, d);
                }
            }
        }
        // primes up to 64 as well
        for p in [11u64, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61] {
            let desc = BaseFieldDesc::prime_field(p).unwrap();
            let elems = desc.all_elements().unwrap();
            let image: std::collections::HashSet<_> = elems.iter().map(|x| x.wp()).collect();
            for beta in &elems {
                assert_eq!(artin_schreier_reduce(beta).in_image, image.contains(beta));
            }
        }
    }
}
