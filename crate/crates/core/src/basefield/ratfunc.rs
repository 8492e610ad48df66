//! Reduced fractions over `F_q[t]` and the partial-fraction step of the
//! reduction modulo x^p - x.
//!
//! A fraction is kept with monic denominator and coprime parts. The
//! reduction walks the denominator's multiplicity decomposition: a pole
//! block of order divisible by p is cancelled exactly by subtracting
//! x^p - x applied to a fraction with a p-fold smaller pole, found by
//! solving u^p = c in the quotient ring at that block.

use super::finite::FqCtx;
use super::poly::{self, FqPoly};

/// Bring num/den to canonical form: den monic, gcd(num, den) = 1.
pub fn reduce(k: &FqCtx, num: FqPoly, den: FqPoly) -> (FqPoly, FqPoly) {
    assert!(!den.is_empty(), "zero denominator");
    if num.is_empty() {
        return (Vec::new(), poly::one(k));
    }
    let g = poly::gcd(k, &num, &den);
    let (num, den) = if poly::degree(&g) == Some(0) {
        (num, den)
    } else {
        (
            poly::divrem(k, &num, &g).0,
            poly::divrem(k, &den, &g).0,
        )
    };
    let lead_inv = k.inv(den.last().unwrap());
    (poly::scale(k, &num, &lead_inv), poly::scale(k, &den, &lead_inv))
}

/// One fraction as (num, den); plain data, canonicalized by `reduce`.
pub type Frac = (FqPoly, FqPoly);

pub fn frac_add(k: &FqCtx, a: &Frac, b: &Frac) -> Frac {
    let num = poly::add(
        k,
        &poly::mul(k, &a.0, &b.1),
        &poly::mul(k, &b.0, &a.1),
    );
    let den = poly::mul(k, &a.1, &b.1);
    reduce(k, num, den)
}

pub fn frac_sub(k: &FqCtx, a: &Frac, b: &Frac) -> Frac {
    frac_add(k, a, &(poly::neg(k, &b.0), b.1.clone()))
}

/// x^p - x on a fraction.
pub fn frac_wp(k: &FqCtx, a: &Frac) -> Frac {
    let p = k.p as usize;
    let num_p = poly_power_p(k, &a.0, p);
    let den_p = poly_power_p(k, &a.1, p);
    // a^p - a = (num^p * den - num * den^p) / den^{p+1}, then reduce
    let num = poly::sub(
        k,
        &poly::mul(k, &num_p, &a.1),
        &poly::mul(k, &a.0, &den_p),
    );
    let den = poly::mul(k, &den_p, &a.1);
    reduce(k, num, den)
}

fn poly_power_p(k: &FqCtx, f: &FqPoly, p: usize) -> FqPoly {
    if f.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); (f.len() - 1) * p + 1];
    for (i, c) in f.iter().enumerate() {
        out[i * p] = k.frobenius(c);
    }
    out
}

/// Clear every pole coefficient of order divisible by p. The local
/// expansion of f at a multiplicity block A is read off base-A digits of
/// the local numerator; a nonzero digit at order m = m'p is cancelled
/// exactly by subtracting x^p - x applied to u/A^{m'} where u^p matches
/// the digit mod A. Returns the reduced fraction and the accumulated
/// witness: the input equals `reduced + witness^p - witness`.
pub fn clear_p_divisible_poles(k: &FqCtx, f: Frac) -> (Frac, Frac) {
    let p = k.p as usize;
    let mut f = f;
    let mut witness: Frac = (Vec::new(), poly::one(k));
    loop {
        let Some((block, order, digit)) = next_reducible_digit(k, &f, p) else {
            break;
        };
        let u = poly::frobenius_root_mod(k, &digit, &block);
        let step: Frac = (u, poly_pow(k, &block, order / p));
        f = frac_sub(k, &f, &frac_wp(k, &step));
        witness = frac_add(k, &witness, &step);
    }
    (f, witness)
}

/// The first multiplicity block of the denominator carrying a nonzero
/// expansion coefficient at an order divisible by p, largest order first
/// within the block; None when every p-divisible order is clear.
fn next_reducible_digit(k: &FqCtx, f: &Frac, p: usize) -> Option<(FqPoly, usize, FqPoly)> {
    if poly::degree(&f.1) == Some(0) {
        return None;
    }
    let parts = poly::squarefree_decomposition(k, &f.1);
    for (block, e) in &parts {
        if *e < p {
            continue;
        }
        // local numerator g with f = g / block^e + (regular at block);
        // base-block digit j of g is the pole coefficient of order e - j
        let block_pow = poly_pow(k, block, *e);
        let rest = poly::divrem(k, &f.1, &block_pow).0;
        let g = poly::rem(
            k,
            &poly::mul(k, &f.0, &poly::inv_mod(k, &rest, &block_pow)),
            &block_pow,
        );
        let mut digits = Vec::with_capacity(*e);
        let mut q = g;
        for _ in 0..*e {
            let (q2, r) = poly::divrem(k, &q, block);
            digits.push(r);
            q = q2;
        }
        for m in (1..=*e).rev() {
            if m % p == 0 && !poly::is_zero(&digits[*e - m]) {
                return Some((block.clone(), m, digits[*e - m].clone()));
            }
        }
    }
    None
}

fn poly_pow(k: &FqCtx, f: &FqPoly, e: usize) -> FqPoly {
    let mut acc = poly::one(k);
    for _ in 0..e {
        acc = poly::mul(k, &acc, f);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FqCtx<'static> {
        FqCtx {
            p: 2,
            modulus: &[0, 1],
        }
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let k = f2();
        let t = poly::monomial(&k, k.one(), 1);
        let t2 = poly::mul(&k, &t, &t);
        let (n, d) = reduce(&k, t2.clone(), t.clone());
        assert_eq!((n, d), (t.clone(), poly::one(&k)));
    }

    #[test]
    fn pole_clearing_on_t_minus_two() {
        // 1/t^2 = 1/t + (1/t)^2 - (1/t) over F_2
        let k = f2();
        let t = poly::monomial(&k, k.one(), 1);
        let f: Frac = (poly::one(&k), poly::mul(&k, &t, &t));
        let (reduced, witness) = clear_p_divisible_poles(&k, f.clone());
        assert_eq!(reduced, (poly::one(&k), t.clone()));
        assert_eq!(witness, (poly::one(&k), t));
        // recombine exactly
        let back = frac_add(&k, &reduced, &frac_wp(&k, &witness));
        assert_eq!(back, f);
    }

    #[test]
    fn interior_expansion_digits_are_cleared() {
        // (1 + t + t^2)/t^3 has an odd top pole order but a reducible
        // order-2 coefficient; the reduction must strip it down to 1/t^3
        let k = f2();
        let t = poly::monomial(&k, k.one(), 1);
        let t3 = poly_pow(&k, &t, 3);
        let num = vec![k.one(), k.one(), k.one()];
        let (reduced, witness) = clear_p_divisible_poles(&k, (num.clone(), t3.clone()));
        assert_eq!(reduced, (poly::one(&k), t3.clone()));
        assert_eq!(witness, (poly::one(&k), t));
        let back = frac_add(&k, &reduced, &frac_wp(&k, &witness));
        assert_eq!(back, reduce(&k, num, t3));
    }
}
