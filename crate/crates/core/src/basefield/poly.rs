//! Dense univariate polynomials over F_{p^d}, as used by the rational
//! function field layer: Euclidean arithmetic, gcds, p-th roots, the
//! multiplicity-grouped squarefree decomposition in characteristic p, and
//! Frobenius solving in quotient rings `F_q[t]/(A)`.
//!
//! A polynomial is an ascending `Vec` of field elements with no trailing
//! zeros; the zero polynomial is the empty vector.

use super::finite::FqCtx;
use super::fp;

pub type FqPoly = Vec<Vec<u64>>;

pub fn trim(k: &FqCtx, f: &mut FqPoly) {
    while f.last().is_some_and(|c| k.is_zero(c)) {
        f.pop();
    }
}

pub fn is_zero(f: &FqPoly) -> bool {
    f.is_empty()
}

/// Degree, with deg 0 = None for the zero polynomial.
pub fn degree(f: &FqPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn constant(k: &FqCtx, c: Vec<u64>) -> FqPoly {
    if k.is_zero(&c) {
        Vec::new()
    } else {
        vec![c]
    }
}

pub fn one(k: &FqCtx) -> FqPoly {
    vec![k.one()]
}

/// The monomial c * t^e.
pub fn monomial(k: &FqCtx, c: Vec<u64>, e: usize) -> FqPoly {
    if k.is_zero(&c) {
        return Vec::new();
    }
    let mut f = vec![k.zero(); e + 1];
    f[e] = c;
    f
}

pub fn add(k: &FqCtx, a: &FqPoly, b: &FqPoly) -> FqPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| k.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| k.zero());
        out.push(k.add(&x, &y));
    }
    trim(k, &mut out);
    out
}

pub fn neg(k: &FqCtx, a: &FqPoly) -> FqPoly {
    a.iter().map(|c| k.neg(c)).collect()
}

pub fn sub(k: &FqCtx, a: &FqPoly, b: &FqPoly) -> FqPoly {
    add(k, a, &neg(k, b))
}

pub fn mul(k: &FqCtx, a: &FqPoly, b: &FqPoly) -> FqPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if k.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(ai, bj));
        }
    }
    trim(k, &mut out);
    out
}

pub fn scale(k: &FqCtx, a: &FqPoly, c: &[u64]) -> FqPoly {
    if k.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|x| k.mul(x, c)).collect()
}

/// Euclidean division: a = q*b + r with deg r < deg b. Panics on b = 0.
pub fn divrem(k: &FqCtx, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.clone();
    trim(k, &mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = k.inv(b.last().unwrap());
    let mut q = vec![k.zero(); r.len() - db];
    while r.len() > db {
        let coef = k.mul(r.last().unwrap(), &lead_inv);
        let shift = r.len() - 1 - db;
        q[shift] = coef.clone();
        for j in 0..=db {
            let t = k.mul(&coef, &b[j]);
            r[shift + j] = k.sub(&r[shift + j], &t);
        }
        trim(k, &mut r);
    }
    trim(k, &mut q);
    (q, r)
}

pub fn rem(k: &FqCtx, a: &FqPoly, b: &FqPoly) -> FqPoly {
    divrem(k, a, b).1
}

pub fn make_monic(k: &FqCtx, a: &FqPoly) -> FqPoly {
    match a.last() {
        None => Vec::new(),
        Some(lead) => scale(k, a, &k.inv(lead)),
    }
}

/// Monic gcd.
pub fn gcd(k: &FqCtx, a: &FqPoly, b: &FqPoly) -> FqPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(k, &mut x);
    trim(k, &mut y);
    while !y.is_empty() {
        let r = rem(k, &x, &y);
        x = y;
        y = r;
    }
    make_monic(k, &x)
}

/// Extended gcd: returns (g, s, t) monic with s*a + t*b = g.
pub fn ext_gcd(k: &FqCtx, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly, FqPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (one(k), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), one(k));
    trim(k, &mut r0);
    trim(k, &mut r1);
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let ns = sub(k, &s0, &mul(k, &q, &s1));
        let nt = sub(k, &t0, &mul(k, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if let Some(lead) = r0.clone().last() {
        let inv = k.inv(lead);
        r0 = scale(k, &r0, &inv);
        s0 = scale(k, &s0, &inv);
        t0 = scale(k, &t0, &inv);
    }
    (r0, s0, t0)
}

/// Inverse of b modulo monic a, assuming gcd(a, b) = 1.
pub fn inv_mod(k: &FqCtx, b: &FqPoly, a: &FqPoly) -> FqPoly {
    let (g, _, t) = ext_gcd(k, a, b);
    debug_assert_eq!(degree(&g), Some(0), "inv_mod of non-coprime input");
    rem(k, &t, a)
}

pub fn derivative(k: &FqCtx, a: &FqPoly) -> FqPoly {
    let mut out = Vec::new();
    for (i, c) in a.iter().enumerate().skip(1) {
        let m = k.from_scalar((i as u64) % k.p);
        out.push(k.mul(c, &m));
    }
    trim(k, &mut out);
    out
}

/// Exact p-th root of a polynomial, when it is one. Over a finite
/// coefficient field f is a p-th power iff its support lies in p*Z.
pub fn pth_root(k: &FqCtx, a: &FqPoly) -> Option<FqPoly> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    let p = k.p as usize;
    if !(a.len() - 1).is_multiple_of(p) {
        return None;
    }
    let mut out = vec![k.zero(); (a.len() - 1) / p + 1];
    for (i, c) in a.iter().enumerate() {
        if i % p == 0 {
            out[i / p] = k.pth_root(c);
        } else if !k.is_zero(c) {
            return None;
        }
    }
    Some(out)
}

/// Squarefree decomposition of a monic polynomial in characteristic p:
/// returns pairs (A_e, e) with f = prod A_e^e, the A_e monic squarefree and
/// pairwise coprime, and every irreducible factor of A_e of multiplicity
/// exactly e in f.
pub fn squarefree_decomposition(k: &FqCtx, f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let mut parts: Vec<(FqPoly, usize)> = Vec::new();
    sqf_into(k, f, 1, &mut parts);
    parts.sort_by_key(|&(_, e)| e);
    parts
}

fn sqf_into(k: &FqCtx, f: &FqPoly, mult_scale: usize, parts: &mut Vec<(FqPoly, usize)>) {
    if degree(f).unwrap_or(0) == 0 {
        return;
    }
    let fd = derivative(k, f);
    if is_zero(&fd) {
        // f is g(t)^p with g monic; multiplicities scale by p
        let g = pth_root(k, f).expect("derivative-zero monic polynomial is a p-th power");
        sqf_into(k, &g, mult_scale * k.p as usize, parts);
        return;
    }
    let mut c = gcd(k, f, &fd);
    let mut w = divrem(k, f, &c).0;
    let mut i = 1usize;
    while degree(&w) != Some(0) {
        let y = gcd(k, &w, &c);
        let z = divrem(k, &w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            push_part(parts, make_monic(k, &z), i * mult_scale);
        }
        w = y;
        c = divrem(k, &c, &w).0;
        i += 1;
    }
    if degree(&c).unwrap_or(0) > 0 {
        // leftover factors all have multiplicity divisible by p
        let g = pth_root(k, &make_monic(k, &c)).expect("residual multiplicities divisible by p");
        sqf_into(k, &g, mult_scale * k.p as usize, parts);
    }
}

fn push_part(parts: &mut Vec<(FqPoly, usize)>, a: FqPoly, e: usize) {
    // multiplicities are i * p^k with p not dividing i, so each branch of the
    // recursion produces a distinct e
    debug_assert!(parts.iter().all(|(_, eb)| *eb != e));
    parts.push((a, e));
}

/// F_p-linear solve of `u^p = c` in `R = F_q[t]/(A)` for squarefree monic A.
/// Frobenius is bijective on such R, so this always succeeds.
pub fn frobenius_root_mod(k: &FqCtx, c: &FqPoly, a_mod: &FqPoly) -> FqPoly {
    let deg_a = degree(a_mod).expect("zero modulus");
    let d = k.degree();
    let dim = d * deg_a;
    // basis of R over F_p: w^i t^j
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(dim);
    for j in 0..deg_a {
        for i in 0..d {
            let mut coef = k.zero();
            coef[i] = 1;
            let basis_elt = monomial(k, coef, j);
            let image = rem(k, &pow_mod_poly(k, &basis_elt, k.p, a_mod), a_mod);
            cols.push(flatten(k, &image, deg_a));
        }
    }
    let rows: Vec<Vec<u64>> = (0..dim)
        .map(|r| (0..dim).map(|cix| cols[cix][r]).collect())
        .collect();
    let rhs = flatten(k, &rem(k, c, a_mod), deg_a);
    let sol = fp::solve_mod_p(&rows, &rhs, k.p).expect("Frobenius is bijective mod a squarefree modulus");
    // reassemble a polynomial from the F_p coordinates
    let mut out = vec![k.zero(); deg_a];
    for j in 0..deg_a {
        for i in 0..d {
            out[j][i] = sol[j * d + i];
        }
    }
    trim(k, &mut out);
    out
}

fn pow_mod_poly(k: &FqCtx, base: &FqPoly, mut e: u64, m: &FqPoly) -> FqPoly {
    let mut b = rem(k, base, m);
    let mut acc = one(k);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(k, &mul(k, &acc, &b), m);
        }
        b = rem(k, &mul(k, &b, &b), m);
        e >>= 1;
    }
    acc
}

fn flatten(k: &FqCtx, f: &FqPoly, deg_a: usize) -> Vec<u64> {
    let d = k.degree();
    let mut v = vec![0u64; d * deg_a];
    for (j, c) in f.iter().enumerate() {
        for i in 0..d {
            v[j * d + i] = c[i];
        }
    }
    v
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

    fn tpoly(k: &FqCtx, coeffs: &[u64]) -> FqPoly {
        let mut f: FqPoly = coeffs.iter().map(|&c| k.from_scalar(c)).collect();
        trim(k, &mut f);
        f
    }

    #[test]
    fn divrem_roundtrip() {
        let k = f2();
        let a = tpoly(&k, &[1, 0, 1, 1]); // 1 + t^2 + t^3
        let b = tpoly(&k, &[1, 1]); // 1 + t
        let (q, r) = divrem(&k, &a, &b);
        assert_eq!(add(&k, &mul(&k, &q, &b), &r), a);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let k = f2();
        let t = tpoly(&k, &[0, 1]);
        let t1 = tpoly(&k, &[1, 1]);
        let a = mul(&k, &t, &t1);
        let b = mul(&k, &t, &tpoly(&k, &[1, 1, 1]));
        assert_eq!(gcd(&k, &a, &b), t);
    }

    #[test]
    fn squarefree_decomposition_char2() {
        let k = f2();
        let t = tpoly(&k, &[0, 1]);
        let t1 = tpoly(&k, &[1, 1]);
        // f = t^2 (t+1)^3
        let f = mul(&k, &mul(&k, &t, &t), &mul(&k, &t1, &mul(&k, &t1, &t1)));
        let parts = squarefree_decomposition(&k, &f);
        assert_eq!(parts, vec![(t.clone(), 2), (t1.clone(), 3)]);
        // reassemble
        let mut acc = one(&k);
        for (a, e) in &parts {
            for _ in 0..*e {
                acc = mul(&k, &acc, a);
            }
        }
        assert_eq!(acc, f);
    }

    #[test]
    fn squarefree_decomposition_pure_power() {
        let k = f2();
        let t = tpoly(&k, &[0, 1]);
        // t^4 has derivative zero twice over
        let f = mul(&k, &mul(&k, &t, &t), &mul(&k, &t, &t));
        let parts = squarefree_decomposition(&k, &f);
        assert_eq!(parts, vec![(t, 4)]);
    }

    #[test]
    fn frobenius_root() {
        let k = f2();
        let a = tpoly(&k, &[1, 1, 1]); // t^2 + t + 1, irreducible
        let c = tpoly(&k, &[0, 1]);
        let u = frobenius_root_mod(&k, &c, &a);
        let up = rem(&k, &mul(&k, &u, &u), &a);
        assert_eq!(up, c);
    }

    #[test]
    fn frobenius_root_over_extension_constants() {
        // F_9 coefficients, composite squarefree modulus t(t+1)
        let modulus = crate::basefield::fp::find_irreducible(3, 2);
        let k = FqCtx {
            p: 3,
            modulus: &modulus,
        };
        let a = vec![k.zero(), k.neg(&k.one()), k.one()]; // t^2 - t = t(t-1)
        for c in [
            vec![k.gen(), k.one()],
            vec![k.one(), k.gen()],
            vec![k.mul(&k.gen(), &k.gen()), k.zero()],
        ] {
            let u = frobenius_root_mod(&k, &c, &a);
            let cube = rem(&k, &mul(&k, &mul(&k, &u, &u), &u), &a);
            assert_eq!(cube, rem(&k, &c, &a));
        }
    }
}
