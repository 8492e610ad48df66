//! Scalar arithmetic modulo a prime and small deterministic helpers:
//! primality, modular inverses, dense linear solving over F_p, and the
//! search for default irreducible polynomials.

/// Trial-division primality test. Inputs here are desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b % p) % p
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    // p is at most a few hundred here, so u64 products never overflow,
    // but go through u128 anyway.
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod a prime via Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

/// Solve `M x = rhs` over F_p with Gaussian elimination.
///
/// `m` is row-major, `rows x cols`. Returns one solution if the system is
/// consistent, `None` otherwise.
pub fn solve_mod_p(m: &[Vec<u64>], rhs: &[u64], p: u64) -> Option<Vec<u64>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut aug: Vec<Vec<u64>> = m
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b % p);
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !aug[i][c].is_multiple_of(p)) else {
            continue;
        };
        aug.swap(r, pr);
        let inv = inv_mod(aug[r][c], p);
        for j in c..=cols {
            aug[r][j] = mul_mod(aug[r][j], inv, p);
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_multiple_of(p) {
                let f = aug[i][c];
                for j in c..=cols {
                    let t = mul_mod(f, aug[r][j], p);
                    aug[i][j] = sub_mod(aug[i][j], t, p);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Consistency: no pivot in the augmented column.
    for i in r..rows {
        if !aug[i][cols].is_multiple_of(p) {
            return None;
        }
    }
    let mut x = vec![0u64; cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[i][cols];
    }
    Some(x)
}

/// Remainder of `a` modulo monic `m` over F_p.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    while r.last() == Some(&0) {
        r.pop();
    }
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for j in 0..=dm {
            let t = mul_mod(lead, m[j], p);
            r[shift + j] = sub_mod(r[shift + j], t, p);
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn divides(d: &[u64], f: &[u64], p: u64) -> bool {
    poly_rem(f, d, p).is_empty()
}

/// The lexicographically least monic irreducible polynomial of degree `d`
/// over F_p, as an ascending coefficient vector of length `d + 1`.
///
/// For degree 2 over F_2 this yields `x^2 + x + 1`, the modulus used by the
/// default `F4` descriptor.
pub fn find_irreducible(p: u64, d: usize) -> Vec<u64> {
    assert!(d >= 1);
    if d == 1 {
        return vec![0, 1]; // x
    }
    // Enumerate monic candidates by ascending low-coefficient vectors and
    // trial-divide by every monic polynomial of degree <= d/2.
    let mut low = vec![0u64; d];
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible_monic(&f, p) {
            return f;
        }
        // increment `low` as a base-p counter
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < d, "no irreducible of degree {d} over F_{p}?");
        }
    }
}

/// Irreducibility of a monic polynomial over F_p by trial division.
pub fn is_irreducible_monic(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // Any nontrivial factorization has a factor of degree <= d/2.
    for deg in 1..=(d / 2) {
        let mut low = vec![0u64; deg];
        loop {
            let mut cand = low.clone();
            cand.push(1);
            if divides(&cand, f, p) {
                return false;
            }
            let mut i = 0;
            let mut done = false;
            loop {
                low[i] += 1;
                if low[i] < p {
                    break;
                }
                low[i] = 0;
                i += 1;
                if i == deg {
                    done = true;
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(61));
        assert!(!is_prime(1));
        assert!(!is_prime(57));
    }

    #[test]
    fn default_moduli() {
        assert_eq!(find_irreducible(2, 2), vec![1, 1, 1]); // w^2 + w + 1
        assert_eq!(find_irreducible(2, 3), vec![1, 1, 0, 1]); // w^3 + w + 1
        // every default modulus up to order 64 must really be irreducible
        for (p, dmax) in [(2u64, 6usize), (3, 3), (5, 2), (7, 2)] {
            for d in 2..=dmax {
                let f = find_irreducible(p, d);
                assert_eq!(f.len(), d + 1);
                assert!(is_irreducible_monic(&f, p));
            }
        }
    }

    #[test]
    fn linear_solve() {
        // over F_3: x + 2y = 1, 2x + y = 2  =>  x = 1, y = 0
        let m = vec![vec![1, 2], vec![2, 1]];
        let x = solve_mod_p(&m, &[1, 2], 3).unwrap();
        assert_eq!(x, vec![1, 0]);
        // inconsistent system
        let m = vec![vec![1, 1], vec![2, 2]];
        assert!(solve_mod_p(&m, &[0, 1], 3).is_none());
    }
}
