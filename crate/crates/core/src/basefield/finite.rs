//! Arithmetic in F_{p^d} on coefficient vectors over F_p.
//!
//! Elements are ascending coefficient vectors of length `d` in the power
//! basis of the defining modulus. The context struct carries `p` and the
//! monic modulus; callers keep vectors canonical (entries reduced mod p).

use super::fp;

/// Arithmetic context for one finite field F_{p^d}.
#[derive(Debug, Clone, Copy)]
pub struct FqCtx<'a> {
    pub p: u64,
    pub modulus: &'a [u64],
}

impl<'a> FqCtx<'a> {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Vec<u64> {
        self.from_scalar(1)
    }

    pub fn from_scalar(&self, c: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = c % self.p;
        v
    }

    /// Generator of the power basis (the class of x), i.e. `w`.
    pub fn gen(&self) -> Vec<u64> {
        let mut v = self.zero();
        if self.degree() > 1 {
            v[1] = 1;
        } else {
            // F_p has no extension generator; fall back to 1
            v[0] = 1;
        }
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| fp::add_mod(x, y, self.p))
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| fp::sub_mod(x, y, self.p))
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| fp::sub_mod(0, x, self.p)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let mut prod = vec![0u64; 2 * d.max(1)];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = fp::add_mod(prod[i + j], fp::mul_mod(ai, bj, self.p), self.p);
            }
        }
        self.reduce(&prod)
    }

    /// Reduce an (over-long) coefficient vector modulo the modulus and pad
    /// back to length d.
    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let mut r: Vec<u64> = v.to_vec();
        while r.last() == Some(&0) {
            r.pop();
        }
        while r.len() > d {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - d;
            for j in 0..=d {
                let t = fp::mul_mod(lead, self.modulus[j], self.p);
                r[shift + j] = fp::sub_mod(r[shift + j], t, self.p);
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        r.resize(d, 0);
        r
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element: a^(q-2).
    pub fn inv(&self, a: &[u64]) -> Vec<u64> {
        debug_assert!(!self.is_zero(a));
        self.pow(a, self.order() - 2)
    }

    /// The Frobenius a -> a^p.
    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        self.pow(a, self.p)
    }

    /// The unique p-th root in a finite field: Frobenius applied d-1 times.
    pub fn pth_root(&self, a: &[u64]) -> Vec<u64> {
        let mut x = a.to_vec();
        for _ in 0..self.degree().saturating_sub(1) {
            x = self.frobenius(&x);
        }
        x
    }

    /// Absolute trace to F_p, returned as a scalar.
    pub fn trace(&self, a: &[u64]) -> u64 {
        let mut acc = self.zero();
        let mut x = a.to_vec();
        for _ in 0..self.degree() {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0), "trace not in F_p");
        acc[0]
    }

    /// A fixed element of nonzero absolute trace: the first power-basis
    /// vector that has one. Used as the canonical coset representative
    /// direction for reduction modulo x^p - x.
    pub fn nonzero_trace_elem(&self) -> Vec<u64> {
        for i in 0..self.degree() {
            let mut v = self.zero();
            v[i] = 1;
            if self.trace(&v) != 0 {
                return v;
            }
        }
        unreachable!("trace is surjective onto F_p");
    }

    /// Solve x^p - x = y by F_p-linear algebra. Solvable iff trace(y) = 0.
    pub fn artin_schreier_solve(&self, y: &[u64]) -> Option<Vec<u64>> {
        let d = self.degree();
        // column j = (e_j)^p - e_j in the power basis
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut e = self.zero();
            e[j] = 1;
            cols.push(self.sub(&self.frobenius(&e), &e));
        }
        let rows: Vec<Vec<u64>> = (0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect();
        fp::solve_mod_p(&rows, y, self.p)
    }

    /// All q elements, in base-p counter order.
    pub fn all_elements(&self) -> Vec<Vec<u64>> {
        let d = self.degree();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut v = self.zero();
        loop {
            out.push(v.clone());
            let mut i = 0;
            loop {
                if i == d {
                    return out;
                }
                v[i] += 1;
                if v[i] < self.p {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }
}
