//! Finite fields F_{p^m} with a fixed, deterministic choice of modulus.
//!
//! Elements are polynomials over F_p reduced modulo the lexicographically
//! least monic irreducible of degree m. Contexts are interned in a global
//! registry so two fields with the same (p, m) share one `Arc` and elements
//! can be mixed freely.

use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// Field descriptor: characteristic, extension degree and modulus.
pub struct FqCtx {
    pub p: u64,
    pub m: usize,
    /// Monic irreducible of degree m; coefficients of 1, t, .., t^m.
    pub modulus: Vec<u64>,
}

impl fmt::Debug for FqCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.m)
    }
}

impl PartialEq for FqCtx {
    fn eq(&self, other: &Self) -> bool {
        // contexts are interned per (p, m); the modulus is determined
        self.p == other.p && self.m == other.m
    }
}
impl Eq for FqCtx {}

static REGISTRY: Lazy<Mutex<HashMap<(u64, usize), Arc<FqCtx>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cache of embeddings: (p, m_small, m_big) -> powers of the image of the
/// small generator, each a representation vector in the big field.
static EMBEDDINGS: Lazy<Mutex<HashMap<(u64, usize, usize), Vec<Vec<u64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    // extended Euclid; a != 0 mod p
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        let r = r0 - q * r1;
        r0 = r1;
        r1 = r;
        let s = s0 - q * s1;
        s0 = s1;
        s1 = s;
    }
    assert_eq!(r0, 1, "non-invertible element");
    (s0.rem_euclid(p as i128)) as u64
}

/// Dense F_p[t] arithmetic used only for modulus search and reduction.
mod fp {
    use super::mulmod;

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = super::invmod(b[db], p);
        while r.len() > db {
            let dr = r.len() - 1;
            let c = mulmod(r[dr], lead_inv, p);
            if c != 0 {
                for i in 0..=db {
                    let idx = dr - db + i;
                    let sub = mulmod(c, b[i], p);
                    r[idx] = (r[idx] + p - sub) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        // trial division by all monic polynomials of degree <= deg/2
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            // iterate monic degree-d polys by base-p encoding of lower coeffs
            let count = (p as u128).pow(d as u32);
            for code in 0..count {
                let mut g = vec![0u64; d + 1];
                g[d] = 1;
                let mut c = code;
                for coeff in g.iter_mut().take(d) {
                    *coeff = (c % p as u128) as u64;
                    c /= p as u128;
                }
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FqCtx {
    /// Interned context for F_{p^m}. The modulus is the lexicographically
    /// least monic irreducible of degree m (coefficients compared as the
    /// base-p integer c_0 + c_1 p + ...), verified by trial division.
    pub fn get(p: u64, m: usize) -> Arc<FqCtx> {
        assert!(m >= 1);
        assert!(is_prime(p), "{p} is not prime");
        let mut reg = REGISTRY.lock().unwrap();
        if let Some(ctx) = reg.get(&(p, m)) {
            return ctx.clone();
        }
        let modulus = if m == 1 {
            vec![0, 1] // t itself; unused for m = 1
        } else {
            let mut found = None;
            let count = (p as u128).pow(m as u32);
            'outer: for code in 0..count {
                let mut f = vec![0u64; m + 1];
                f[m] = 1;
                let mut c = code;
                for coeff in f.iter_mut().take(m) {
                    *coeff = (c % p as u128) as u64;
                    c /= p as u128;
                }
                if fp::is_irreducible(&f, p) {
                    found = Some(f);
                    break 'outer;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };
        let ctx = Arc::new(FqCtx { p, m, modulus });
        reg.insert((p, m), ctx.clone());
        ctx
    }

    /// Field size p^m.
    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.m as u32)
    }

    pub fn zero(self: &Arc<Self>) -> Fq {
        Fq {
            ctx: self.clone(),
            rep: vec![0; self.m],
        }
    }

    pub fn one(self: &Arc<Self>) -> Fq {
        self.from_u64(1)
    }

    pub fn from_u64(self: &Arc<Self>, n: u64) -> Fq {
        let mut rep = vec![0; self.m];
        rep[0] = n % self.p;
        Fq {
            ctx: self.clone(),
            rep,
        }
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> Fq {
        let r = n.rem_euclid(self.p as i64) as u64;
        self.from_u64(r)
    }

    /// Element from its index in the canonical enumeration
    /// (base-p digits, least significant digit = constant coefficient).
    pub fn element(self: &Arc<Self>, index: u128) -> Fq {
        let mut rep = vec![0; self.m];
        let mut c = index;
        for d in rep.iter_mut() {
            *d = (c % self.p as u128) as u64;
            c /= self.p as u128;
        }
        assert_eq!(c, 0, "element index out of range");
        Fq {
            ctx: self.clone(),
            rep,
        }
    }

    /// Generator t of the polynomial representation (not necessarily a
    /// multiplicative generator).
    pub fn gen(self: &Arc<Self>) -> Fq {
        if self.m == 1 {
            return self.zero();
        }
        self.element(self.p as u128)
    }

    /// The least element (in enumeration order) generating the
    /// multiplicative group.
    pub fn multiplicative_generator(self: &Arc<Self>) -> Fq {
        let q = self.size();
        let order = q - 1;
        let primes = factor_u128(order);
        for idx in 1..q {
            let g = self.element(idx);
            if g.is_zero() {
                continue;
            }
            if primes.iter().all(|&r| !g.pow(order / r).is_one()) {
                return g;
            }
        }
        unreachable!("multiplicative group is cyclic");
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn factor_u128(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Element of F_{p^m}: coefficients of 1, t, .., t^{m-1}.
#[derive(Clone)]
pub struct Fq {
    pub ctx: Arc<FqCtx>,
    rep: Vec<u64>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.m == 1 {
            return write!(f, "{}", self.rep[0]);
        }
        let mut first = true;
        for (i, &c) in self.rep.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "t")?,
                1 => write!(f, "{c}t")?,
                _ if c == 1 => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        assert!(Arc::ptr_eq(&self.ctx, &other.ctx), "mixed field contexts");
        self.rep == other.rep
    }
}
impl Eq for Fq {}

impl Fq {
    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.rep[0] == 1 && self.rep[1..].iter().all(|&c| c == 0)
    }

    /// Canonical enumeration index (inverse of `FqCtx::element`).
    pub fn index(&self) -> u128 {
        let mut acc = 0u128;
        for &c in self.rep.iter().rev() {
            acc = acc * self.ctx.p as u128 + c as u128;
        }
        acc
    }

    pub fn add(&self, other: &Fq) -> Fq {
        assert!(Arc::ptr_eq(&self.ctx, &other.ctx));
        let p = self.ctx.p;
        let rep = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Fq {
            ctx: self.ctx.clone(),
            rep,
        }
    }

    pub fn sub(&self, other: &Fq) -> Fq {
        assert!(Arc::ptr_eq(&self.ctx, &other.ctx));
        let p = self.ctx.p;
        let rep = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        Fq {
            ctx: self.ctx.clone(),
            rep,
        }
    }

    pub fn neg(&self) -> Fq {
        let p = self.ctx.p;
        let rep = self.rep.iter().map(|&a| (p - a) % p).collect();
        Fq {
            ctx: self.ctx.clone(),
            rep,
        }
    }

    pub fn mul(&self, other: &Fq) -> Fq {
        assert!(Arc::ptr_eq(&self.ctx, &other.ctx));
        let p = self.ctx.p;
        let m = self.ctx.m;
        if m == 1 {
            return Fq {
                ctx: self.ctx.clone(),
                rep: vec![mulmod(self.rep[0], other.rep[0], p)],
            };
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &a) in self.rep.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.rep.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(a, b, p)) % p;
            }
        }
        // reduce modulo the monic modulus
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for (k, &mc) in self.ctx.modulus.iter().enumerate().take(m) {
                    let sub = mulmod(c, mc, p);
                    prod[d - m + k] = (prod[d - m + k] + p - sub) % p;
                }
            }
        }
        prod.truncate(m);
        Fq {
            ctx: self.ctx.clone(),
            rep: prod,
        }
    }

    pub fn pow(&self, mut e: u128) -> Fq {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn inv(&self) -> Fq {
        assert!(!self.is_zero(), "division by zero");
        self.pow(self.ctx.size() - 2)
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self) -> Fq {
        self.pow(self.ctx.p as u128)
    }

    /// True for elements of the prime field.
    pub fn in_prime_field(&self) -> bool {
        self.rep[1..].iter().all(|&c| c == 0)
    }

    /// Value in F_p when `in_prime_field` holds.
    pub fn as_prime_field(&self) -> Option<u64> {
        if self.in_prime_field() {
            Some(self.rep[0])
        } else {
            None
        }
    }
}

/// Embed x from F_{p^a} into F_{p^b} (a | b). The image of the small
/// generator is the root of the small modulus with least enumeration
/// index, so the embedding is deterministic.
pub fn embed(x: &Fq, big: &Arc<FqCtx>) -> Fq {
    let small = &x.ctx;
    assert_eq!(small.p, big.p);
    if Arc::ptr_eq(small, big) {
        return x.clone();
    }
    assert_eq!(big.m % small.m, 0, "no embedding: degree must divide");
    if small.m == 1 {
        return big.from_u64(x.rep[0]);
    }
    let key = (small.p, small.m, big.m);
    let powers: Vec<Vec<u64>> = {
        let cache = EMBEDDINGS.lock().unwrap();
        cache.get(&key).cloned()
    }
    .unwrap_or_else(|| {
        // roots of the small modulus inside the big field
        let coeffs: Vec<Fq> = x
            .ctx
            .modulus
            .iter()
            .map(|&c| big.from_u64(c))
            .collect();
        let poly = super::unipoly::Dense::new(big.clone(), coeffs);
        let mut roots = super::factor::roots_in_field(&poly);
        assert!(!roots.is_empty(), "modulus must split in the big field");
        roots.sort_by_key(|r| r.index());
        let image = roots[0].clone();
        let mut powers = Vec::with_capacity(small.m);
        let mut acc = big.one();
        for _ in 0..small.m {
            powers.push(acc.rep.clone());
            acc = acc.mul(&image);
        }
        let mut cache = EMBEDDINGS.lock().unwrap();
        cache.insert(key, powers.clone());
        powers
    });
    let mut acc = big.zero();
    for (i, &c) in x.rep.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = Fq {
            ctx: big.clone(),
            rep: powers[i].clone(),
        };
        acc = acc.add(&term.mul(&big.from_u64(c)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_is_deterministic_and_irreducible() {
        let f9 = FqCtx::get(3, 2);
        // t^2 + 1 is the least monic irreducible over F_3
        assert_eq!(f9.modulus, vec![1, 0, 1]);
        let f8 = FqCtx::get(2, 3);
        // t^3 + t + 1
        assert_eq!(f8.modulus, vec![1, 1, 0, 1]);
    }

    #[test]
    fn field_axioms_randomized() {
        for &(p, m) in &[(2u64, 3usize), (3, 2), (5, 2), (7, 1)] {
            let ctx = FqCtx::get(p, m);
            let q = ctx.size();
            // deterministic sweep standing in for random sampling
            for i in 0..q.min(60) {
                let a = ctx.element(i);
                let b = ctx.element((i * 7 + 3) % q);
                let c = ctx.element((i * 13 + 1) % q);
                assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                assert_eq!(a.mul(&b), b.mul(&a));
                assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                if !a.is_zero() {
                    assert!(a.mul(&a.pow(q - 2)).is_one());
                }
                // Frobenius is additive
                assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let f4 = FqCtx::get(2, 2);
        let f16 = FqCtx::get(2, 4);
        for i in 0..4u128 {
            for j in 0..4u128 {
                let a = f4.element(i);
                let b = f4.element(j);
                let ea = embed(&a, &f16);
                let eb = embed(&b, &f16);
                assert_eq!(embed(&a.mul(&b), &f16), ea.mul(&eb));
                assert_eq!(embed(&a.add(&b), &f16), ea.add(&eb));
            }
        }
    }

    #[test]
    fn multiplicative_generator_has_full_order() {
        let f25 = FqCtx::get(5, 2);
        let g = f25.multiplicative_generator();
        let mut seen = std::collections::HashSet::new();
        let mut acc = f25.one();
        for _ in 0..24 {
            acc = acc.mul(&g);
            seen.insert(acc.index());
        }
        assert_eq!(seen.len(), 24);
    }
}
