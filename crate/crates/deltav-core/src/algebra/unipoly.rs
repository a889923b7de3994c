//! Univariate polynomials over F_q.
//!
//! `UniPoly` is the public sparse (Laurent-capable) type used for reduced
//! edge equations; `Dense` is the internal workhorse for division, gcd and
//! modular exponentiation.

use super::finite::{Fq, FqCtx};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Sparse univariate polynomial; exponents may be negative.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub ctx: Arc<FqCtx>,
    terms: BTreeMap<i64, Fq>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})t^{e}")?;
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn zero(ctx: Arc<FqCtx>) -> Self {
        UniPoly {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(ctx: Arc<FqCtx>, terms: impl IntoIterator<Item = (i64, Fq)>) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(e).or_insert_with(|| ctx.zero());
            *entry = entry.add(&c);
            if entry.is_zero() {
                map.remove(&e);
            }
        }
        UniPoly { ctx, terms: map }
    }

    /// Coefficients listed from the constant term, for ordinary polynomials.
    pub fn from_coeffs(ctx: Arc<FqCtx>, coeffs: &[i64]) -> Self {
        let terms: Vec<(i64, Fq)> = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as i64, ctx.from_i64(c)))
            .collect();
        Self::from_terms(ctx, terms)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Fq)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> Fq {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Degree of the stripped polynomial (span of exponents).
    pub fn span(&self) -> i64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    /// Factor out the minimal power of t. Roots in units are unaffected.
    pub fn strip_monomial(&self) -> UniPoly {
        let Some(min) = self.min_exp() else {
            return self.clone();
        };
        UniPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (e - min, c.clone())).collect(),
        }
    }

    /// Dense form; requires a stripped (min exponent 0) or plain polynomial.
    pub fn to_dense(&self) -> Dense {
        let stripped = self.strip_monomial();
        let deg = stripped.max_exp().unwrap_or(0);
        let mut coeffs = vec![self.ctx.zero(); deg as usize + 1];
        for (e, c) in &stripped.terms {
            coeffs[*e as usize] = c.clone();
        }
        Dense::new(self.ctx.clone(), coeffs)
    }

    pub fn evaluate(&self, x: &Fq) -> Fq {
        let mut acc = self.ctx.zero();
        for (e, c) in &self.terms {
            assert!(*e >= 0, "evaluate requires non-negative exponents");
            acc = acc.add(&c.mul(&x.pow(*e as u128)));
        }
        acc
    }

    /// Map coefficients into a larger field.
    pub fn embed(&self, big: &Arc<FqCtx>) -> UniPoly {
        UniPoly {
            ctx: big.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, super::finite::embed(c, big)))
                .collect(),
        }
    }

    /// Formal derivative (char-p rules).
    pub fn derivative(&self) -> UniPoly {
        let terms: Vec<(i64, Fq)> = self
            .terms
            .iter()
            .filter(|(e, _)| **e != 0)
            .map(|(e, c)| (*e - 1, c.mul(&self.ctx.from_i64(*e))))
            .collect();
        UniPoly::from_terms(self.ctx.clone(), terms)
    }

    /// Substitute t -> c*t.
    pub fn scale_arg(&self, c: &Fq) -> UniPoly {
        let terms: Vec<(i64, Fq)> = self
            .terms
            .iter()
            .map(|(e, co)| {
                assert!(*e >= 0);
                (*e, co.mul(&c.pow(*e as u128)))
            })
            .collect();
        UniPoly::from_terms(self.ctx.clone(), terms)
    }

    /// Reverse the coefficient order (t -> 1/t up to a monomial).
    pub fn reverse(&self) -> UniPoly {
        let terms: Vec<(i64, Fq)> = self.terms.iter().map(|(e, c)| (-e, c.clone())).collect();
        UniPoly::from_terms(self.ctx.clone(), terms).strip_monomial()
    }
}

/// Dense polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Dense {
    pub ctx: Arc<FqCtx>,
    pub coeffs: Vec<Fq>,
}

impl fmt::Debug for Dense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.coeffs.iter().map(|c| format!("{c}")).collect();
        write!(f, "[{}]", v.join(", "))
    }
}

impl Dense {
    pub fn new(ctx: Arc<FqCtx>, mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Dense { ctx, coeffs }
    }

    pub fn zero(ctx: Arc<FqCtx>) -> Self {
        Dense {
            ctx,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: Arc<FqCtx>) -> Self {
        let one = ctx.one();
        Dense {
            ctx,
            coeffs: vec![one],
        }
    }

    pub fn x(ctx: Arc<FqCtx>) -> Self {
        let coeffs = vec![ctx.zero(), ctx.one()];
        Dense { ctx, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> &Fq {
        self.coeffs.last().expect("zero polynomial has no lead")
    }

    pub fn evaluate(&self, x: &Fq) -> Fq {
        let mut acc = self.ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn add(&self, other: &Dense) -> Dense {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero());
            out.push(a.add(&b));
        }
        Dense::new(self.ctx.clone(), out)
    }

    pub fn sub(&self, other: &Dense) -> Dense {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero());
            out.push(a.sub(&b));
        }
        Dense::new(self.ctx.clone(), out)
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        if self.is_zero() || other.is_zero() {
            return Dense::zero(self.ctx.clone());
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Dense::new(self.ctx.clone(), out)
    }

    pub fn scale(&self, c: &Fq) -> Dense {
        Dense::new(
            self.ctx.clone(),
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    pub fn monic(&self) -> Dense {
        assert!(!self.is_zero());
        self.scale(&self.lead().inv())
    }

    /// Quotient and remainder.
    pub fn divrem(&self, div: &Dense) -> (Dense, Dense) {
        assert!(!div.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.coeffs.len() < div.coeffs.len() {
            return (Dense::zero(self.ctx.clone()), self.clone());
        }
        let lead_inv = div.lead().inv();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        let d = div.coeffs.len();
        let mut quot = vec![self.ctx.zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let c = rem[k + d - 1].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k] = c.clone();
            for (i, b) in div.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].sub(&c.mul(b));
            }
        }
        (
            Dense::new(self.ctx.clone(), quot),
            Dense::new(self.ctx.clone(), rem),
        )
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, div: &Dense) -> Dense {
        let (q, r) = self.divrem(div);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn rem(&self, div: &Dense) -> Dense {
        self.divrem(div).1
    }

    /// Monic gcd; gcd(0, b) = monic b.
    pub fn gcd(&self, other: &Dense) -> Dense {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> Dense {
        if self.coeffs.len() <= 1 {
            return Dense::zero(self.ctx.clone());
        }
        let out: Vec<Fq> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.ctx.from_u64(i as u64)))
            .collect();
        Dense::new(self.ctx.clone(), out)
    }

    /// self^e modulo m.
    pub fn powmod(&self, mut e: u128, m: &Dense) -> Dense {
        let mut base = self.rem(m);
        let mut acc = Dense::one(self.ctx.clone()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// x^(q^d) modulo m, by iterating the q-power map (avoids huge exponents).
    pub fn x_qd_mod(&self, d: u32) -> Dense {
        let q = self.ctx.size();
        let mut acc = Dense::x(self.ctx.clone()).rem(self);
        for _ in 0..d {
            acc = acc.powmod(q, self);
        }
        acc
    }

    /// Inverse of a unit modulo m (extended Euclid).
    pub fn invmod(&self, m: &Dense) -> Dense {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Dense::zero(self.ctx.clone()), Dense::one(self.ctx.clone()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
        }
        assert!(r0.is_constant() && !r0.is_zero(), "not invertible");
        s0.scale(&r0.coeffs[0].inv()).rem(m)
    }

    pub fn to_sparse(&self) -> UniPoly {
        UniPoly::from_terms(
            self.ctx.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64, c.clone())),
        )
    }

    pub fn embed(&self, big: &Arc<FqCtx>) -> Dense {
        Dense::new(
            big.clone(),
            self.coeffs
                .iter()
                .map(|c| super::finite::embed(c, big))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let f7 = FqCtx::get(7, 1);
        let a = UniPoly::from_coeffs(f7.clone(), &[3, 0, 1, 5, 2]).to_dense();
        let b = UniPoly::from_coeffs(f7.clone(), &[1, 2, 1]).to_dense();
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_multiples() {
        let f5 = FqCtx::get(5, 1);
        let g = UniPoly::from_coeffs(f5.clone(), &[1, 1]).to_dense(); // t + 1
        let a = g.mul(&UniPoly::from_coeffs(f5.clone(), &[2, 3, 1]).to_dense());
        let b = g.mul(&UniPoly::from_coeffs(f5.clone(), &[4, 1]).to_dense());
        let d = a.gcd(&b);
        assert!(d.rem(&g).is_zero());
    }

    #[test]
    fn laurent_strip_keeps_unit_roots() {
        let f5 = FqCtx::get(5, 1);
        let p = UniPoly::from_terms(
            f5.clone(),
            vec![(-2, f5.from_i64(1)), (0, f5.from_i64(-1))],
        );
        let s = p.strip_monomial();
        assert_eq!(s.min_exp(), Some(0));
        // roots of t^{-2} - 1 in units are the square roots of 1
        let d = s.to_dense();
        assert!(d.evaluate(&f5.from_i64(1)).is_zero());
        assert!(d.evaluate(&f5.from_i64(4)).is_zero());
    }
}
