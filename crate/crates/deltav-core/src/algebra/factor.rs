//! Squarefree parts, distinct-degree factorization, root counting and
//! root extraction over F_q.

use super::finite::{Fq, FqCtx};
use super::unipoly::{Dense, UniPoly};
use crate::error::{Error, Result};
use std::sync::Arc;

/// Squarefree part h / gcd(h, h'), with the char-p fallback: if h' = 0,
/// write h(t) = w(t^p) and recurse on w.
pub fn squarefree_part(h: &Dense) -> Dense {
    assert!(!h.is_zero());
    if h.is_constant() {
        return Dense::one(h.ctx.clone());
    }
    let dh = h.derivative();
    if dh.is_zero() {
        let p = h.ctx.p as usize;
        let mut w = Vec::new();
        for (i, c) in h.coeffs.iter().enumerate() {
            if i % p == 0 {
                w.push(c.clone());
            } else {
                assert!(c.is_zero());
            }
        }
        return squarefree_part(&Dense::new(h.ctx.clone(), w));
    }
    let g = h.gcd(&dh);
    if g.is_constant() {
        return h.monic();
    }
    // h/g misses factors whose multiplicity is divisible by p; they all
    // survive inside g, so recurse and merge
    let sf = h.div_exact(&g);
    let deep = squarefree_part(&g);
    let merged_gcd = sf.gcd(&deep);
    sf.mul(&deep.div_exact(&merged_gcd)).monic()
}

/// Distinct-degree profile of the squarefree part of h: pairs
/// (degree d, number of irreducible factors of degree d), d ascending.
pub fn distinct_degree_factor(h: &UniPoly) -> Result<Vec<(usize, usize)>> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let dense = h.strip_monomial().to_dense();
    if dense.is_constant() {
        return Ok(Vec::new());
    }
    let mut f = squarefree_part(&dense).monic();
    let q = f.ctx.size();
    let mut out = Vec::new();
    let mut power = Dense::x(f.ctx.clone()).rem(&f); // x^(q^0) = x
    let x = Dense::x(f.ctx.clone());
    let mut d = 0usize;
    while !f.is_constant() {
        d += 1;
        if 2 * d > f.degree() {
            // what is left is a single irreducible factor
            out.push((f.degree(), 1));
            break;
        }
        power = power.powmod(q, &f);
        let g = power.sub(&x).gcd(&f);
        if !g.is_constant() {
            assert_eq!(g.degree() % d, 0);
            out.push((d, g.degree() / d));
            f = f.div_exact(&g);
            power = power.rem(&f);
        }
    }
    Ok(out)
}

/// Product polynomials per degree: (d, product of the irreducible factors
/// of degree d of the squarefree part).
pub fn distinct_degree_split(h: &Dense) -> Vec<(usize, Dense)> {
    let mut f = squarefree_part(h).monic();
    let q = f.ctx.size();
    let x = Dense::x(f.ctx.clone());
    let mut power = x.rem(&f);
    let mut out = Vec::new();
    let mut d = 0usize;
    while !f.is_constant() {
        d += 1;
        if 2 * d > f.degree() {
            out.push((f.degree(), f.clone()));
            break;
        }
        power = power.powmod(q, &f);
        let g = power.sub(&x).gcd(&f);
        if !g.is_constant() {
            out.push((d, g.clone()));
            f = f.div_exact(&g);
            power = power.rem(&f);
        }
    }
    out
}

/// Split a squarefree product of degree-d irreducibles into the factors,
/// by a deterministic sweep of Cantor-Zassenhaus splitters.
pub fn equal_degree_factor(f: &Dense, d: usize) -> Vec<Dense> {
    assert!(!f.is_zero());
    let f = f.monic();
    if f.is_constant() {
        return Vec::new();
    }
    if f.degree() == d {
        return vec![f];
    }
    let ctx = f.ctx.clone();
    let q = ctx.size();
    let big_q = q.checked_pow(d as u32).expect("field size overflow");
    if ctx.p == 2 {
        // trace map splitter over F_{2^(m d)}
        let n = ctx.m * d;
        for idx in 1..q * (f.degree() as u128) {
            let c = poly_from_index(&ctx, idx, f.degree());
            // T(c*x) = sum (c x)^(2^i), i < n, reduced mod f
            let mut term = c.rem(&f);
            let mut trace = Dense::zero(ctx.clone());
            for _ in 0..n {
                trace = trace.add(&term);
                term = term.mul(&term).rem(&f);
            }
            let g = trace.gcd(&f);
            if !g.is_constant() && g.degree() < f.degree() {
                let mut out = equal_degree_factor(&g, d);
                out.extend(equal_degree_factor(&f.div_exact(&g), d));
                return out;
            }
        }
        unreachable!("trace splitter must succeed over F_2^n");
    }
    let e = (big_q - 1) / 2;
    for idx in 0..q.pow(2).min(1 << 20) {
        let c = poly_from_index(&ctx, idx, f.degree().max(2));
        let b = c.powmod(e, &f).sub(&Dense::one(ctx.clone()));
        let g = b.gcd(&f);
        if !g.is_constant() && g.degree() < f.degree() {
            let mut out = equal_degree_factor(&g, d);
            out.extend(equal_degree_factor(&f.div_exact(&g), d));
            return out;
        }
    }
    unreachable!("quadratic-residue splitter must succeed");
}

/// Deterministic sequence of low-degree polynomials indexed by a counter,
/// used as splitter candidates.
fn poly_from_index(ctx: &Arc<FqCtx>, idx: u128, max_deg: usize) -> Dense {
    let q = ctx.size();
    let mut coeffs = Vec::new();
    let mut c = idx;
    for _ in 0..=max_deg {
        coeffs.push(ctx.element(c % q));
        c /= q;
        if c == 0 {
            break;
        }
    }
    // ensure non-constant enough candidates appear early
    if coeffs.len() == 1 {
        coeffs.insert(0, ctx.zero());
    }
    Dense::new(ctx.clone(), coeffs)
}

/// Full factorization into monic irreducibles (with multiplicity 1 each;
/// input is made squarefree first). Returns factors sorted by (degree,
/// coefficient encoding).
pub fn irreducible_factors_of_squarefree_part(h: &Dense) -> Vec<Dense> {
    let mut out = Vec::new();
    for (d, prod) in distinct_degree_split(h) {
        out.extend(equal_degree_factor(&prod, d));
    }
    out.sort_by_key(|f| {
        let enc: Vec<u128> = f.coeffs.iter().map(|c| c.index()).collect();
        (f.degree(), enc)
    });
    out
}

/// All roots of h inside its own coefficient field.
pub fn roots_in_field(h: &Dense) -> Vec<Fq> {
    if h.is_zero() || h.is_constant() {
        return Vec::new();
    }
    let ctx = h.ctx.clone();
    let q = ctx.size();
    // split off the product of linear factors: gcd(h, x^q - x)
    let xq = h.x_qd_mod(1);
    let lin = xq.sub(&Dense::x(ctx.clone())).gcd(&squarefree_part(h));
    if lin.is_constant() {
        return Vec::new();
    }
    let mut roots: Vec<Fq> = equal_degree_factor(&lin, 1)
        .into_iter()
        .map(|f| {
            assert_eq!(f.degree(), 1);
            f.coeffs[0].neg().mul(&f.coeffs[1].inv())
        })
        .collect();
    let _ = q;
    roots.sort_by_key(|r| r.index());
    roots
}

/// Count of distinct roots of h in the units of F_{q^d}, via the
/// exponent-ladder gcd with x^(q^d - 1) - 1. Always available.
pub fn count_roots_in_units(h: &UniPoly, d: u32) -> Result<usize> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let dense = h.strip_monomial().to_dense();
    if dense.is_constant() {
        return Ok(0);
    }
    let f = squarefree_part(&dense);
    if f.is_constant() {
        return Ok(0);
    }
    // x is invertible modulo f because f(0) != 0 after stripping
    let xqd = f.x_qd_mod(d);
    let xinv = Dense::x(f.ctx.clone()).invmod(&f);
    let ladder = xqd.mul(&xinv).rem(&f).sub(&Dense::one(f.ctx.clone()));
    let g = ladder.gcd(&f);
    Ok(if g.is_constant() { 0 } else { g.degree() })
}

/// Brute-force cross-check of `count_roots_in_units`, restricted by the
/// enumeration budget (in field elements).
pub fn count_roots_in_units_brute(h: &UniPoly, d: u32, budget: u128) -> Result<usize> {
    let ctx = &h.ctx;
    let ext = FqCtx::get(ctx.p, ctx.m * d as usize);
    let size = ext.size();
    if size > budget {
        return Err(Error::BudgetExceeded {
            needed: size,
            cap: budget,
        });
    }
    let he = h.strip_monomial().embed(&ext);
    let hd = he.to_dense();
    let mut count = 0;
    for idx in 1..size {
        let x = ext.element(idx);
        if hd.evaluate(&x).is_zero() {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ctx: &Arc<FqCtx>, coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(ctx.clone(), coeffs)
    }

    #[test]
    fn ddf_frozen_examples() {
        // t^2 + 1 over F_3 is irreducible (exhaustive root search over F_3
        // and F_9 finds no F_3-roots and two F_9-roots)
        let f3 = FqCtx::get(3, 1);
        let h = poly(&f3, &[1, 0, 1]);
        assert_eq!(distinct_degree_factor(&h).unwrap(), vec![(2, 1)]);
        assert_eq!(count_roots_in_units(&h, 1).unwrap(), 0);
        assert_eq!(count_roots_in_units(&h, 2).unwrap(), 2);
        assert_eq!(count_roots_in_units_brute(&h, 2, 1 << 20).unwrap(), 2);

        // t - 1 over F_5
        let f5 = FqCtx::get(5, 1);
        let h = poly(&f5, &[-1, 1]);
        assert_eq!(distinct_degree_factor(&h).unwrap(), vec![(1, 1)]);

        // (t-1)^2 (t-2) over F_7: squarefree part has two linear factors
        let f7 = FqCtx::get(7, 1);
        let h = poly(&f7, &[1, -2, 1]).to_dense(); // (t-1)^2
        let g = poly(&f7, &[-2, 1]).to_dense();
        let prod = h.mul(&g).to_sparse();
        assert_eq!(distinct_degree_factor(&prod).unwrap(), vec![(1, 2)]);
    }

    #[test]
    fn roots_counts_frozen() {
        let f5 = FqCtx::get(5, 1);
        assert_eq!(count_roots_in_units(&poly(&f5, &[1, 1]), 1).unwrap(), 1);
        let f7 = FqCtx::get(7, 1);
        // t^3 - 1 over F_7: 7 = 1 mod 3, three cube roots of unity
        assert_eq!(count_roots_in_units(&poly(&f7, &[-1, 0, 0, 1]), 1).unwrap(), 3);
        assert_eq!(
            count_roots_in_units_brute(&poly(&f7, &[-1, 0, 0, 1]), 1, 100).unwrap(),
            3
        );
    }

    #[test]
    fn ddf_sum_matches_squarefree_degree() {
        let f3 = FqCtx::get(3, 1);
        // deterministic sweep over a family of polynomials
        for code in 1..200u64 {
            let coeffs: Vec<i64> = (0..5).map(|i| ((code >> (2 * i)) & 3) as i64).collect();
            let h = poly(&f3, &coeffs);
            if h.is_zero() || h.strip_monomial().to_dense().is_constant() {
                continue;
            }
            let dd = distinct_degree_factor(&h).unwrap();
            let total: usize = dd.iter().map(|(d, c)| d * c).sum();
            let sf = squarefree_part(&h.strip_monomial().to_dense());
            assert_eq!(total, sf.degree());
        }
    }

    #[test]
    fn ladder_count_equals_brute_force() {
        let f3 = FqCtx::get(3, 1);
        for code in 1..120u64 {
            let coeffs: Vec<i64> = (0..4).map(|i| ((code >> (2 * i)) & 3) as i64).collect();
            let h = poly(&f3, &coeffs);
            if h.is_zero() || h.strip_monomial().to_dense().is_constant() {
                continue;
            }
            for d in 1..=2u32 {
                let a = count_roots_in_units(&h, d).unwrap();
                let b = count_roots_in_units_brute(&h, d, 1 << 16).unwrap();
                assert_eq!(a, b, "poly {h:?} d={d}");
            }
        }
    }

    #[test]
    fn root_extraction_finds_all_roots() {
        let f7 = FqCtx::get(7, 1);
        let h = poly(&f7, &[-1, 0, 0, 1]).to_dense(); // t^3 = 1
        let roots = roots_in_field(&h);
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(h.evaluate(r).is_zero());
        }
        // a power: (t-1)^2 over F_2 via char-2 path
        let f2 = FqCtx::get(2, 1);
        let h = poly(&f2, &[1, 0, 1]).to_dense(); // t^2+1 = (t+1)^2
        let roots = roots_in_field(&h);
        assert_eq!(roots.len(), 1);
        // roots over an extension: t^2+t+1 splits in F_4
        let f4 = FqCtx::get(2, 2);
        let h = poly(&f2, &[1, 1, 1]).embed(&f4).to_dense();
        assert_eq!(roots_in_field(&h).len(), 2);
    }
}
