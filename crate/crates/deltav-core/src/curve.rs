//! Valued polynomial input: f = sum a_ij x^i y^j together with the
//! coefficient valuations and residue-field data.

use crate::algebra::{embed, Fq, FqCtx};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A coefficient: an exact rational, or its (valuation, leading unit)
/// truncation. Everything downstream of the elliptic shift loop only
/// consumes the truncated data.
#[derive(Clone, Debug)]
pub enum Coeff {
    Exact(BigRational),
    Trunc { val: i64, unit: Fq },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Truncated,
}

#[derive(Clone, Debug)]
pub struct VPolynomial {
    pub p: u64,
    /// Residue field F_{p^e}.
    pub field: Arc<FqCtx>,
    support: BTreeMap<(i64, i64), Coeff>,
}

/// p-adic valuation of a nonzero rational (denominator may carry p).
pub fn rational_valuation(p: u64, a: &BigRational) -> i64 {
    assert!(!a.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut num = a.numer().abs();
    while (&num % &pb).is_zero() {
        num /= &pb;
        v += 1;
    }
    let mut den = a.denom().abs();
    while (&den % &pb).is_zero() {
        den /= &pb;
        v -= 1;
    }
    v
}

/// Leading unit of a nonzero rational: (a / p^v) mod p.
pub fn rational_unit(p: u64, a: &BigRational, field: &Arc<FqCtx>) -> Fq {
    let v = rational_valuation(p, a);
    let pb = BigInt::from(p);
    let mut num = a.numer().clone();
    let mut den = a.denom().clone();
    if v >= 0 {
        for _ in 0..v {
            num /= &pb;
        }
    } else {
        for _ in 0..(-v) {
            den /= &pb;
        }
    }
    let nm = ((num % &pb) + &pb) % &pb;
    let dm = ((den % &pb) + &pb) % &pb;
    let n: u64 = nm.try_into().unwrap();
    let d: u64 = dm.try_into().unwrap();
    let fp = FqCtx::get(p, 1);
    let u = fp.from_u64(n).mul(&fp.from_u64(d).inv());
    embed(&u, field)
}

impl VPolynomial {
    /// Ingest an exact rational polynomial at a prime p. Coefficient
    /// denominators must be prime to p, and the support must have at
    /// least two monomials.
    pub fn from_rational_poly(terms: &[((i64, i64), BigRational)], p: u64) -> Result<Self> {
        let field = FqCtx::get(p, 1);
        let pb = BigInt::from(p);
        let mut support = BTreeMap::new();
        for ((i, j), a) in terms {
            if a.is_zero() {
                continue;
            }
            assert!(*i >= 0 && *j >= 0, "exponents must be non-negative");
            if (a.denom().abs() % &pb).is_zero() {
                return Err(Error::BadDenominator(*i, *j));
            }
            support.insert((*i, *j), Coeff::Exact(a.clone()));
        }
        if support.len() <= 1 {
            return Err(Error::NotACurve);
        }
        Ok(VPolynomial { p, field, support })
    }

    /// Build directly from truncated data.
    pub fn from_truncated(
        p: u64,
        field: Arc<FqCtx>,
        terms: impl IntoIterator<Item = ((i64, i64), i64, Fq)>,
    ) -> Result<Self> {
        let mut support = BTreeMap::new();
        for ((i, j), val, unit) in terms {
            assert!(!unit.is_zero(), "truncated units must be nonzero");
            support.insert((i, j), Coeff::Trunc { val, unit });
        }
        if support.len() <= 1 {
            return Err(Error::NotACurve);
        }
        Ok(VPolynomial { p, field, support })
    }

    pub fn mode(&self) -> Mode {
        if self.support.values().all(|c| matches!(c, Coeff::Exact(_))) {
            Mode::Exact
        } else {
            Mode::Truncated
        }
    }

    pub fn support_points(&self) -> Vec<(i64, i64)> {
        self.support.keys().copied().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Coeff)> {
        self.support.iter()
    }

    pub fn coeff(&self, pt: (i64, i64)) -> Option<&Coeff> {
        self.support.get(&pt)
    }

    /// Valuation of the coefficient at a support point.
    pub fn valuation(&self, pt: (i64, i64)) -> i64 {
        match &self.support[&pt] {
            Coeff::Exact(a) => rational_valuation(self.p, a),
            Coeff::Trunc { val, .. } => *val,
        }
    }

    /// Leading unit of the coefficient at a support point, in the
    /// residue field.
    pub fn unit(&self, pt: (i64, i64)) -> Fq {
        match &self.support[&pt] {
            Coeff::Exact(a) => rational_unit(self.p, a, &self.field),
            Coeff::Trunc { unit, .. } => unit.clone(),
        }
    }

    /// Valuation profile (i, j) -> v(a_ij).
    pub fn profile(&self) -> BTreeMap<(i64, i64), i64> {
        self.support
            .keys()
            .map(|&pt| (pt, self.valuation(pt)))
            .collect()
    }

    /// Truncated view: every coefficient reduced to (valuation, unit).
    pub fn truncate(&self) -> VPolynomial {
        let terms: Vec<((i64, i64), i64, Fq)> = self
            .support
            .keys()
            .map(|&pt| (pt, self.valuation(pt), self.unit(pt)))
            .collect();
        VPolynomial::from_truncated(self.p, self.field.clone(), terms).expect("same support")
    }

    /// Tame base change: ramification degree e_ram (prime to p) and
    /// residue extension degree f_res. Valuations multiply by e_ram and
    /// the residue field grows to F_{q^f_res}.
    pub fn base_change(&self, e_ram: u64, f_res: u64) -> Result<VPolynomial> {
        assert!(e_ram >= 1 && f_res >= 1);
        if e_ram % self.p == 0 {
            return Err(Error::WildExtension(e_ram));
        }
        let new_field = FqCtx::get(self.p, self.field.m * f_res as usize);
        let terms: Vec<((i64, i64), i64, Fq)> = self
            .support
            .keys()
            .map(|&pt| {
                (
                    pt,
                    self.valuation(pt) * e_ram as i64,
                    embed(&self.unit(pt), &new_field),
                )
            })
            .collect();
        VPolynomial::from_truncated(self.p, new_field, terms)
    }
}

/// Convenience constructor used throughout the tests.
pub fn vpoly_from_integer_terms(terms: &[((i64, i64), i64)], p: u64) -> Result<VPolynomial> {
    let rational: Vec<((i64, i64), BigRational)> = terms
        .iter()
        .map(|&(e, c)| (e, BigRational::from(BigInt::from(c))))
        .collect();
    VPolynomial::from_rational_poly(&rational, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn valuation_read_off() {
        // y^2 - x^3 - 7 at p = 7
        let vp = vpoly_from_integer_terms(&[((0, 2), 1), ((3, 0), -1), ((0, 0), -7)], 7).unwrap();
        assert_eq!(vp.valuation((0, 2)), 0);
        assert_eq!(vp.valuation((3, 0)), 0);
        assert_eq!(vp.valuation((0, 0)), 1);
        assert!(vp.unit((0, 2)).is_one());
        assert_eq!(vp.unit((0, 0)), vp.field.from_i64(-1));
    }

    #[test]
    fn intro_curve_valuations() {
        // y^2 + 7 x^3 y + x^3 + 7^5 at p = 7
        let vp = vpoly_from_integer_terms(
            &[((0, 2), 1), ((3, 1), 7), ((3, 0), 1), ((0, 0), 16807)],
            7,
        )
        .unwrap();
        assert_eq!(vp.valuation((0, 2)), 0);
        assert_eq!(vp.valuation((3, 1)), 1);
        assert_eq!(vp.valuation((3, 0)), 0);
        assert_eq!(vp.valuation((0, 0)), 5);
    }

    #[test]
    fn monomial_is_not_a_curve() {
        assert!(matches!(
            vpoly_from_integer_terms(&[((1, 2), 9)], 3),
            Err(Error::NotACurve)
        ));
    }

    #[test]
    fn bad_denominator_rejected() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(7));
        let terms = vec![((0i64, 1i64), half), ((1, 0), BigRational::one())];
        assert!(matches!(
            VPolynomial::from_rational_poly(&terms, 7),
            Err(Error::BadDenominator(0, 1))
        ));
    }

    #[test]
    fn truncated_round_trip() {
        let vp = vpoly_from_integer_terms(
            &[((0, 2), 1), ((3, 1), 7), ((3, 0), 1), ((0, 0), 16807)],
            7,
        )
        .unwrap();
        let tv = vp.truncate();
        assert_eq!(tv.mode(), Mode::Truncated);
        for pt in vp.support_points() {
            assert_eq!(vp.valuation(pt), tv.valuation(pt));
            assert_eq!(vp.unit(pt), tv.unit(pt));
        }
    }

    #[test]
    fn base_change_is_multiplicative() {
        let vp = vpoly_from_integer_terms(&[((0, 2), 1), ((3, 0), -1), ((0, 0), -7)], 7).unwrap();
        let a = vp.base_change(2, 1).unwrap().base_change(3, 1).unwrap();
        let b = vp.base_change(6, 1).unwrap();
        for pt in vp.support_points() {
            assert_eq!(a.valuation(pt), b.valuation(pt));
            assert_eq!(a.unit(pt), b.unit(pt));
        }
        assert!(matches!(vp.base_change(7, 1), Err(Error::WildExtension(7))));
        let c = vp.base_change(1, 1).unwrap();
        for pt in vp.support_points() {
            assert_eq!(c.valuation(pt), vp.valuation(pt));
        }
    }
}
