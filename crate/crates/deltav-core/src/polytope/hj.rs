//! Determinant-one fraction chains between two slopes: the Farey list of
//! bounded denominator followed by exhaustive mediant removal. The
//! removal criterion is det-1 of the neighbours, which characterizes the
//! middle entry being their exact mediant.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// A fraction n/d in lowest terms with d >= 0; d = 0 only for the outer
/// chart sentinel, never inside a chain.
pub type Frac = (i64, i64);

fn det(a: Frac, b: Frac) -> i64 {
    a.0 * b.1 - b.0 * a.1
}

pub fn frac_of_rational(r: &BigRational) -> Frac {
    let n = r.numer().to_i64().expect("slope numerator fits in i64");
    let d = r.denom().to_i64().expect("slope denominator fits in i64");
    assert!(d > 0);
    (n, d)
}

pub fn rational_of_frac(f: Frac) -> BigRational {
    BigRational::new(BigInt::from(f.0), BigInt::from(f.1))
}

fn floor_rational(r: &BigRational) -> i64 {
    r.floor().numer().to_i64().expect("floor fits in i64")
}

/// Full Farey list between s2 <= s1 with denominators bounded by
/// max(den s1, den s2): every reduced fraction in range, decreasing.
fn farey_list(s1: Frac, s2: Frac, max_farey: usize) -> Result<Vec<Frac>> {
    let dmax = s1.1.max(s2.1);
    let mut out: Vec<Frac> = Vec::new();
    for d in 1..=dmax {
        // n/d in [s2, s1]: n from ceil(s2*d) to floor(s1*d)
        let lo = div_ceil(s2.0 * d, s2.1);
        let hi = div_floor(s1.0 * d, s1.1);
        for n in lo..=hi {
            if crate::polytope::geom::gcd_i64(n, d) == 1 {
                out.push((n, d));
                if out.len() > max_farey {
                    return Err(Error::BudgetExceeded {
                        needed: out.len() as u128,
                        cap: max_farey as u128,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| (b.0 * a.1).cmp(&(a.0 * b.1))); // decreasing
    Ok(out)
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// The chain s1 = n_0/d_0 > ... > n_{r+1}/d_{r+1} = s2 with consecutive
/// determinants 1. With `minimal` set, interior mediants are removed until
/// no triple admits removal; the result is then the unique minimal chain.
/// The chain only depends on (s1, s2) up to simultaneous integer shift,
/// and shifting both endpoints by n shifts every entry by n.
pub fn hj_chain(
    s1: &BigRational,
    s2: &BigRational,
    minimal: bool,
    max_farey: usize,
) -> Result<Vec<Frac>> {
    if s1 <= s2 {
        return Err(Error::InvalidInterval);
    }
    // normalize by an integer shift so the right endpoint sits in [0, 1);
    // this realizes shift invariance exactly
    let shift = floor_rational(s2);
    let sh = BigRational::from(BigInt::from(shift));
    let t1 = s1 - &sh;
    let t2 = s2 - &sh;
    let f1 = frac_of_rational(&t1);
    let f2 = frac_of_rational(&t2);
    let mut chain = farey_list(f1, f2, max_farey)?;
    assert_eq!(chain.first(), Some(&f1));
    assert_eq!(chain.last(), Some(&f2));
    for w in chain.windows(2) {
        assert_eq!(det(w[0], w[1]), 1, "Farey neighbours have determinant 1");
    }
    if minimal {
        loop {
            let mut removed = false;
            let mut k = 1;
            while k + 1 < chain.len() {
                if det(chain[k - 1], chain[k + 1]) == 1 {
                    chain.remove(k);
                    removed = true;
                } else {
                    k += 1;
                }
            }
            if !removed {
                break;
            }
        }
    }
    // undo the shift
    Ok(chain
        .into_iter()
        .map(|(n, d)| (n + shift * d, d))
        .collect())
}

/// Independent minimality oracle: no interior entry may be removed.
pub fn is_minimal_chain(chain: &[Frac]) -> bool {
    chain
        .windows(3)
        .all(|w| det(w[0], w[2]) != 1)
}

/// Consecutive determinant check.
pub fn chain_determinants_ok(chain: &[Frac]) -> bool {
    chain.windows(2).all(|w| det(w[0], w[1]) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn fermat_chart_interior_is_empty() {
        // determinant of (7/12, 4/7) is already 1
        let c = hj_chain(&q(7, 12), &q(4, 7), true, 100_000).unwrap();
        assert_eq!(c, vec![(7, 12), (4, 7)]);
    }

    #[test]
    fn adjacent_integers() {
        let c = hj_chain(&q(1, 1), &q(0, 1), true, 100_000).unwrap();
        assert_eq!(c, vec![(1, 1), (0, 1)]);
    }

    #[test]
    fn half_to_minus_half() {
        let c = hj_chain(&q(1, 2), &q(-1, 2), true, 100_000).unwrap();
        assert_eq!(c, vec![(1, 2), (0, 1), (-1, 2)]);
    }

    #[test]
    fn intro_inner_edge_chain() {
        // 5/6 down to -1/3: minimal chain descends through the integers
        let c = hj_chain(&q(5, 6), &q(-1, 3), true, 100_000).unwrap();
        assert_eq!(
            c,
            vec![(5, 6), (4, 5), (3, 4), (2, 3), (1, 2), (0, 1), (-1, 3)]
        );
        assert!(chain_determinants_ok(&c));
        assert!(is_minimal_chain(&c));
    }

    #[test]
    fn shift_invariance() {
        for shift in [-3i64, -1, 0, 2, 5] {
            let base = hj_chain(&q(5, 6), &q(-1, 3), true, 100_000).unwrap();
            let moved = hj_chain(
                &(q(5, 6) + q(shift, 1)),
                &(q(-1, 3) + q(shift, 1)),
                true,
                100_000,
            )
            .unwrap();
            let expected: Vec<Frac> = base.iter().map(|&(n, d)| (n + shift * d, d)).collect();
            assert_eq!(moved, expected);
        }
    }

    #[test]
    fn invalid_interval() {
        assert!(matches!(
            hj_chain(&q(0, 1), &q(1, 1), true, 100_000),
            Err(Error::InvalidInterval)
        ));
    }
}
