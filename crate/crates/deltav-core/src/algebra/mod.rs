//! Exact rationals, finite fields and sparse polynomial arithmetic.

pub mod bipoly;
pub mod factor;
pub mod finite;
pub mod unipoly;

pub use bipoly::BiPoly;
pub use factor::{count_roots_in_units, count_roots_in_units_brute, distinct_degree_factor};
pub use finite::{embed, Fq, FqCtx};
pub use unipoly::{Dense, UniPoly};

use crate::error::{Error, Result};

/// Exact count of zeros of g in the torus (F_{q^d}^x)^2, by iterating over
/// x and counting unit roots of each specialization with the gcd ladder.
pub fn count_affine_torus_points(g: &BiPoly, d: u32, budget: u128) -> Result<u128> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ctx = &g.ctx;
    let ext = FqCtx::get(ctx.p, ctx.m * d as usize);
    let size = ext.size();
    if size > budget {
        return Err(Error::BudgetExceeded {
            needed: size,
            cap: budget,
        });
    }
    let ge = g.strip_monomials().embed(&ext);
    let mut total: u128 = 0;
    for idx in 1..size {
        let x = ext.element(idx);
        let hy = ge.specialize_x(&x);
        if hy.is_zero() {
            // the whole line x = x0 lies on the curve
            total += size - 1;
            continue;
        }
        total += count_roots_in_units(&hy, 1)? as u128;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_counts_frozen() {
        let f7 = FqCtx::get(7, 1);
        // y^2 - x^3 - 1 over F_7: projective count 12, torus count 6
        let g = BiPoly::from_integer_terms(f7.clone(), &[((0, 2), 1), ((3, 0), -1), ((0, 0), -1)]);
        assert_eq!(count_affine_torus_points(&g, 1, 1 << 20).unwrap(), 6);

        // x + y over F_3: pairs (1,2), (2,1)
        let f3 = FqCtx::get(3, 1);
        let g = BiPoly::from_integer_terms(f3.clone(), &[((1, 0), 1), ((0, 1), 1)]);
        assert_eq!(count_affine_torus_points(&g, 1, 1 << 20).unwrap(), 2);

        // y^2 - x^3 - x over F_7: affine count 7, of which torus 6
        let g = BiPoly::from_integer_terms(f7.clone(), &[((0, 2), 1), ((3, 0), -1), ((1, 0), -1)]);
        assert_eq!(count_affine_torus_points(&g, 1, 1 << 20).unwrap(), 6);
    }

    #[test]
    fn budget_is_enforced() {
        let f7 = FqCtx::get(7, 1);
        let g = BiPoly::from_integer_terms(f7.clone(), &[((1, 0), 1), ((0, 1), 1)]);
        assert!(matches!(
            count_affine_torus_points(&g, 8, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
