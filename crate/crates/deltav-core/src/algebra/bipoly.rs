//! Sparse bivariate Laurent polynomials over F_q, with the exact
//! smoothness decision for curves in the two-dimensional torus.
//!
//! The singular-locus decision uses resultants and gcds only, so it always
//! completes; enumeration appears just in witness extraction, where the
//! extension degrees are bounded by resultant factor degrees.

use super::factor::{irreducible_factors_of_squarefree_part, roots_in_field};
use super::finite::{embed, Fq, FqCtx};
use super::unipoly::{Dense, UniPoly};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    pub ctx: Arc<FqCtx>,
    terms: BTreeMap<(i64, i64), Fq>,
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})x^{i}y^{j}")?;
        }
        Ok(())
    }
}

impl BiPoly {
    pub fn zero(ctx: Arc<FqCtx>) -> Self {
        BiPoly {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(ctx: Arc<FqCtx>, terms: impl IntoIterator<Item = ((i64, i64), Fq)>) -> Self {
        let mut map: BTreeMap<(i64, i64), Fq> = BTreeMap::new();
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
        BiPoly { ctx, terms: map }
    }

    pub fn from_integer_terms(ctx: Arc<FqCtx>, terms: &[((i64, i64), i64)]) -> Self {
        let list: Vec<((i64, i64), Fq)> = terms
            .iter()
            .map(|&(e, c)| (e, ctx.from_i64(c)))
            .collect();
        Self::from_terms(ctx, list)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Fq)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<(i64, i64)> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, e: (i64, i64)) -> Fq {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(|| self.ctx.zero());
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        BiPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out: BTreeMap<(i64, i64), Fq> = BTreeMap::new();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                let e = (i1 + i2, j1 + j2);
                let prod = c1.mul(c2);
                let entry = out.entry(e).or_insert_with(|| self.ctx.zero());
                *entry = entry.add(&prod);
                if entry.is_zero() {
                    out.remove(&e);
                }
            }
        }
        BiPoly {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    /// Shift exponents so both minimal exponents become 0.
    pub fn strip_monomials(&self) -> BiPoly {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mini = self.terms.keys().map(|(i, _)| *i).min().unwrap();
        let minj = self.terms.keys().map(|(_, j)| *j).min().unwrap();
        BiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((i - mini, j - minj), c.clone()))
                .collect(),
        }
    }

    pub fn embed(&self, big: &Arc<FqCtx>) -> BiPoly {
        BiPoly {
            ctx: big.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, embed(c, big)))
                .collect(),
        }
    }

    pub fn derivative_x(&self) -> BiPoly {
        let terms: Vec<((i64, i64), Fq)> = self
            .terms
            .iter()
            .filter(|((i, _), _)| *i != 0)
            .map(|((i, j), c)| ((*i - 1, *j), c.mul(&self.ctx.from_i64(*i))))
            .collect();
        BiPoly::from_terms(self.ctx.clone(), terms)
    }

    pub fn derivative_y(&self) -> BiPoly {
        let terms: Vec<((i64, i64), Fq)> = self
            .terms
            .iter()
            .filter(|((_, j), _)| *j != 0)
            .map(|((i, j), c)| ((*i, *j - 1), c.mul(&self.ctx.from_i64(*j))))
            .collect();
        BiPoly::from_terms(self.ctx.clone(), terms)
    }

    /// Substitute a unit for x; the result is a univariate polynomial in y.
    pub fn specialize_x(&self, x0: &Fq) -> UniPoly {
        assert!(!x0.is_zero());
        let terms: Vec<(i64, Fq)> = self
            .terms
            .iter()
            .map(|((i, j), c)| {
                let xe = if *i >= 0 {
                    x0.pow(*i as u128)
                } else {
                    x0.inv().pow((-*i) as u128)
                };
                (*j, c.mul(&xe))
            })
            .collect();
        UniPoly::from_terms(self.ctx.clone(), terms)
    }

    pub fn specialize_y(&self, y0: &Fq) -> UniPoly {
        assert!(!y0.is_zero());
        let terms: Vec<(i64, Fq)> = self
            .terms
            .iter()
            .map(|((i, j), c)| {
                let ye = if *j >= 0 {
                    y0.pow(*j as u128)
                } else {
                    y0.inv().pow((-*j) as u128)
                };
                (*i, c.mul(&ye))
            })
            .collect();
        UniPoly::from_terms(self.ctx.clone(), terms)
    }

    pub fn evaluate(&self, x0: &Fq, y0: &Fq) -> Fq {
        self.specialize_x(x0).evaluate_laurent(y0)
    }

    /// Exponent transform e -> e * U for unimodular U (row-vector action).
    pub fn apply_unimodular(&self, u: [[i64; 2]; 2]) -> BiPoly {
        assert_eq!((u[0][0] * u[1][1] - u[0][1] * u[1][0]).abs(), 1);
        BiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| {
                    (
                        (i * u[0][0] + j * u[1][0], i * u[0][1] + j * u[1][1]),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// View as a polynomial in y with coefficients in F_q[x].
    /// Requires non-negative exponents (strip first).
    pub fn y_coeffs(&self) -> Vec<Dense> {
        assert!(self
            .terms
            .keys()
            .all(|&(i, j)| i >= 0 && j >= 0));
        let degy = self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0) as usize;
        let degx = self.terms.keys().map(|(i, _)| *i).max().unwrap_or(0) as usize;
        let mut rows = vec![vec![self.ctx.zero(); degx + 1]; degy + 1];
        for ((i, j), c) in &self.terms {
            rows[*j as usize][*i as usize] = c.clone();
        }
        rows.into_iter()
            .map(|r| Dense::new(self.ctx.clone(), r))
            .collect()
    }

    pub fn from_y_coeffs(ctx: Arc<FqCtx>, rows: &[Dense]) -> BiPoly {
        let mut terms = Vec::new();
        for (j, row) in rows.iter().enumerate() {
            for (i, c) in row.coeffs.iter().enumerate() {
                terms.push(((i as i64, j as i64), c.clone()));
            }
        }
        BiPoly::from_terms(ctx, terms)
    }

    /// Swap the two variables.
    pub fn swap_xy(&self) -> BiPoly {
        BiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((*j, *i), c.clone()))
                .collect(),
        }
    }
}

impl UniPoly {
    /// Evaluation allowing negative exponents (x0 a unit).
    pub fn evaluate_laurent(&self, x0: &Fq) -> Fq {
        let mut acc = self.ctx.zero();
        for (e, c) in self.terms() {
            let xe = if *e >= 0 {
                x0.pow(*e as u128)
            } else {
                x0.inv().pow((-*e) as u128)
            };
            acc = acc.add(&c.mul(&xe));
        }
        acc
    }
}

/// Content (gcd of the y-coefficients, in F_q[x]).
fn content_y(rows: &[Dense], ctx: &Arc<FqCtx>) -> Dense {
    let mut g = Dense::zero(ctx.clone());
    for r in rows {
        if !r.is_zero() {
            g = if g.is_zero() { r.monic() } else { g.gcd(r) };
        }
    }
    g
}

fn divide_rows(rows: &[Dense], d: &Dense) -> Vec<Dense> {
    rows.iter()
        .map(|r| {
            if r.is_zero() {
                r.clone()
            } else {
                r.div_exact(d)
            }
        })
        .collect()
}

/// Bivariate gcd via content / primitive-part pseudo-remainder sequence.
pub fn bivariate_gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let ctx = a.ctx.clone();
    let a = a.strip_monomials();
    let b = b.strip_monomials();
    let ra = a.y_coeffs();
    let rb = b.y_coeffs();
    let ca = content_y(&ra, &ctx);
    let cb = content_y(&rb, &ctx);
    let cont = ca.gcd(&cb);
    let mut pa = divide_rows(&ra, &ca);
    let mut pb = divide_rows(&rb, &cb);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        if pb.iter().all(|r| r.is_zero()) {
            break;
        }
        let mut r = pseudo_rem(&pa, &pb, &ctx);
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
        pa = pb;
        if r.is_empty() {
            break;
        }
        let c = content_y(&r, &ctx);
        pb = divide_rows(&r, &c);
        if pa.len() < pb.len() {
            std::mem::swap(&mut pa, &mut pb);
        }
    }
    // primitive gcd is pa, total gcd = cont * pa
    let gy = BiPoly::from_y_coeffs(ctx.clone(), &pa);
    let gx = BiPoly::from_y_coeffs(ctx.clone(), std::slice::from_ref(&cont));
    gy.mul(&gx)
}

/// Pseudo-remainder of a by b as polynomials in y over F_q[x].
fn pseudo_rem(a: &[Dense], b: &[Dense], ctx: &Arc<FqCtx>) -> Vec<Dense> {
    let mut r: Vec<Dense> = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    assert!(!lead.is_zero());
    loop {
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
        if r.len() <= db {
            break;
        }
        let dr = r.len() - 1;
        let top = r[dr].clone();
        // r = lead * r - top * y^(dr-db) * b
        for c in r.iter_mut() {
            *c = c.mul(&lead);
        }
        for (i, bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = r[idx].sub(&top.mul(bc));
        }
    }
    while r.len() < a.len() {
        r.push(Dense::zero(ctx.clone()));
    }
    r
}

/// Resultant with respect to y, an element of F_q[x], via fraction-free
/// Bareiss elimination on the Sylvester matrix.
pub fn resultant_y(a: &BiPoly, b: &BiPoly) -> Dense {
    let ctx = a.ctx.clone();
    let ra = a.strip_monomials().y_coeffs();
    let rb = b.strip_monomials().y_coeffs();
    let n = ra.len() - 1;
    let m = rb.len() - 1;
    if n == 0 && m == 0 {
        return Dense::one(ctx);
    }
    if n == 0 {
        // Res(a, b) with deg_y a = 0 is a^m
        let mut acc = Dense::one(ctx);
        for _ in 0..m {
            acc = acc.mul(&ra[0]);
        }
        return acc;
    }
    if m == 0 {
        let mut acc = Dense::one(ctx);
        for _ in 0..n {
            acc = acc.mul(&rb[0]);
        }
        return acc;
    }
    let dim = n + m;
    let mut mat: Vec<Vec<Dense>> = vec![vec![Dense::zero(ctx.clone()); dim]; dim];
    for r in 0..m {
        for (k, c) in ra.iter().enumerate() {
            mat[r][r + n - k] = c.clone();
        }
    }
    for r in 0..n {
        for (k, c) in rb.iter().enumerate() {
            mat[m + r][r + m - k] = c.clone();
        }
    }
    bareiss_det(mat, &ctx)
}

/// Fraction-free determinant over F_q[x].
fn bareiss_det(mut m: Vec<Vec<Dense>>, ctx: &Arc<FqCtx>) -> Dense {
    let n = m.len();
    let mut sign_flip = false;
    let mut prev = Dense::one(ctx.clone());
    for k in 0..n {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Dense::zero(ctx.clone()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev);
            }
            m[i][k] = Dense::zero(ctx.clone());
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.scale(&ctx.from_i64(-1))
    } else {
        det
    }
}

/// A singular point of a torus curve, living in some finite extension.
#[derive(Clone, Debug)]
pub struct SingularWitness {
    pub field: Arc<FqCtx>,
    pub x: Fq,
    pub y: Fq,
}

impl SingularWitness {
    pub fn describe(&self) -> String {
        format!(
            "(x, y) = ({}, {}) over F_{}^{}",
            self.x, self.y, self.field.p, self.field.m
        )
    }
}

/// Decide whether V(f, f_x, f_y) meets the torus over the algebraic
/// closure. The decision itself is resultant/gcd based and always
/// completes; a witness point is extracted when one exists.
pub fn torus_singular_point(f: &BiPoly) -> Option<SingularWitness> {
    let f = f.strip_monomials();
    if f.num_terms() <= 1 {
        // unit or monomial: the scheme is empty in the torus
        return None;
    }
    let only_x = f.terms().all(|(&(_, j), _)| j == 0);
    let only_y = f.terms().all(|(&(i, _), _)| i == 0);
    if only_x || only_y {
        let g = if only_x {
            f.specialize_y(&f.ctx.one())
        } else {
            f.specialize_x(&f.ctx.one())
        };
        let d = g.strip_monomial().to_dense();
        let crit = d.gcd(&d.derivative());
        let crit = strip_x(&crit);
        if crit.is_constant() {
            return None;
        }
        let r = smallest_root(&crit)?;
        return Some(if only_x {
            SingularWitness {
                field: r.ctx.clone(),
                y: r.ctx.one(),
                x: r,
            }
        } else {
            SingularWitness {
                field: r.ctx.clone(),
                x: r.ctx.one(),
                y: r,
            }
        });
    }

    let fx = f.derivative_x();
    let fy = f.derivative_y();
    if fx.is_zero() && fy.is_zero() {
        // every point of the (non-empty) curve is singular
        return torus_point_of(&f);
    }
    // stripping monomial factors never changes torus zero sets, and keeps
    // pairwise gcds free of monomials so resultants of coprime pairs are
    // nonzero
    let mut sys: Vec<BiPoly> = vec![f.clone()];
    if !fx.is_zero() {
        sys.push(fx.strip_monomials());
    }
    if !fy.is_zero() {
        sys.push(fy.strip_monomials());
    }

    // common factor: a positive-dimensional singular locus
    let mut g3 = sys[0].clone();
    for s in &sys[1..] {
        g3 = bivariate_gcd(&g3, s);
    }
    let g3 = g3.strip_monomials();
    if g3.num_terms() > 1 {
        return torus_point_of(&g3);
    }

    // zero-dimensional: collect candidate x-coordinates from resultants of
    // coprime pairs
    let mut cand = Dense::one(f.ctx.clone());
    let mut found_pair = false;
    'pairs: for i in 0..sys.len() {
        for j in i + 1..sys.len() {
            let g = bivariate_gcd(&sys[i], &sys[j]).strip_monomials();
            if g.num_terms() == 1 {
                cand = resultant_y(&sys[i], &sys[j]);
                found_pair = true;
                break 'pairs;
            }
        }
    }
    if !found_pair {
        // every pair shares a factor; peel the first pair
        let w = bivariate_gcd(&sys[0], &sys[1]).strip_monomials();
        let last = sys.last().unwrap();
        let s0 = divide_bipoly(&sys[0], &w);
        let s1 = divide_bipoly(&sys[1], &w);
        cand = resultant_y(&w, last).mul(&resultant_y(&s0, &s1));
    }
    let cand = strip_x(&cand);
    if cand.is_zero() {
        // coprime pairs have nonzero resultants; zero means a logic error
        unreachable!("vanishing resultant for a coprime pair");
    }
    if cand.is_constant() {
        return None;
    }

    // one representative root per irreducible factor
    for m in irreducible_factors_of_squarefree_part(&cand) {
        if m.degree() == 0 {
            continue;
        }
        let ext = FqCtx::get(f.ctx.p, f.ctx.m * m.degree());
        let me = m.embed(&ext);
        let mut roots = roots_in_field(&me);
        assert!(!roots.is_empty());
        roots.sort_by_key(|r| r.index());
        let x0 = roots[0].clone();
        if x0.is_zero() {
            continue;
        }
        let mut u = Dense::zero(ext.clone());
        let mut all_zero = true;
        for s in &sys {
            let sp = s.embed(&ext).specialize_x(&x0).strip_monomial();
            if sp.is_zero() {
                continue;
            }
            all_zero = false;
            let sd = sp.to_dense();
            u = if u.is_zero() { sd } else { u.gcd(&sd) };
        }
        if all_zero {
            return Some(SingularWitness {
                field: ext.clone(),
                x: x0,
                y: ext.one(),
            });
        }
        let u = strip_x(&u);
        if u.is_constant() {
            continue;
        }
        let y0 = smallest_root(&u).expect("nonconstant polynomial has a root somewhere");
        let bigger = y0.ctx.clone();
        return Some(SingularWitness {
            field: bigger.clone(),
            x: embed(&x0, &bigger),
            y: y0,
        });
    }
    None
}

fn divide_bipoly(a: &BiPoly, d: &BiPoly) -> BiPoly {
    // exact division by a common factor, done on the y-coefficient view
    let ctx = a.ctx.clone();
    let ra = a.strip_monomials().y_coeffs();
    let rd = d.strip_monomials().y_coeffs();
    // pseudo-division with exactness restored via content cleanup:
    // multiply a by lead(d)^k, divide, then strip the introduced content
    let db = rd.len() - 1;
    let mut rem: Vec<Dense> = ra.clone();
    let mut quo: Vec<Dense> = vec![Dense::zero(ctx.clone()); ra.len()];
    let lead = rd[db].clone();
    let mut scale_count = 0usize;
    loop {
        while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
            rem.pop();
        }
        if rem.len() <= db {
            break;
        }
        let dr = rem.len() - 1;
        let top = rem[dr].clone();
        for c in rem.iter_mut() {
            *c = c.mul(&lead);
        }
        for c in quo.iter_mut() {
            *c = c.mul(&lead);
        }
        quo[dr - db] = quo[dr - db].add(&top);
        for (i, bc) in rd.iter().enumerate() {
            rem[dr - db + i] = rem[dr - db + i].sub(&top.mul(bc));
        }
        scale_count += 1;
    }
    while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
        rem.pop();
    }
    assert!(rem.is_empty(), "inexact bivariate division");
    let mut scale = Dense::one(ctx.clone());
    for _ in 0..scale_count {
        scale = scale.mul(&lead);
    }
    let out: Vec<Dense> = quo
        .iter()
        .map(|c| {
            if c.is_zero() {
                c.clone()
            } else {
                c.div_exact(&scale)
            }
        })
        .collect();
    BiPoly::from_y_coeffs(ctx, &out)
}

fn strip_x(d: &Dense) -> Dense {
    if d.is_zero() {
        return d.clone();
    }
    let shift = d.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    Dense::new(d.ctx.clone(), d.coeffs[shift..].to_vec())
}

/// Root of least extension degree (and least index there) of a nonzero,
/// nonconstant polynomial with nonzero constant term.
fn smallest_root(h: &Dense) -> Option<Fq> {
    if h.is_zero() || h.is_constant() {
        return None;
    }
    for m in irreducible_factors_of_squarefree_part(h) {
        if m.degree() == 0 {
            continue;
        }
        let ext = FqCtx::get(h.ctx.p, h.ctx.m * m.degree());
        let mut roots = roots_in_field(&m.embed(&ext));
        roots.retain(|r| !r.is_zero());
        if roots.is_empty() {
            continue;
        }
        roots.sort_by_key(|r| r.index());
        return Some(roots[0].clone());
    }
    None
}

/// A torus point of a nonconstant, non-monomial curve (used when every
/// point of the locus is singular).
fn torus_point_of(g: &BiPoly) -> Option<SingularWitness> {
    let g = g.strip_monomials();
    let ctx = g.ctx.clone();
    let only_x = g.terms().all(|(&(_, j), _)| j == 0);
    let only_y = g.terms().all(|(&(i, _), _)| i == 0);
    if only_x || only_y {
        let u = if only_x {
            g.specialize_y(&ctx.one())
        } else {
            g.specialize_x(&ctx.one())
        };
        let d = strip_x(&u.to_dense());
        let r = smallest_root(&d)?;
        return Some(if only_x {
            SingularWitness {
                field: r.ctx.clone(),
                y: r.ctx.one(),
                x: r,
            }
        } else {
            SingularWitness {
                field: r.ctx.clone(),
                x: r.ctx.one(),
                y: r,
            }
        });
    }
    // try x0 over growing extensions until the specialization has a unit root
    for d in 1..=8usize {
        let ext = FqCtx::get(ctx.p, ctx.m * d);
        let ge = g.embed(&ext);
        for idx in 1..ext.size() {
            let x0 = ext.element(idx);
            let h = ge.specialize_x(&x0).strip_monomial();
            if h.is_zero() {
                return Some(SingularWitness {
                    field: ext.clone(),
                    x: x0,
                    y: ext.one(),
                });
            }
            let hd = h.to_dense();
            if hd.is_constant() {
                continue;
            }
            if let Some(y0) = smallest_root(&hd) {
                let big = y0.ctx.clone();
                return Some(SingularWitness {
                    field: big.clone(),
                    x: embed(&x0, &big),
                    y: y0,
                });
            }
            // specializations at later x0 would also work; first hit wins
        }
    }
    None
}
