//! Toroidal chart matrices, the special fibre with its dual graph, and
//! the reduction map on rational points.

use crate::algebra::{distinct_degree_factor, UniPoly};
use crate::curve::VPolynomial;
use crate::error::{Error, Result};
use crate::polytope::geom::{primitive_dir, Pt};
use crate::polytope::{hj_chain, Frac, Subdivision};
use crate::schemes::{dv_regular, reduce_edge, reduce_face, RegularityReport};
use crate::Budget;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// One toroidal coordinate chart at a v-edge.
#[derive(Clone, Debug)]
pub struct ChartMatrix {
    pub edge: usize,
    /// Chart index i in 0..=r along the chain.
    pub index: usize,
    pub m: [[i64; 3]; 3],
    pub m_inv: [[i64; 3]; 3],
    /// delta_L, the primitive edge direction (CCW around face1), the
    /// transversal step w = P1 - P0, and n_L = delta * v-step along the
    /// edge.
    pub delta: u64,
    pub dir: Pt,
    pub step: Pt,
    pub n_l: i64,
    /// The chain fractions (n_i, d_i) and (n_{i+1}, d_{i+1}) this chart
    /// interpolates; d = 0 encodes the outer sentinel.
    pub lo: Frac,
    pub hi: Frac,
    pub k_lo: i64,
    pub k_hi: i64,
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn adjugate3(m: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let c = |r1: usize, c1: usize, r2: usize, c2: usize| m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
    [
        [c(1, 1, 2, 2), -c(0, 1, 2, 2), c(0, 1, 1, 2)],
        [-c(1, 0, 2, 2), c(0, 0, 2, 2), -c(0, 0, 1, 2)],
        [c(1, 0, 2, 1), -c(0, 0, 2, 1), c(0, 0, 1, 1)],
    ]
}

/// The CCW direction of an edge around its first face, and the
/// transversal step to the star-level-1 base point.
fn edge_frame(sub: &Subdivision, edge: usize) -> (Pt, Pt) {
    let e = &sub.edges[edge];
    let poly = &sub.faces[e.face1].polygon;
    let n = poly.len();
    let (a, b) = (0..n)
        .find_map(|i| {
            let (u, v) = (poly[i], poly[(i + 1) % n]);
            if (u, v) == (e.a, e.b) || (u, v) == (e.b, e.a) {
                Some((u, v))
            } else {
                None
            }
        })
        .expect("edge is a side of its face");
    let dir = primitive_dir(a, b);
    let w = (e.base1.0 - e.base0.0, e.base1.1 - e.base0.1);
    // the star normalization forces det(dir, w) = 1
    assert_eq!(dir.0 * w.1 - dir.1 * w.0, 1);
    (dir, w)
}

/// delta * (v-step along the edge in the CCW direction); coprime to
/// delta by the definition of the edge denominator.
fn edge_nl(sub: &Subdivision, edge: usize, dir: Pt) -> i64 {
    let e = &sub.edges[edge];
    let vf = &sub.faces[e.face1].vfun;
    let p0 = e.a;
    let p1 = (e.a.0 + dir.0, e.a.1 + dir.1);
    let step = vf.eval(p1) - vf.eval(p0);
    let scaled = step * BigRational::from(BigInt::from(e.delta));
    assert!(scaled.is_integer());
    scaled.numer().to_i64().unwrap()
}

/// Chain fractions for an edge: endpoints included; the outer sentinel
/// (-1, 0) replaces the final integer entry for outer edges.
///
/// Outer edges always use the minimal chain: the sentinel's determinant
/// condition needs the preceding denominator to be 1, which the full
/// Farey list does not provide.
pub fn chart_fractions(
    sub: &Subdivision,
    edge: usize,
    minimal: bool,
    max_farey: usize,
) -> Result<Vec<Frac>> {
    let e = &sub.edges[edge];
    let minimal = minimal || !e.is_inner();
    let mut chain = hj_chain(&e.slope1, &e.slope2, minimal, max_farey)?;
    if !e.is_inner() {
        let last = chain.last_mut().unwrap();
        assert_eq!(last.1, 1, "outer chains end at an integer");
        *last = (-1, 0);
        assert_eq!(chain[chain.len() - 2].1, 1);
    }
    Ok(chain)
}

/// Build the chart matrices M_{L,i} for one edge.
pub fn toroidal_charts(
    sub: &Subdivision,
    edge: usize,
    minimal: bool,
    max_farey: usize,
) -> Result<Vec<ChartMatrix>> {
    let e = &sub.edges[edge];
    let delta = e.delta as i64;
    let (dir, w) = edge_frame(sub, edge);
    let n_l = edge_nl(sub, edge, dir);
    assert_eq!(
        crate::polytope::geom::gcd_i64(n_l, delta),
        1,
        "delta * nu is primitive"
    );
    let fractions = chart_fractions(sub, edge, minimal, max_farey)?;
    let k_of = |n: i64| -> i64 {
        if delta == 1 {
            return 0;
        }
        // k = -n * n_l^{-1} mod delta
        let inv = mod_inverse(n_l.rem_euclid(delta), delta);
        (-n * inv).rem_euclid(delta)
    };
    let mut out = Vec::new();
    for (i, pair) in fractions.windows(2).enumerate() {
        let (n_i, d_i) = pair[0];
        let (n_j, d_j) = pair[1];
        let k_i = k_of(n_i);
        let k_j = k_of(n_j);
        let col = |n: i64, d: i64, k: i64, sign: i64| -> [i64; 3] {
            let num = n + k * n_l;
            assert_eq!(num % delta, 0, "k is chosen to clear the denominator");
            [
                sign * (d * w.0 + k * dir.0),
                sign * (d * w.1 + k * dir.1),
                sign * (num / delta),
            ]
        };
        let c1 = [delta * dir.0, delta * dir.1, n_l];
        let c2 = col(n_i, d_i, k_i, 1);
        let c3 = col(n_j, d_j, k_j, -1);
        let m = [
            [c1[0], c2[0], c3[0]],
            [c1[1], c2[1], c3[1]],
            [c1[2], c2[2], c3[2]],
        ];
        assert_eq!(det3(&m), 1, "chart matrices are unimodular");
        let m_inv = adjugate3(&m);
        // bottom-right entries of the inverse are the chain denominators
        assert_eq!(m_inv[1][2], delta * d_j);
        assert_eq!(m_inv[2][2], delta * d_i);
        out.push(ChartMatrix {
            edge,
            index: i,
            m,
            m_inv,
            delta: e.delta,
            dir,
            step: w,
            n_l,
            lo: (n_i, d_i),
            hi: (n_j, d_j),
            k_lo: k_i,
            k_hi: k_j,
        });
    }
    Ok(out)
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let (g, s, _) = crate::polytope::geom::ext_gcd(a, m);
    assert_eq!(g, 1, "inverse exists");
    s.rem_euclid(m)
}

/// Symbolic transport of f into a chart and verification of the three
/// specialization identities against the reduced stratum equations.
pub fn chart_specialization_check(
    vp: &VPolynomial,
    sub: &Subdivision,
    cm: &ChartMatrix,
) -> Result<()> {
    let ctx = vp.field.clone();
    // exponent transport: (i, j, gamma) -> M^{-1} (i, j, gamma)^T
    let mut terms: Vec<([i64; 3], crate::algebra::Fq)> = Vec::new();
    for &pt in &vp.support_points() {
        let gamma = vp.valuation(pt);
        let v = [pt.0, pt.1, gamma];
        let mut e = [0i64; 3];
        for (r, row) in cm.m_inv.iter().enumerate() {
            e[r] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        terms.push((e, vp.unit(pt)));
    }
    let min_y = terms.iter().map(|(e, _)| e[1]).min().unwrap();
    let min_z = terms.iter().map(|(e, _)| e[2]).min().unwrap();
    for (e, _) in terms.iter_mut() {
        e[1] -= min_y;
        e[2] -= min_z;
    }

    let e = &sub.edges[cm.edge];
    let fl = reduce_edge(vp, sub, cm.edge).poly;

    // F(X, 0, 0): terms with Y = Z = 0
    let slice_x: Vec<(i64, crate::algebra::Fq)> = terms
        .iter()
        .filter(|(ex, _)| ex[1] == 0 && ex[2] == 0)
        .map(|(ex, c)| (ex[0], c.clone()))
        .collect();
    let ux = UniPoly::from_terms(ctx.clone(), slice_x);
    if !uni_equiv(&ux, &fl)? {
        return Err(Error::SpecializationMismatch {
            edge: cm.edge,
            chart: cm.index,
            detail: "F(X,0,0) does not match the edge reduction".into(),
        });
    }

    // F(X, Y, 0): terms with Z = 0
    let slice_xy: Vec<((i64, i64), crate::algebra::Fq)> = terms
        .iter()
        .filter(|(ex, _)| ex[2] == 0)
        .map(|(ex, c)| ((ex[0], ex[1]), c.clone()))
        .collect();
    let bxy = crate::algebra::BiPoly::from_terms(ctx.clone(), slice_xy);
    if cm.index == 0 {
        let ff = reduce_face(vp, sub, e.face1).poly;
        if !bi_equiv(&bxy, &ff)? {
            return Err(Error::SpecializationMismatch {
                edge: cm.edge,
                chart: cm.index,
                detail: "F(X,Y,0) does not match the first face reduction".into(),
            });
        }
    } else if !uni_equiv(&line_poly(&bxy), &fl)? {
        return Err(Error::SpecializationMismatch {
            edge: cm.edge,
            chart: cm.index,
            detail: "F(X,Y,0) does not match the edge reduction".into(),
        });
    }

    // F(X, 0, Z): terms with Y = 0. For the outer sentinel chart the
    // Y-exponent ignores the lifting height, so no identity is claimed
    // there (that chart carries the outermost points instead).
    if cm.hi.1 == 0 {
        return Ok(());
    }
    let slice_xz: Vec<((i64, i64), crate::algebra::Fq)> = terms
        .iter()
        .filter(|(ex, _)| ex[1] == 0)
        .map(|(ex, c)| ((ex[0], ex[2]), c.clone()))
        .collect();
    let bxz = crate::algebra::BiPoly::from_terms(ctx.clone(), slice_xz);
    let is_last_inner = e.is_inner() && {
        // last chart of an inner edge interpolates down to slope2
        crate::polytope::hj::rational_of_frac(cm.hi) == e.slope2
    };
    if is_last_inner {
        let f2 = e.face2.expect("inner edge");
        let ff = reduce_face(vp, sub, f2).poly;
        if !bi_equiv(&bxz, &ff)? {
            return Err(Error::SpecializationMismatch {
                edge: cm.edge,
                chart: cm.index,
                detail: "F(X,0,Z) does not match the second face reduction".into(),
            });
        }
    } else if !uni_equiv(&line_poly(&bxz), &fl)? {
        return Err(Error::SpecializationMismatch {
            edge: cm.edge,
            chart: cm.index,
            detail: "F(X,0,Z) does not match the edge reduction".into(),
        });
    }
    Ok(())
}

/// Collapse a bivariate polynomial supported on an affine line to the
/// univariate polynomial in the primitive parameter along that line.
/// Positions are measured in primitive steps, so zero coefficients keep
/// their gaps.
fn line_poly(b: &crate::algebra::BiPoly) -> UniPoly {
    let supp = b.support();
    assert!(!supp.is_empty());
    if supp.len() == 1 {
        return UniPoly::from_terms(b.ctx.clone(), vec![(0, b.coeff(supp[0]))]);
    }
    let base = *supp.iter().min().unwrap();
    let far = *supp.iter().max().unwrap();
    let dir = crate::polytope::geom::primitive_dir(base, far);
    let terms: Vec<(i64, crate::algebra::Fq)> = supp
        .iter()
        .map(|&q| {
            let d = (q.0 - base.0, q.1 - base.1);
            let t = if dir.0 != 0 { d.0 / dir.0 } else { d.1 / dir.1 };
            assert_eq!(d, (t * dir.0, t * dir.1), "support must be collinear");
            (t, b.coeff(q))
        })
        .collect();
    UniPoly::from_terms(b.ctx.clone(), terms)
}

/// Equality of univariate residue polynomials up to the recorded chart
/// ambiguity (unit scalar, monomial factor, parameter scaling and
/// reversal), checked through invariants.
fn uni_equiv(a: &UniPoly, b: &UniPoly) -> Result<bool> {
    let sa = a.strip_monomial();
    let sb = b.strip_monomial();
    if sa.is_zero() || sb.is_zero() {
        return Ok(sa.is_zero() == sb.is_zero());
    }
    if sa.span() != sb.span() || sa.num_terms() != sb.num_terms() {
        return Ok(false);
    }
    if sa.span() == 0 {
        return Ok(true);
    }
    if distinct_degree_factor(&sa)? != distinct_degree_factor(&sb)? {
        return Ok(false);
    }
    for d in 1..=2 {
        if crate::algebra::count_roots_in_units(&sa, d)?
            != crate::algebra::count_roots_in_units(&sb, d)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of bivariate residue polynomials up to chart equivalence,
/// via lattice-isomorphism invariants of the Newton polygon and torus
/// point counts.
fn bi_equiv(a: &crate::algebra::BiPoly, b: &crate::algebra::BiPoly) -> Result<bool> {
    let sa = a.strip_monomials();
    let sb = b.strip_monomials();
    if sa.num_terms() != sb.num_terms() {
        return Ok(false);
    }
    let ha = crate::polytope::geom::convex_hull(&sa.support());
    let hb = crate::polytope::geom::convex_hull(&sb.support());
    if crate::polytope::geom::area2(&ha) != crate::polytope::geom::area2(&hb) {
        return Ok(false);
    }
    if crate::polytope::geom::interior_lattice_points(&ha).len()
        != crate::polytope::geom::interior_lattice_points(&hb).len()
    {
        return Ok(false);
    }
    let budget = Budget::default().max_enum;
    for d in 1..=2 {
        let ca = crate::algebra::count_affine_torus_points(&sa, d, budget)?;
        let cb = crate::algebra::count_affine_torus_points(&sb, d, budget)?;
        if ca != cb {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// The completed curve of a v-face.
    Face { face: usize },
    /// One rational component of a chain: edge, Frobenius orbit, copy
    /// within the orbit, and position 1..=r along the chain.
    Chain {
        edge: usize,
        orbit: usize,
        copy: usize,
        position: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Component {
    pub id: usize,
    pub kind: ComponentKind,
    pub multiplicity: u64,
    /// Geometric genus contribution; 0 for chain components.
    pub genus: usize,
    /// Size of the Frobenius orbit this component belongs to.
    pub orbit_size: usize,
    /// Set when the regularity report flags the originating stratum.
    pub flagged_nonregular: bool,
}

/// Transversal intersection of two components of the fibre.
#[derive(Clone, Debug)]
pub struct Intersection {
    pub a: usize,
    pub b: usize,
    /// Originating v-edge.
    pub via_edge: usize,
    pub orbit: usize,
    pub orbit_size: usize,
}

/// Frobenius orbit data of the chains at one v-edge.
#[derive(Clone, Debug)]
pub struct EdgeChains {
    pub edge: usize,
    /// Interior chain multiplicities delta_L * d_i (empty when r = 0).
    pub multiplicities: Vec<u64>,
    /// (orbit size d, number of orbits of that size); sums to |X_L(kbar)|.
    pub orbits: Vec<(usize, usize)>,
    /// Chain fractions including endpoints (outer sentinel excluded).
    pub fractions: Vec<Frac>,
}

#[derive(Clone, Debug)]
pub struct SpecialFibre {
    pub components: Vec<Component>,
    pub intersections: Vec<Intersection>,
    pub edge_chains: Vec<EdgeChains>,
    pub regular: bool,
    pub report: RegularityReport,
}

impl SpecialFibre {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// First Betti number of the dual graph.
    pub fn b1(&self) -> usize {
        let v = self.components.len();
        let e = self.intersections.len();
        let c = self.connected_components();
        assert!(e + c >= v);
        e + c - v
    }

    pub fn connected_components(&self) -> usize {
        let n = self.components.len();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            if dsu[x] != x {
                let r = find(dsu, dsu[x]);
                dsu[x] = r;
            }
            dsu[x]
        }
        for e in &self.intersections {
            let (ra, rb) = (find(&mut dsu, e.a), find(&mut dsu, e.b));
            if ra != rb {
                dsu[ra] = rb;
            }
        }
        (0..n).filter(|&i| find(&mut dsu, i) == i).count()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() == 1
    }
}

/// Assemble the special fibre and its dual graph. Works for any input;
/// non-regular strata are flagged rather than rejected.
pub fn special_fibre(vp: &VPolynomial, budget: &Budget) -> Result<(Subdivision, SpecialFibre)> {
    let sub = Subdivision::lower_hull(vp);
    if sub.zero_volume {
        return Err(Error::ZeroVolume);
    }
    let report = dv_regular(vp, &sub)?;
    let fibre = build_fibre(vp, &sub, &report, true, budget)?;
    Ok((sub, fibre))
}

pub fn build_fibre(
    vp: &VPolynomial,
    sub: &Subdivision,
    report: &RegularityReport,
    minimal_chains: bool,
    budget: &Budget,
) -> Result<SpecialFibre> {
    let mut components = Vec::new();
    let mut face_comp = vec![usize::MAX; sub.faces.len()];
    for f in &sub.faces {
        face_comp[f.id] = components.len();
        components.push(Component {
            id: components.len(),
            kind: ComponentKind::Face { face: f.id },
            multiplicity: f.delta,
            genus: f.genus,
            orbit_size: 1,
            flagged_nonregular: !report.faces[f.id].smooth,
        });
    }
    let mut intersections = Vec::new();
    let mut edge_chains = Vec::new();
    for e in &sub.edges {
        let outer_full = !e.is_inner() && e.delta == sub.faces[e.face1].delta;
        if outer_full {
            // no contribution: the chain is empty and open-ended
            continue;
        }
        let es = reduce_edge(vp, sub, e.id);
        let orbits = distinct_degree_factor(&es.poly)?;
        // outer edges always take the minimal chain, matching the charts
        let minimal = minimal_chains || !e.is_inner();
        let chain = hj_chain(&e.slope1, &e.slope2, minimal, budget.max_farey)?;
        let interior: Vec<Frac> = chain[1..chain.len() - 1].to_vec();
        let mults: Vec<u64> = interior.iter().map(|&(_, d)| e.delta * d as u64).collect();
        // endpoint identities: delta_L d_0 = delta_F1 and (inner)
        // delta_L d_{r+1} = delta_F2
        assert_eq!(e.delta * chain[0].1 as u64, sub.faces[e.face1].delta);
        if let Some(f2) = e.face2 {
            assert_eq!(e.delta * chain[chain.len() - 1].1 as u64, sub.faces[f2].delta);
        }
        let flagged = !report.edges[e.id].smooth;
        for (orbit_idx, &(osize, ocount)) in orbits.iter().enumerate() {
            let _ = orbit_idx;
            for rep in 0..ocount {
                let orbit_id = orbit_key(&orbits, osize, rep);
                for copy in 0..osize {
                    let mut prev = face_comp[e.face1];
                    for (pos, &(_, d)) in interior.iter().enumerate() {
                        let id = components.len();
                        components.push(Component {
                            id,
                            kind: ComponentKind::Chain {
                                edge: e.id,
                                orbit: orbit_id,
                                copy,
                                position: pos + 1,
                            },
                            multiplicity: e.delta * d as u64,
                            genus: 0,
                            orbit_size: osize,
                            flagged_nonregular: flagged,
                        });
                        intersections.push(Intersection {
                            a: prev,
                            b: id,
                            via_edge: e.id,
                            orbit: orbit_id,
                            orbit_size: osize,
                        });
                        prev = id;
                    }
                    if let Some(f2) = e.face2 {
                        intersections.push(Intersection {
                            a: prev,
                            b: face_comp[f2],
                            via_edge: e.id,
                            orbit: orbit_id,
                            orbit_size: osize,
                        });
                    }
                }
            }
        }
        edge_chains.push(EdgeChains {
            edge: e.id,
            multiplicities: mults,
            orbits,
            fractions: chain,
        });
    }
    let fibre = SpecialFibre {
        components,
        intersections,
        edge_chains,
        regular: report.regular,
        report: report.clone(),
    };
    Ok(fibre)
}

fn orbit_key(orbits: &[(usize, usize)], size: usize, rep: usize) -> usize {
    // stable id: offset of (size, rep) in the flattened orbit list
    let mut id = 0;
    for &(s, c) in orbits {
        if s == size {
            return id + rep;
        }
        id += c;
    }
    unreachable!()
}

/// Where a rational point with coordinate valuations (vx, vy) reduces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionTarget {
    /// The multiplicity-one face component.
    Face { face: usize },
    /// The multiplicity-one chain components at integer slope n (one per
    /// root of the edge reduction; the specific copy depends on the
    /// angular part of the point).
    Chain { edge: usize, n: i64 },
}

/// Minimise the linear form vx*i + vy*j + z over the lifted polytope and
/// map the minimising stratum to a multiplicity-one component.
pub fn reduce_point(vp: &VPolynomial, vx: i64, vy: i64) -> Result<ReductionTarget> {
    let sub = Subdivision::lower_hull(vp);
    if sub.zero_volume {
        return Err(Error::ZeroVolume);
    }
    let value = |q: Pt| -> BigRational {
        BigRational::from(BigInt::from(vx * q.0 + vy * q.1)) + sub.v(q)
    };
    let min = sub
        .vertices
        .iter()
        .map(|&q| value(q))
        .min()
        .expect("positive-volume subdivision has vertices");
    let argmin: Vec<Pt> = sub
        .vertices
        .iter()
        .copied()
        .filter(|&q| value(q) == min)
        .collect();
    // the minimising face of the polytope: a face whose vertices are all
    // minimisers, an edge with both endpoints minimising, or a vertex
    for f in &sub.faces {
        if f.polygon.iter().all(|q| argmin.contains(q)) {
            if f.delta == 1 {
                return Ok(ReductionTarget::Face { face: f.id });
            }
            return Err(Error::NoRationalComponent);
        }
    }
    for e in &sub.edges {
        if argmin.contains(&e.a) && argmin.contains(&e.b) {
            if e.delta != 1 {
                return Err(Error::NoRationalComponent);
            }
            let (dir, w) = edge_frame(&sub, e.id);
            let n_l = edge_nl(&sub, e.id, dir);
            // integer candidates strictly between the slopes
            let lo = &e.slope2;
            let hi = &e.slope1;
            let lo_int = lo.floor().numer().to_i64().unwrap() + 1;
            let hi_int = hi.ceil().numer().to_i64().unwrap() - 1;
            for n in lo_int..=hi_int {
                let ray = (n * dir.1 - n_l * w.1, -n * dir.0 + n_l * w.0);
                if ray == (vx, vy) {
                    return Ok(ReductionTarget::Chain { edge: e.id, n });
                }
            }
            return Err(Error::NoRationalComponent);
        }
    }
    // vertex minimiser
    Err(Error::NoRationalComponent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::vpoly_from_integer_terms;

    fn intro(p: u64) -> VPolynomial {
        let c0 = (p as i64).pow(5);
        vpoly_from_integer_terms(
            &[((0, 2), 1), ((3, 1), p as i64), ((3, 0), 1), ((0, 0), c0)],
            p,
        )
        .unwrap()
    }

    #[test]
    fn charts_are_unimodular_and_specialize() {
        let vp = intro(7);
        let sub = Subdivision::lower_hull(&vp);
        for e in &sub.edges {
            for cm in toroidal_charts(&sub, e.id, true, 100_000).unwrap() {
                assert_eq!(det3(&cm.m), 1);
                chart_specialization_check(&vp, &sub, &cm).unwrap();
            }
        }
    }

    #[test]
    fn weierstrass_pi_charts() {
        let vp = vpoly_from_integer_terms(&[((0, 2), 1), ((3, 0), -1), ((0, 0), -7)], 7).unwrap();
        let sub = Subdivision::lower_hull(&vp);
        for e in &sub.edges {
            for cm in toroidal_charts(&sub, e.id, true, 100_000).unwrap() {
                chart_specialization_check(&vp, &sub, &cm).unwrap();
            }
        }
    }

    #[test]
    fn monomial_rescaling_keeps_identities() {
        // x -> pi x on the intro curve shifts valuations by i
        let p = 5i64;
        let vp = vpoly_from_integer_terms(
            &[
                ((0, 2), 1),
                ((3, 1), p.pow(4)),
                ((3, 0), p.pow(3)),
                ((0, 0), p.pow(5)),
            ],
            5,
        )
        .unwrap();
        let sub = Subdivision::lower_hull(&vp);
        for e in &sub.edges {
            for cm in toroidal_charts(&sub, e.id, true, 100_000).unwrap() {
                chart_specialization_check(&vp, &sub, &cm).unwrap();
            }
        }
    }

    #[test]
    fn intro_fibre_census() {
        let vp = intro(7);
        let budget = Budget::default();
        let (sub, fibre) = special_fibre(&vp, &budget).unwrap();
        assert!(fibre.regular);
        // two face components of multiplicities 6 and 3
        let mut face_mults: Vec<u64> = fibre
            .components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Face { .. }))
            .map(|c| c.multiplicity)
            .collect();
        face_mults.sort_unstable();
        assert_eq!(face_mults, vec![3, 6]);
        // the inner chain has multiplicities 5,4,3,2,1
        let inner = sub.edges.iter().find(|e| e.is_inner()).unwrap();
        let ec = fibre
            .edge_chains
            .iter()
            .find(|c| c.edge == inner.id)
            .unwrap();
        assert_eq!(ec.multiplicities, vec![5, 4, 3, 2, 1]);
        assert_eq!(ec.orbits, vec![(1, 1)]);
        assert!(fibre.is_connected());
        assert_eq!(fibre.b1(), 0);
    }

    #[test]
    fn deficient_curve_single_component() {
        for p in [3u64, 5, 7] {
            let q = p as i64;
            let vp =
                vpoly_from_integer_terms(&[((0, 2), 1), ((4, 0), -q), ((0, 0), -q.pow(3))], p)
                    .unwrap();
            let (_, fibre) = special_fibre(&vp, &Budget::default()).unwrap();
            assert!(fibre.regular, "p = {p}");
            assert_eq!(fibre.components.len(), 1);
            assert_eq!(fibre.components[0].multiplicity, 2);
            assert_eq!(fibre.components[0].genus, 1);
            assert!(fibre.intersections.is_empty());
        }
    }

    #[test]
    fn i5_curve_is_a_cycle() {
        // y^2 + xy - x^3 - p^5 at p = 5
        let vp = vpoly_from_integer_terms(
            &[((0, 2), 1), ((1, 1), 1), ((3, 0), -1), ((0, 0), -3125)],
            5,
        )
        .unwrap();
        let (_, fibre) = special_fibre(&vp, &Budget::default()).unwrap();
        assert!(fibre.regular);
        assert!(fibre.is_connected());
        assert_eq!(fibre.b1(), 1, "one cycle");
    }

    #[test]
    fn reduce_point_on_intro_curve() {
        let vp = intro(7);
        // (0,0) minimises on the inner edge; the only integer slope is 0
        let t = reduce_point(&vp, 0, 0).unwrap();
        match t {
            ReductionTarget::Chain { n, .. } => assert_eq!(n, 0),
            _ => panic!("expected a chain target"),
        }
    }

    #[test]
    fn reduce_point_good_face() {
        // y^2 - x^3 - x - p: good reduction face with delta 1
        let vp = vpoly_from_integer_terms(
            &[((0, 2), 1), ((3, 0), -1), ((1, 0), -1), ((0, 0), -7)],
            7,
        )
        .unwrap();
        let t = reduce_point(&vp, 0, 0).unwrap();
        match t {
            ReductionTarget::Face { face } => {
                let sub = Subdivision::lower_hull(&vp);
                assert_eq!(sub.faces[face].delta, 1);
            }
            _ => panic!("expected the face target"),
        }
    }

    #[test]
    fn reduce_point_vertex_is_rejected() {
        // y^2 + xy - x^3 - p^5: L_P for (vx, vy) landing on the v-vertex
        // (1,1) of the lifted polytope
        let vp = vpoly_from_integer_terms(
            &[((0, 2), 1), ((1, 1), 1), ((3, 0), -1), ((0, 0), -3125)],
            5,
        )
        .unwrap();
        // vx very negative, vy very positive: minimiser is a single vertex
        assert!(matches!(
            reduce_point(&vp, -10, 7),
            Err(Error::NoRationalComponent)
        ));
    }
}
