//! Restriction of f to the affine lattice of a stratum, reduction to
//! residue polynomials, smoothness verdicts and the regularity report.

use crate::algebra::bipoly::{torus_singular_point, SingularWitness};
use crate::algebra::{count_roots_in_units, BiPoly, FqCtx, UniPoly};
use crate::curve::VPolynomial;
use crate::error::{Error, Result};
use crate::polytope::geom::{ext_gcd, interior_lattice_points, segment_lattice_points, Pt};
use crate::polytope::{classify_lattice_points, AffineZ, Subdivision};
use std::sync::Arc;

/// Affine chart for the smallest lattice containing a point set: origin
/// plus a Hermite-form basis of the difference lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLatticeChart {
    pub origin: Pt,
    /// 0, 1 or 2 basis vectors; rank-2 bases are lower-triangular
    /// [(g1, s), (0, g2)] with g1, g2 > 0 and 0 <= s < g2.
    pub basis: Vec<Pt>,
}

impl AffineLatticeChart {
    /// Chart spanning a nonempty point set: origin is the
    /// lexicographically least point, basis the Hermite form of the
    /// differences.
    pub fn spanning(points: &[Pt]) -> AffineLatticeChart {
        assert!(!points.is_empty());
        let origin = *points.iter().min().unwrap();
        let diffs: Vec<Pt> = points
            .iter()
            .map(|&(x, y)| (x - origin.0, y - origin.1))
            .filter(|&d| d != (0, 0))
            .collect();
        let basis = hermite_basis(&diffs);
        AffineLatticeChart { origin, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Index of a rank-2 lattice in Z^2.
    pub fn index(&self) -> u64 {
        assert_eq!(self.rank(), 2);
        let det = self.basis[0].0 * self.basis[1].1 - self.basis[0].1 * self.basis[1].0;
        det.unsigned_abs()
    }

    /// Coordinates of a plane point in this chart, if it lies on the
    /// lattice.
    pub fn to_chart(&self, pt: Pt) -> Option<Vec<i64>> {
        let d = (pt.0 - self.origin.0, pt.1 - self.origin.1);
        match self.rank() {
            0 => (d == (0, 0)).then(Vec::new),
            1 => {
                let e = self.basis[0];
                let m = if e.0 != 0 {
                    if d.0 % e.0 != 0 {
                        return None;
                    }
                    d.0 / e.0
                } else {
                    if d.1 % e.1 != 0 {
                        return None;
                    }
                    d.1 / e.1
                };
                (d == (m * e.0, m * e.1)).then(|| vec![m])
            }
            2 => {
                let (e1, e2) = (self.basis[0], self.basis[1]);
                // lower-triangular: e1 = (g1, s), e2 = (0, g2)
                if d.0 % e1.0 != 0 {
                    return None;
                }
                let m = d.0 / e1.0;
                let rest = d.1 - m * e1.1;
                if rest % e2.1 != 0 {
                    return None;
                }
                Some(vec![m, rest / e2.1])
            }
            _ => unreachable!(),
        }
    }

    pub fn from_chart(&self, coords: &[i64]) -> Pt {
        let mut pt = self.origin;
        for (c, e) in coords.iter().zip(&self.basis) {
            pt = (pt.0 + c * e.0, pt.1 + c * e.1);
        }
        pt
    }
}

/// Hermite-form basis of the sublattice of Z^2 generated by the vectors.
fn hermite_basis(vs: &[Pt]) -> Vec<Pt> {
    if vs.is_empty() {
        return Vec::new();
    }
    // combine x-components by extended gcd
    let mut u: Option<Pt> = None; // generator with x != 0 (if any)
    let mut ys: Vec<i64> = Vec::new(); // generators with x = 0
    for &v in vs {
        if v.0 == 0 {
            ys.push(v.1);
            continue;
        }
        u = Some(match u {
            None => v,
            Some(w) => {
                let (_, s, t) = ext_gcd(w.0, v.0);
                let comb = (s * w.0 + t * v.0, s * w.1 + t * v.1);
                // the reduced leftovers have x = 0
                let g = comb.0;
                ys.push(w.1 - (w.0 / g) * comb.1);
                ys.push(v.1 - (v.0 / g) * comb.1);
                comb
            }
        });
    }
    let gy = ys.iter().fold(0i64, |acc, &y| {
        crate::polytope::geom::gcd_i64(acc, y)
    });
    match (u, gy) {
        (None, 0) => Vec::new(),
        (None, g) => vec![(0, g.abs())],
        (Some(mut w), 0) => {
            if w.0 < 0 {
                w = (-w.0, -w.1);
            }
            vec![w]
        }
        (Some(mut w), g) => {
            let g = g.abs();
            if w.0 < 0 {
                w = (-w.0, -w.1);
            }
            // normalize the shear: 0 <= w.1 < g
            let s = w.1.rem_euclid(g);
            vec![(w.0, s), (0, g)]
        }
    }
}

/// Reduced equation of a v-edge: a univariate residue polynomial with
/// nonzero constant and leading coefficients.
#[derive(Clone, Debug)]
pub struct EdgeScheme {
    pub edge: usize,
    pub poly: UniPoly,
    pub chart: AffineLatticeChart,
}

/// Reduced equation of a v-face, with the correspondence between the
/// boundary edges of its Newton polygon and the originating v-edges.
#[derive(Clone, Debug)]
pub struct FaceScheme {
    pub face: usize,
    pub poly: BiPoly,
    pub chart: AffineLatticeChart,
    /// CCW Newton polygon of the reduced equation.
    pub reduced_polygon: Vec<Pt>,
    /// (v-edge id, reduced-polygon edge endpoints in chart coordinates).
    pub boundary: Vec<(usize, (Pt, Pt))>,
}

impl FaceScheme {
    /// Restriction of the reduced equation to a boundary edge of its
    /// Newton polygon, as a univariate polynomial in the edge parameter.
    pub fn boundary_restriction(&self, edge_id: usize) -> UniPoly {
        let &(_, (a, b)) = self
            .boundary
            .iter()
            .find(|(e, _)| *e == edge_id)
            .expect("edge bounds this face");
        let pts = segment_lattice_points(a, b);
        let terms: Vec<(i64, crate::algebra::Fq)> = pts
            .iter()
            .enumerate()
            .map(|(k, &q)| (k as i64, self.poly.coeff(q)))
            .collect();
        UniPoly::from_terms(self.poly.ctx.clone(), terms)
    }

    /// Number of points of the completed curve over F_{q^d}: torus points
    /// plus one boundary point per unit root of each edge restriction.
    pub fn count_points(&self, d: u32, budget: u128) -> Result<u128> {
        let torus = crate::algebra::count_affine_torus_points(&self.poly, d, budget)?;
        let mut boundary = 0u128;
        for (e, _) in &self.boundary {
            boundary += count_roots_in_units(&self.boundary_restriction(*e), d)? as u128;
        }
        Ok(torus + boundary)
    }
}

/// Outcome for one stratum of the regularity check.
#[derive(Clone, Debug)]
pub struct StratumVerdict {
    pub smooth: bool,
    pub witness: Option<String>,
}

/// The aggregated regularity report.
#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub regular: bool,
    /// All integral points of the lifted polytope are vertices; when set,
    /// regularity holds over every residue field.
    pub vertex_only: bool,
    pub faces: Vec<StratumVerdict>,
    /// Edge verdicts; outer edges with delta_L = delta_F record the
    /// outer-regularity check instead of squarefreeness.
    pub edges: Vec<StratumVerdict>,
}

/// Restrict f to the integral lattice points of a face and reduce.
pub fn reduce_face(vp: &VPolynomial, sub: &Subdivision, face: usize) -> FaceScheme {
    let f = &sub.faces[face];
    let chart = AffineLatticeChart::spanning(&f.closure_integral);
    assert_eq!(chart.rank(), 2, "face lattice has full rank");
    assert_eq!(chart.index(), f.delta, "lattice index equals the denominator");
    let ctx = vp.field.clone();
    let mut terms = Vec::new();
    for &q in &f.closure_integral {
        let coords = chart.to_chart(q).expect("spanning chart contains the set");
        let c = reduced_coeff(vp, sub, q, &ctx);
        terms.push(((coords[0], coords[1]), c));
    }
    let poly = BiPoly::from_terms(ctx, terms);
    let reduced_polygon = crate::polytope::geom::convex_hull(&poly.support());
    // boundary correspondence via the chart images of the edge endpoints
    let mut boundary = Vec::new();
    for &eid in &f.boundary_edges {
        let e = &sub.edges[eid];
        let ca = chart.to_chart(e.a).expect("edge endpoints are integral");
        let cb = chart.to_chart(e.b).expect("edge endpoints are integral");
        boundary.push((eid, ((ca[0], ca[1]), (cb[0], cb[1]))));
    }
    // the reduced Newton polygon is the chart image of the face
    let img: Vec<Pt> = f
        .polygon
        .iter()
        .map(|&q| {
            let c = chart.to_chart(q).expect("face vertices are integral");
            (c[0], c[1])
        })
        .collect();
    let img_hull = crate::polytope::geom::convex_hull(&img);
    assert_eq!(
        img_hull.len(),
        reduced_polygon.len(),
        "reduced polygon matches the chart image of the face"
    );
    FaceScheme {
        face,
        poly,
        chart,
        reduced_polygon,
        boundary,
    }
}

/// Restrict f to the integral lattice points of an edge and reduce.
pub fn reduce_edge(vp: &VPolynomial, sub: &Subdivision, edge: usize) -> EdgeScheme {
    let e = &sub.edges[edge];
    let chart = AffineLatticeChart::spanning(&e.closure_integral);
    assert_eq!(chart.rank(), 1, "edge lattice has rank one");
    let ctx = vp.field.clone();
    let mut terms = Vec::new();
    for &q in &e.closure_integral {
        let coords = chart.to_chart(q).expect("spanning chart contains the set");
        terms.push((coords[0], reduced_coeff(vp, sub, q, &ctx)));
    }
    let poly = UniPoly::from_terms(ctx, terms);
    // endpoints are vertices of the polytope, so the extreme coefficients
    // are units
    assert!(!poly.coeff(0).is_zero() && poly.min_exp() == Some(0));
    assert_eq!(poly.max_exp(), Some(e.closure_integral.len() as i64 - 1));
    EdgeScheme { edge, poly, chart }
}

/// Reduced coefficient at a lattice point: the leading unit when the
/// lifted coefficient sits on the hull, zero otherwise.
fn reduced_coeff(
    vp: &VPolynomial,
    sub: &Subdivision,
    q: Pt,
    ctx: &Arc<FqCtx>,
) -> crate::algebra::Fq {
    match vp.coeff(q) {
        Some(_) => {
            let hull_v = sub.v(q);
            let actual = vp.valuation(q);
            if hull_v == num_rational::BigRational::from(num_bigint::BigInt::from(actual)) {
                vp.unit(q)
            } else {
                ctx.zero()
            }
        }
        None => ctx.zero(),
    }
}

/// Smoothness of an edge scheme: squarefreeness of the reduced equation.
pub fn edge_smooth(es: &EdgeScheme) -> StratumVerdict {
    let d = es.poly.strip_monomial().to_dense();
    if d.is_constant() {
        return StratumVerdict {
            smooth: true,
            witness: None,
        };
    }
    let g = d.gcd(&d.derivative());
    if g.is_constant() {
        StratumVerdict {
            smooth: true,
            witness: None,
        }
    } else {
        StratumVerdict {
            smooth: false,
            witness: Some(format!("repeated-root factor of degree {}", g.degree())),
        }
    }
}

/// Geometric smoothness of a face scheme inside the torus.
pub fn face_smooth(fs: &FaceScheme) -> StratumVerdict {
    match torus_singular_point(&fs.poly) {
        None => StratumVerdict {
            smooth: true,
            witness: None,
        },
        Some(w) => StratumVerdict {
            smooth: false,
            witness: Some(w.describe()),
        },
    }
}

/// Raw witness access (used by the regularity report and tests).
pub fn face_singular_witness(fs: &FaceScheme) -> Option<SingularWitness> {
    torus_singular_point(&fs.poly)
}

/// Brute-force cross-check of the smoothness verdict over F_{q^d} for
/// d up to `max_d`, subject to the enumeration budget.
pub fn face_smooth_brute(fs: &FaceScheme, max_d: u32, budget: u128) -> Result<bool> {
    let f = fs.poly.strip_monomials();
    let fx = f.derivative_x();
    let fy = f.derivative_y();
    for d in 1..=max_d {
        let ext = FqCtx::get(f.ctx.p, f.ctx.m * d as usize);
        if ext.size() > budget {
            return Err(Error::BudgetExceeded {
                needed: ext.size(),
                cap: budget,
            });
        }
        let fe = f.embed(&ext);
        let fxe = fx.embed(&ext);
        let fye = fy.embed(&ext);
        for xi in 1..ext.size() {
            let x0 = ext.element(xi);
            for yi in 1..ext.size() {
                let y0 = ext.element(yi);
                if fe.evaluate(&x0, &y0).is_zero()
                    && fxe.evaluate(&x0, &y0).is_zero()
                    && fye.evaluate(&x0, &y0).is_zero()
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Outer regularity of the face scheme at a boundary edge: the completed
/// curve must be smooth at the points corresponding to the edge. In the
/// edge chart f = X^* Y^* (g(X) + Y h(X, Y)), the condition is that
/// gcd(g, g') shares no root with h(X, 0).
pub fn outer_regular(fs: &FaceScheme, edge_id: usize) -> StratumVerdict {
    let &(_, (a, b)) = fs
        .boundary
        .iter()
        .find(|(e, _)| *e == edge_id)
        .expect("edge bounds this face");
    // orient the edge counterclockwise around the reduced polygon
    let poly = &fs.reduced_polygon;
    let n = poly.len();
    let (pa, pb) = (0..n)
        .find_map(|i| {
            let (u, v) = (poly[i], poly[(i + 1) % n]);
            if crate::polytope::geom::on_segment(u, v, a)
                && crate::polytope::geom::on_segment(u, v, b)
            {
                Some((u, v))
            } else {
                None
            }
        })
        .expect("boundary edge lies on the reduced polygon");
    let dir = crate::polytope::geom::primitive_dir(pa, pb);
    let (m, nn) = dir;
    let (_, s, t) = ext_gcd(m, nn);
    // m n' - m' n = 1 with (m', n') = (-t, s)
    let (mp, np) = (-t, s);
    debug_assert_eq!(m * np - mp * nn, 1);
    let transformed = fs.poly.apply_unimodular([[np, -nn], [-mp, m]]);
    // in this chart f = X^* Y^* (g(X) + Y h(X, Y)) with h Laurent in X;
    // strip each row's own X-powers, since only unit roots matter
    let ctx = transformed.ctx.clone();
    let min_y = transformed
        .terms()
        .map(|(&(_, j), _)| j)
        .min()
        .expect("nonzero polynomial");
    let row = |level: i64| -> crate::algebra::Dense {
        let terms: Vec<(i64, crate::algebra::Fq)> = transformed
            .terms()
            .filter(|(&(_, j), _)| j == min_y + level)
            .map(|(&(i, _), c)| (i, c.clone()))
            .collect();
        UniPoly::from_terms(ctx.clone(), terms)
            .strip_monomial()
            .to_dense()
    };
    let g = row(0);
    assert!(!g.is_zero(), "edge restriction has the vertex terms");
    let gs = g.gcd(&g.derivative());
    if gs.is_constant() {
        return StratumVerdict {
            smooth: true,
            witness: None,
        };
    }
    let h0 = row(1);
    let shared = if h0.is_zero() { gs.clone() } else { gs.gcd(&h0) };
    if shared.is_constant() {
        StratumVerdict {
            smooth: true,
            witness: None,
        }
    } else {
        StratumVerdict {
            smooth: false,
            witness: Some(format!(
                "completed curve singular above {} boundary point(s)",
                shared.degree()
            )),
        }
    }
}

/// The full regularity verdict for a valued polynomial.
pub fn dv_regular(vp: &VPolynomial, sub: &Subdivision) -> Result<RegularityReport> {
    if sub.zero_volume {
        return Err(Error::ZeroVolume);
    }
    let mut faces = Vec::new();
    let mut face_schemes = Vec::new();
    for f in &sub.faces {
        let fs = reduce_face(vp, sub, f.id);
        faces.push(face_smooth(&fs));
        face_schemes.push(fs);
    }
    let mut edges = Vec::new();
    for e in &sub.edges {
        let verdict = if e.is_inner() || e.delta < sub.faces[e.face1].delta {
            edge_smooth(&reduce_edge(vp, sub, e.id))
        } else {
            outer_regular(&face_schemes[e.face1], e.id)
        };
        edges.push(verdict);
    }
    let regular = faces.iter().chain(edges.iter()).all(|v| v.smooth);
    Ok(RegularityReport {
        regular,
        vertex_only: sub.vertex_only(),
        faces,
        edges,
    })
}

/// Baker data of a (reduced) face: genus, boundary point counts, and the
/// order formulas for monomials and differentials at boundary points.
#[derive(Clone, Debug)]
pub struct BakerData {
    /// |F(Z)_Z|; arithmetic genus when the face is not smooth.
    pub genus: usize,
    pub smooth: bool,
    /// Per boundary v-edge: (edge id, counts of points over F_{q^d} for
    /// d = 1..=depth).
    pub boundary_counts: Vec<(usize, Vec<u128>)>,
}

pub fn baker_data(fs: &FaceScheme, depth: u32) -> Result<BakerData> {
    let genus = interior_lattice_points(&fs.reduced_polygon).len();
    let smooth = face_smooth(fs).smooth
        && fs
            .boundary
            .iter()
            .all(|(e, _)| {
                let r = fs.boundary_restriction(*e).strip_monomial().to_dense();
                r.is_constant() || r.gcd(&r.derivative()).is_constant()
            });
    let mut boundary_counts = Vec::new();
    for (e, _) in &fs.boundary {
        let r = fs.boundary_restriction(*e);
        let mut counts = Vec::new();
        for d in 1..=depth {
            counts.push(count_roots_in_units(&r, d)? as u128);
        }
        boundary_counts.push((*e, counts));
    }
    Ok(BakerData {
        genus,
        smooth,
        boundary_counts,
    })
}

/// Order of the monomial x^i y^j at the boundary points of an edge with
/// star function L*: L*(i, j) - L*(0, 0).
pub fn ord_monomial_at_edge(star: &AffineZ, exp: Pt) -> i64 {
    star.eval(exp) - star.eval((0, 0))
}

/// Order of the differential indexed by (i, j) there: L*(i, j) - 1.
pub fn ord_differential_at_edge(star: &AffineZ, exp: Pt) -> i64 {
    star.eval(exp) - 1
}

/// Convenience: full analysis of regularity from the input alone.
pub fn analyze_regularity(vp: &VPolynomial) -> Result<(Subdivision, RegularityReport)> {
    let sub = Subdivision::lower_hull(vp);
    let report = dv_regular(vp, &sub)?;
    Ok((sub, report))
}

/// Spec-level restriction operation: reduce either kind of stratum.
pub enum ReducedScheme {
    Edge(EdgeScheme),
    Face(FaceScheme),
}

pub fn restrict_and_reduce(
    vp: &VPolynomial,
    sub: &Subdivision,
    stratum: crate::polytope::Stratum,
) -> ReducedScheme {
    match stratum {
        crate::polytope::Stratum::Face(id) => ReducedScheme::Face(reduce_face(vp, sub, id)),
        crate::polytope::Stratum::Edge(id) => ReducedScheme::Edge(reduce_edge(vp, sub, id)),
        crate::polytope::Stratum::Vertex => panic!("vertices have no reduced scheme"),
    }
}

/// Count classification points satisfying a denominator filter, split by
/// face/edge strata (used by several invariants).
pub fn count_lattice_split(
    sub: &Subdivision,
    filter: crate::polytope::DenFilter,
) -> (usize, usize) {
    let cls = classify_lattice_points(sub);
    let f = cls
        .face_points()
        .filter(|pi| filter.admits(pi.den))
        .count();
    let l = cls
        .edge_points()
        .filter(|pi| filter.admits(pi.den))
        .count();
    (f, l)
}
