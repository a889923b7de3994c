//! The Newton polygon, its regular subdivision induced by coefficient
//! valuations, lattice-point classification, denominators, stars and
//! slopes.

pub mod geom;
pub mod hj;

pub use hj::{chain_determinants_ok, hj_chain, is_minimal_chain, Frac};

use crate::curve::VPolynomial;
use crate::error::Result;
use geom::{
    area2, convex_hull, cross, interior_lattice_points, lattice_points, on_segment, primitive_dir,
    segment_lattice_points, strictly_inside, Pt,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

/// Exact affine function (i, j) -> a*i + b*j + c on the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineQ {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl AffineQ {
    pub fn eval(&self, pt: Pt) -> BigRational {
        &self.a * BigRational::from(BigInt::from(pt.0))
            + &self.b * BigRational::from(BigInt::from(pt.1))
            + &self.c
    }
}

/// Integer affine function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineZ {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl AffineZ {
    pub fn eval(&self, pt: Pt) -> i64 {
        self.a * pt.0 + self.b * pt.1 + self.c
    }
}

#[derive(Clone, Debug)]
pub struct VFace {
    pub id: usize,
    /// CCW vertex list.
    pub polygon: Vec<Pt>,
    /// The affine function matching v on this face.
    pub vfun: AffineQ,
    /// Common denominator of v on the closure lattice points.
    pub delta: u64,
    /// |F(Z)_Z|: interior lattice points with integral v.
    pub genus: usize,
    pub interior_integral: Vec<Pt>,
    /// Closure lattice points with integral v (the restriction support).
    pub closure_integral: Vec<Pt>,
    /// Ids of the v-edges bounding this face.
    pub boundary_edges: Vec<usize>,
}

impl VFace {
    /// F*: the integer affine map equal to -delta * v on the closure.
    pub fn star(&self) -> AffineZ {
        let d = BigRational::from(BigInt::from(self.delta));
        let a = -(&self.vfun.a) * &d;
        let b = -(&self.vfun.b) * &d;
        let c = -(&self.vfun.c) * &d;
        let to_int = |r: &BigRational| -> i64 {
            assert!(r.is_integer(), "face star must be integral");
            r.numer().to_i64().unwrap()
        };
        AffineZ {
            a: to_int(&a),
            b: to_int(&b),
            c: to_int(&c),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VEdge {
    pub id: usize,
    pub a: Pt,
    pub b: Pt,
    /// Owning face for orientation and slope conventions.
    pub face1: usize,
    /// Second adjacent face; present exactly for inner edges.
    pub face2: Option<usize>,
    /// Common denominator of v on the closed edge's lattice points.
    pub delta: u64,
    /// Slopes [s1, s2] computed from the documented base points; only the
    /// simultaneous-integer-shift class is canonical.
    pub slope1: BigRational,
    pub slope2: BigRational,
    /// L* with respect to face1: zero on the edge, >= 0 on face1,
    /// surjective onto Z.
    pub star1: AffineZ,
    /// Slope base points: P0 on the edge line, P1 at star level 1.
    pub base0: Pt,
    pub base1: Pt,
    /// All lattice points of the closed edge, ordered from `a` to `b`.
    pub lattice: Vec<Pt>,
    /// Lattice points with integral v (the restriction support).
    pub closure_integral: Vec<Pt>,
}

impl VEdge {
    pub fn is_inner(&self) -> bool {
        self.face2.is_some()
    }

    /// L* with respect to the second face (inner edges only).
    pub fn star2(&self) -> AffineZ {
        assert!(self.is_inner());
        AffineZ {
            a: -self.star1.a,
            b: -self.star1.b,
            c: -self.star1.c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stratum {
    Face(usize),
    Edge(usize),
    Vertex,
}

#[derive(Clone, Debug)]
pub struct PointInfo {
    pub pt: Pt,
    pub v: BigRational,
    pub den: u64,
    pub stratum: Stratum,
    /// Interior of the whole polygon.
    pub interior: bool,
}

/// Classification of all lattice points of the closed polygon.
#[derive(Clone, Debug)]
pub struct Classification {
    pub points: Vec<PointInfo>,
}

impl Classification {
    /// Interior points (the genus count set).
    pub fn delta_z(&self) -> impl Iterator<Item = &PointInfo> {
        self.points.iter().filter(|p| p.interior)
    }

    /// Interior points inside some v-face.
    pub fn face_points(&self) -> impl Iterator<Item = &PointInfo> {
        self.delta_z()
            .filter(|p| matches!(p.stratum, Stratum::Face(_)))
    }

    /// Interior points on v-edges or v-vertices.
    pub fn edge_points(&self) -> impl Iterator<Item = &PointInfo> {
        self.delta_z()
            .filter(|p| !matches!(p.stratum, Stratum::Face(_)))
    }

    pub fn genus(&self) -> usize {
        self.delta_z().count()
    }
}

/// Restriction on v(P) used in the subscript filters.
#[derive(Clone, Copy, Debug)]
pub enum DenFilter {
    /// v(P) integral.
    Integral,
    /// p does not divide den v(P).
    PrimeTo(u64),
    /// den v(P) divides e.
    Divides(u64),
    /// No restriction.
    All,
}

impl DenFilter {
    pub fn admits(&self, den: u64) -> bool {
        match self {
            DenFilter::Integral => den == 1,
            DenFilter::PrimeTo(p) => den % p != 0,
            DenFilter::Divides(e) => e % den == 0,
            DenFilter::All => true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    /// CCW vertex list of the Newton polygon (2 points for a segment).
    pub polygon: Vec<Pt>,
    pub faces: Vec<VFace>,
    pub edges: Vec<VEdge>,
    /// v-vertices: projections of the polytope's 0-faces.
    pub vertices: Vec<Pt>,
    pub zero_volume: bool,
    /// For segments: the v-edges along the segment.
    pub segment_pieces: Vec<(Pt, Pt)>,
    /// The input valuations, kept for hull-tightness checks.
    pub profile: BTreeMap<Pt, i64>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn den_u64(r: &BigRational) -> u64 {
    r.denom().to_u64().expect("denominator fits in u64")
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Plane through three lifted points, if affinely independent.
fn plane_through(p1: (Pt, i64), p2: (Pt, i64), p3: (Pt, i64)) -> Option<AffineQ> {
    let det = cross(p1.0, p2.0, p3.0);
    if det == 0 {
        return None;
    }
    // solve [i j 1][a b c]^T = w by Cramer's rule
    let d = rat(det);
    let (i1, j1, w1) = (p1.0 .0, p1.0 .1, p1.1);
    let (i2, j2, w2) = (p2.0 .0, p2.0 .1, p2.1);
    let (i3, j3, w3) = (p3.0 .0, p3.0 .1, p3.1);
    let da = rat(w1 * (j2 - j3) - w2 * (j1 - j3) + w3 * (j1 - j2));
    let db = rat(i1 * (w2 - w3) - i2 * (w1 - w3) + i3 * (w1 - w2));
    let dc = rat(i1 * (j2 * w3 - j3 * w2) - i2 * (j1 * w3 - j3 * w1) + i3 * (j1 * w2 - j2 * w1));
    Some(AffineQ {
        a: da / &d,
        b: db / &d,
        c: dc / &d,
    })
}

impl Subdivision {
    /// Lower hull of the lifted support of a valued polynomial.
    pub fn lower_hull(vp: &VPolynomial) -> Subdivision {
        let profile: Vec<(Pt, i64)> = vp.profile().into_iter().collect();
        Subdivision::from_profile(&profile)
    }

    /// Build the subdivision from raw (point, valuation) data, by
    /// supporting-plane search over support triples with exact rational
    /// arithmetic, then merging coplanar touch sets.
    pub fn from_profile(profile: &[(Pt, i64)]) -> Subdivision {
        assert!(profile.len() >= 2, "need at least two support points");
        let pts: Vec<Pt> = profile.iter().map(|&(p, _)| p).collect();
        let pmap: BTreeMap<Pt, i64> = profile.iter().copied().collect();
        let hull = convex_hull(&pts);
        if area2(&hull) == 0 {
            return Self::segment_subdivision(&hull, profile);
        }

        // collect valid supporting planes
        type Key = (
            (BigInt, BigInt),
            (BigInt, BigInt),
            (BigInt, BigInt),
        );
        let mut planes: BTreeMap<Key, AffineQ> = BTreeMap::new();
        let n = profile.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let Some(pl) = plane_through(profile[i], profile[j], profile[k]) else {
                        continue;
                    };
                    let supports = profile
                        .iter()
                        .all(|&(q, w)| pl.eval(q) <= rat(w));
                    if !supports {
                        continue;
                    }
                    let key = (
                        (pl.a.numer().clone(), pl.a.denom().clone()),
                        (pl.b.numer().clone(), pl.b.denom().clone()),
                        (pl.c.numer().clone(), pl.c.denom().clone()),
                    );
                    planes.entry(key).or_insert(pl);
                }
            }
        }

        // faces: planes whose touch set has positive area
        let mut faces: Vec<VFace> = Vec::new();
        for pl in planes.values() {
            let touch: Vec<Pt> = profile
                .iter()
                .filter(|&&(q, w)| pl.eval(q) == rat(w))
                .map(|&(q, _)| q)
                .collect();
            let poly = convex_hull(&touch);
            if area2(&poly) <= 0 {
                continue;
            }
            let id = faces.len();
            let closure = lattice_points(&poly);
            let interior = interior_lattice_points(&poly);
            let mut delta = 1u64;
            for &q in &closure {
                delta = lcm_u64(delta, den_u64(&pl.eval(q)));
            }
            let closure_integral: Vec<Pt> = closure
                .iter()
                .copied()
                .filter(|&q| pl.eval(q).is_integer())
                .collect();
            let interior_integral: Vec<Pt> = interior
                .iter()
                .copied()
                .filter(|&q| pl.eval(q).is_integer())
                .collect();
            faces.push(VFace {
                id,
                polygon: poly,
                vfun: pl.clone(),
                delta,
                genus: interior_integral.len(),
                interior_integral,
                closure_integral,
                boundary_edges: Vec::new(),
            });
        }
        assert!(!faces.is_empty(), "positive-area polygon must have faces");
        let total: i64 = faces.iter().map(|f| area2(&f.polygon)).sum();
        assert_eq!(total, area2(&hull), "faces must tile the polygon");

        // edges: shared polygon sides (inner) and sides on the boundary
        let mut seg_faces: BTreeMap<(Pt, Pt), Vec<usize>> = BTreeMap::new();
        for f in &faces {
            let m = f.polygon.len();
            for i in 0..m {
                let (u, v) = (f.polygon[i], f.polygon[(i + 1) % m]);
                let key = if u <= v { (u, v) } else { (v, u) };
                seg_faces.entry(key).or_default().push(f.id);
            }
        }
        let mut edges: Vec<VEdge> = Vec::new();
        for ((a, b), mut fids) in seg_faces {
            fids.sort_unstable();
            assert!(fids.len() <= 2, "a side bounds at most two faces");
            let face1 = fids[0];
            let face2 = fids.get(1).copied();
            if face2.is_none() {
                let on_boundary = (0..hull.len()).any(|i| {
                    let (ha, hb) = (hull[i], hull[(i + 1) % hull.len()]);
                    on_segment(ha, hb, a) && on_segment(ha, hb, b)
                });
                assert!(on_boundary, "outer side must lie on the polygon boundary");
            }
            let id = edges.len();
            let lattice = segment_lattice_points(a, b);
            let vfun1 = faces[face1].vfun.clone();
            let mut delta = 1u64;
            for &q in &lattice {
                delta = lcm_u64(delta, den_u64(&vfun1.eval(q)));
            }
            let closure_integral: Vec<Pt> = lattice
                .iter()
                .copied()
                .filter(|&q| vfun1.eval(q).is_integer())
                .collect();
            let star1 = edge_star(a, b, &faces[face1].polygon);
            let (base0, base1) = slope_base_points(a, b, &star1, &lattice);
            let dl = rat(delta as i64);
            let slope1 = (&vfun1.eval(base1) - &vfun1.eval(base0)) * &dl;
            let slope2 = match face2 {
                Some(f2) => {
                    let vfun2 = faces[f2].vfun.clone();
                    (&vfun2.eval(base1) - &vfun2.eval(base0)) * &dl
                }
                None => rat(slope1.floor().numer().to_i64().unwrap() - 1),
            };
            edges.push(VEdge {
                id,
                a,
                b,
                face1,
                face2,
                delta,
                slope1,
                slope2,
                star1,
                base0,
                base1,
                lattice,
                closure_integral,
            });
        }
        for e in &edges {
            assert_eq!(
                faces[e.face1].delta % e.delta,
                0,
                "edge denominator divides the face denominator"
            );
            if let Some(f2) = e.face2 {
                assert_eq!(faces[f2].delta % e.delta, 0);
            }
        }
        for e in &edges {
            faces[e.face1].boundary_edges.push(e.id);
            if let Some(f2) = e.face2 {
                faces[f2].boundary_edges.push(e.id);
            }
        }
        let mut vertices: Vec<Pt> = faces
            .iter()
            .flat_map(|f| f.polygon.iter().copied())
            .collect();
        vertices.sort();
        vertices.dedup();

        Subdivision {
            polygon: hull,
            faces,
            edges,
            vertices,
            zero_volume: false,
            segment_pieces: Vec::new(),
            profile: pmap,
        }
    }

    fn segment_subdivision(hull: &[Pt], profile: &[(Pt, i64)]) -> Subdivision {
        // one-dimensional lower hull along the segment
        let (a, b) = (hull[0], *hull.last().unwrap());
        let dir = primitive_dir(a, b);
        let mut lifted: Vec<(i64, i64)> = profile
            .iter()
            .map(|&((x, y), w)| {
                let t = if dir.0 != 0 {
                    (x - a.0) / dir.0
                } else {
                    (y - a.1) / dir.1
                };
                (t, w)
            })
            .collect();
        lifted.sort();
        let mut chain: Vec<(i64, i64)> = Vec::new();
        for &p in &lifted {
            while chain.len() >= 2 {
                let (t1, w1) = chain[chain.len() - 2];
                let (t2, w2) = chain[chain.len() - 1];
                // keep strict lower convexity
                if (w2 - w1) * (p.0 - t1) >= (p.1 - w1) * (t2 - t1) {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(p);
        }
        let vertices: Vec<Pt> = chain
            .iter()
            .map(|&(t, _)| (a.0 + t * dir.0, a.1 + t * dir.1))
            .collect();
        let segment_pieces: Vec<(Pt, Pt)> = vertices.windows(2).map(|w| (w[0], w[1])).collect();
        Subdivision {
            polygon: hull.to_vec(),
            faces: Vec::new(),
            edges: Vec::new(),
            vertices,
            zero_volume: true,
            segment_pieces,
            profile: profile.iter().copied().collect(),
        }
    }

    /// The hull function at a point of the polygon: the maximum of the
    /// face functions (each face function is a supporting affine
    /// minorant of the convex hull function).
    pub fn v(&self, pt: Pt) -> BigRational {
        assert!(!self.zero_volume, "hull values need a positive-area polygon");
        self.faces
            .iter()
            .map(|f| f.vfun.eval(pt))
            .max()
            .expect("at least one face")
    }

    /// Stratum containing a lattice point of the closed polygon.
    pub fn stratum_of(&self, pt: Pt) -> Stratum {
        for f in &self.faces {
            if strictly_inside(&f.polygon, pt) {
                return Stratum::Face(f.id);
            }
        }
        for e in &self.edges {
            if on_segment(e.a, e.b, pt) && pt != e.a && pt != e.b {
                return Stratum::Edge(e.id);
            }
        }
        assert!(
            self.vertices.contains(&pt),
            "point {pt:?} must be a v-vertex"
        );
        Stratum::Vertex
    }

    /// Classify every lattice point of the closed polygon.
    pub fn classify(&self) -> Classification {
        assert!(!self.zero_volume);
        let mut points = Vec::new();
        for pt in lattice_points(&self.polygon) {
            let v = self.v(pt);
            points.push(PointInfo {
                pt,
                den: den_u64(&v),
                v,
                stratum: self.stratum_of(pt),
                interior: strictly_inside(&self.polygon, pt),
            });
        }
        Classification { points }
    }

    /// Genus of the curve: interior lattice points of the polygon.
    pub fn genus(&self) -> usize {
        if self.zero_volume {
            return 0;
        }
        interior_lattice_points(&self.polygon).len()
    }

    /// All lattice points of the polytope's lower boundary with integral
    /// height are vertices (0-faces).
    pub fn vertex_only(&self) -> bool {
        self.classify()
            .points
            .iter()
            .all(|pi| pi.den > 1 || self.vertices.contains(&pi.pt))
    }

    /// The minimal (or full Farey) determinant-one chain at an edge, from
    /// slope1 down to slope2.
    pub fn edge_chain(&self, edge: usize, minimal: bool, max_farey: usize) -> Result<Vec<Frac>> {
        let e = &self.edges[edge];
        hj_chain(&e.slope1, &e.slope2, minimal, max_farey)
    }
}

/// The unique affine Z^2 ->> Z vanishing on the segment, non-negative on
/// the reference polygon.
pub fn edge_star(a: Pt, b: Pt, polygon: &[Pt]) -> AffineZ {
    let u = primitive_dir(a, b);
    // form vanishing on direction u
    let (fa, fb) = (-u.1, u.0);
    let c = -(fa * a.0 + fb * a.1);
    let mut star = AffineZ { a: fa, b: fb, c };
    let witness = polygon
        .iter()
        .find(|&&q| star.eval(q) != 0)
        .expect("polygon has a vertex off the edge line");
    if star.eval(*witness) < 0 {
        star = AffineZ {
            a: -star.a,
            b: -star.b,
            c: -star.c,
        };
    }
    star
}

/// Stars for all sides of a convex lattice polygon (the outer-polygon
/// variant used by the boundary-order formulas).
pub fn polygon_edge_stars(polygon: &[Pt]) -> Vec<((Pt, Pt), AffineZ)> {
    let n = polygon.len();
    (0..n)
        .map(|i| {
            let (a, b) = (polygon[i], polygon[(i + 1) % n]);
            ((a, b), edge_star(a, b, polygon))
        })
        .collect()
}

/// Deterministic slope base points: P0 is the lexicographically least
/// lattice point of the closed edge (an endpoint), and P1 solves
/// star(P1) = 1 with the translation along the edge direction reduced
/// canonically.
fn slope_base_points(a: Pt, b: Pt, star: &AffineZ, lattice: &[Pt]) -> (Pt, Pt) {
    let p0 = *lattice.iter().min().expect("closed edge has lattice points");
    let u = primitive_dir(a, b);
    // particular solution of star(P) = 1
    let (g, s, t) = geom::ext_gcd(star.a, star.b);
    assert_eq!(g.abs(), 1, "edge star is surjective");
    let sgn = g.signum();
    let rhs = 1 - star.c;
    let mut p1 = (s * sgn * rhs, t * sgn * rhs);
    debug_assert_eq!(star.eval(p1), 1);
    // reduce along u so that 0 <= <P1 - P0, u> < <u, u>
    let uu = u.0 * u.0 + u.1 * u.1;
    let dot = (p1.0 - p0.0) * u.0 + (p1.1 - p0.1) * u.1;
    let k = dot.div_euclid(uu);
    p1 = (p1.0 - k * u.0, p1.1 - k * u.1);
    (p0, p1)
}

/// Spec-level wrapper: compute the subdivision of a valued polynomial.
pub fn lower_hull(vp: &VPolynomial) -> Subdivision {
    Subdivision::lower_hull(vp)
}

/// Spec-level wrapper: classify lattice points.
pub fn classify_lattice_points(sub: &Subdivision) -> Classification {
    sub.classify()
}

/// Spec-level wrapper: the slope pair at an edge.
pub fn slopes(sub: &Subdivision, edge: usize) -> (BigRational, BigRational) {
    let e = &sub.edges[edge];
    (e.slope1.clone(), e.slope2.clone())
}

/// Face star accessor matching the operation list.
pub fn face_star(face: &VFace) -> AffineZ {
    face.star()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::vpoly_from_integer_terms;
    use num_traits::Zero;

    fn intro_curve(p: u64) -> VPolynomial {
        let c0 = (p as i64).pow(5);
        vpoly_from_integer_terms(
            &[((0, 2), 1), ((3, 1), p as i64), ((3, 0), 1), ((0, 0), c0)],
            p,
        )
        .unwrap()
    }

    #[test]
    fn intro_curve_subdivision() {
        let sub = Subdivision::lower_hull(&intro_curve(7));
        assert_eq!(sub.faces.len(), 2);
        let mut deltas: Vec<u64> = sub.faces.iter().map(|f| f.delta).collect();
        deltas.sort_unstable();
        assert_eq!(deltas, vec![3, 6]);
        assert_eq!(sub.edges.len(), 5);
        let inner = sub.edges.iter().filter(|e| e.is_inner()).count();
        assert_eq!(inner, 1);
        assert_eq!(sub.genus(), 2);
        assert!(sub.vertex_only());
    }

    #[test]
    fn intro_curve_interior_values() {
        let sub = Subdivision::lower_hull(&intro_curve(5));
        let cls = sub.classify();
        let mut interior: Vec<(Pt, BigRational)> = cls
            .delta_z()
            .map(|pi| (pi.pt, pi.v.clone()))
            .collect();
        interior.sort_by_key(|x| x.0);
        assert_eq!(interior.len(), 2);
        assert_eq!(interior[0].0, (1, 1));
        assert_eq!(interior[0].1, BigRational::new(5.into(), 6.into()));
        assert_eq!(interior[1].0, (2, 1));
        assert_eq!(interior[1].1, BigRational::new(1.into(), 3.into()));
        // both lie in face interiors
        assert_eq!(cls.face_points().count(), 2);
        assert_eq!(cls.edge_points().count(), 0);
    }

    #[test]
    fn intro_inner_slopes() {
        let sub = Subdivision::lower_hull(&intro_curve(7));
        let e = sub.edges.iter().find(|e| e.is_inner()).unwrap();
        assert_eq!(e.delta, 1);
        // documented base points give (5/6, -1/3)
        assert_eq!(e.slope1, BigRational::new(5.into(), 6.into()));
        assert_eq!(e.slope2, BigRational::new((-1).into(), 3.into()));
    }

    #[test]
    fn exc1_subdivision() {
        // y^3 + y^2 + p^3 x^6 + p x^3 + p^3
        let p = 7i64;
        let vp = vpoly_from_integer_terms(
            &[
                ((0, 3), 1),
                ((0, 2), 1),
                ((6, 0), p.pow(3)),
                ((3, 0), p),
                ((0, 0), p.pow(3)),
            ],
            p as u64,
        )
        .unwrap();
        let sub = Subdivision::lower_hull(&vp);
        let mut fd: Vec<u64> = sub.faces.iter().map(|f| f.delta).collect();
        fd.sort_unstable();
        assert_eq!(fd, vec![3, 3, 6]);
        let mut ed: Vec<u64> = sub.edges.iter().map(|e| e.delta).collect();
        ed.sort_unstable();
        assert_eq!(ed, vec![1, 1, 1, 2, 3, 3, 3]);
        assert_eq!(sub.vertices.len(), 5);
        let cls = sub.classify();
        assert_eq!(cls.genus(), 4);
        assert_eq!(cls.face_points().count(), 2);
        assert_eq!(cls.edge_points().count(), 2);
    }

    #[test]
    fn single_face_weierstrass() {
        // y^2 - x^3 - p: one face with denominator 6
        let vp = vpoly_from_integer_terms(&[((0, 2), 1), ((3, 0), -1), ((0, 0), -7)], 7).unwrap();
        let sub = Subdivision::lower_hull(&vp);
        assert_eq!(sub.faces.len(), 1);
        assert_eq!(sub.faces[0].delta, 6);
        let cls = sub.classify();
        let interior: Vec<&PointInfo> = cls.delta_z().collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(interior[0].pt, (1, 1));
        assert_eq!(interior[0].v, BigRational::new(1.into(), 6.into()));
        // face star: 2i + 3j - 6
        let star = sub.faces[0].star();
        assert_eq!((star.a, star.b, star.c), (2, 3, -6));
    }

    #[test]
    fn deficient_quartic_face_star() {
        // y^2 = p x^4 + p^3: star is i + 3j - 6
        let vp = vpoly_from_integer_terms(&[((0, 2), 1), ((4, 0), -5), ((0, 0), -125)], 5).unwrap();
        let sub = Subdivision::lower_hull(&vp);
        assert_eq!(sub.faces.len(), 1);
        assert_eq!(sub.faces[0].delta, 2);
        assert_eq!(sub.faces[0].genus, 1);
        let star = sub.faces[0].star();
        assert_eq!((star.a, star.b, star.c), (1, 3, -6));
    }

    #[test]
    fn constant_valuation_star_is_zero() {
        let vp = vpoly_from_integer_terms(&[((0, 2), 1), ((3, 0), -1), ((1, 0), -1)], 7).unwrap();
        let sub = Subdivision::lower_hull(&vp);
        let f = sub
            .faces
            .iter()
            .find(|f| f.vfun.a.is_zero() && f.vfun.b.is_zero() && f.vfun.c.is_zero())
            .expect("constant face");
        let star = f.star();
        assert_eq!((star.a, star.b, star.c), (0, 0, 0));
    }

    #[test]
    fn segment_support_is_zero_volume() {
        let vp = vpoly_from_integer_terms(&[((0, 0), 7), ((1, 0), 1), ((2, 0), 1)], 7).unwrap();
        let sub = Subdivision::lower_hull(&vp);
        assert!(sub.zero_volume);
        assert_eq!(sub.genus(), 0);
        // v-vertices where the 1D hull bends: (0,0) at height 1, (1,0), (2,0) at 0
        assert_eq!(sub.segment_pieces.len(), 2);
    }
}
