//! Kodaira types of elliptic curves: iterate coordinate shifts on a
//! Weierstrass equation until the non-removable part of the subdivision
//! is regular, then classify by the value of v at the interior point.

use crate::curve::VPolynomial;
use crate::error::{Error, Result};
use crate::minimal::{classify_faces, f_nr, minimal_rnc, FaceClass, MinimalModel};
use crate::polytope::{Stratum, Subdivision};
use crate::schemes::{dv_regular, face_singular_witness, reduce_face, RegularityReport};
use crate::Budget;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Exact Weierstrass data a1, .., a6.
#[derive(Clone, Debug)]
pub struct WeierstrassModel {
    pub a1: BigRational,
    pub a2: BigRational,
    pub a3: BigRational,
    pub a4: BigRational,
    pub a6: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

impl WeierstrassModel {
    pub fn new(a: [BigRational; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = a;
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    pub fn from_integers(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Self {
        WeierstrassModel {
            a1: q(a1),
            a2: q(a2),
            a3: q(a3),
            a4: q(a4),
            a6: q(a6),
        }
    }

    pub fn b_invariants(&self) -> (BigRational, BigRational, BigRational, BigRational) {
        let b2 = &self.a1 * &self.a1 + q(4) * &self.a2;
        let b4 = q(2) * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + q(4) * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + q(4) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> BigRational {
        let (b2, b4, b6, b8) = self.b_invariants();
        -&b2 * &b2 * &b8 - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6 + q(9) * &b2 * &b4 * &b6
    }
}

type QPoly = BTreeMap<(i64, i64), BigRational>;

fn wpoly(w: &WeierstrassModel) -> QPoly {
    let mut f = QPoly::new();
    let mut add = |e: (i64, i64), c: BigRational| {
        if c.is_zero() {
            return;
        }
        let entry = f.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            f.remove(&e);
        }
    };
    add((0, 2), BigRational::one());
    add((1, 1), w.a1.clone());
    add((0, 1), w.a3.clone());
    add((3, 0), -BigRational::one());
    add((2, 0), -w.a2.clone());
    add((1, 0), -w.a4.clone());
    add((0, 0), -w.a6.clone());
    f
}

/// Substitute x -> x + r, y -> y + s x + t with exact arithmetic.
fn substitute(f: &QPoly, r: &BigRational, s: &BigRational, t: &BigRational) -> QPoly {
    let mut out = QPoly::new();
    let mut add = |e: (i64, i64), c: BigRational| {
        if c.is_zero() {
            return;
        }
        let entry = out.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            out.remove(&e);
        }
    };
    let binom = |n: i64, k: i64| -> i64 {
        let mut acc = 1i64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    };
    for (&(i, j), c) in f {
        // (x + r)^i * (y + s x + t)^j
        for a in 0..=i {
            let rc = q(binom(i, a)) * pow_rat(r, (i - a) as u32);
            // expand (y + sx + t)^j multinomially; j <= 2 in practice but
            // handle any small j
            for jy in 0..=j {
                for jx in 0..=(j - jy) {
                    let jt = j - jy - jx;
                    let multi = q(multinomial(j, jy, jx, jt));
                    let coeff = &rc * &multi * pow_rat(s, jx as u32) * pow_rat(t, jt as u32) * c;
                    add((a + jx, jy), coeff);
                }
            }
        }
    }
    out
}

fn pow_rat(r: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

fn multinomial(n: i64, a: i64, b: i64, c: i64) -> i64 {
    assert_eq!(a + b + c, n);
    let fact = |m: i64| -> i64 { (1..=m).product::<i64>().max(1) };
    fact(n) / (fact(a) * fact(b) * fact(c))
}

/// Read Weierstrass coefficients back from a shifted equation.
fn read_model(f: &QPoly) -> WeierstrassModel {
    assert_eq!(f.get(&(0, 2)), Some(&BigRational::one()));
    assert_eq!(f.get(&(3, 0)), Some(&(-BigRational::one())));
    let get = |e: (i64, i64)| f.get(&e).cloned().unwrap_or_else(BigRational::zero);
    WeierstrassModel {
        a1: get((1, 1)),
        a3: get((0, 1)),
        a2: -get((2, 0)),
        a4: -get((1, 0)),
        a6: -get((0, 0)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KodairaType {
    /// I_0 is good reduction; I_n with n >= 1 is multiplicative.
    I(u64),
    II,
    III,
    IV,
    IStar(u64),
    IVStar,
    IIIStar,
    IIStar,
}

impl std::fmt::Display for KodairaType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl KodairaType {
    /// Order of the geometric component group, from the classical table.
    pub fn component_group_order(&self) -> u64 {
        match self {
            KodairaType::I(n) => (*n).max(1),
            KodairaType::II | KodairaType::IIStar => 1,
            KodairaType::III | KodairaType::IIIStar => 2,
            KodairaType::IV | KodairaType::IVStar => 3,
            KodairaType::IStar(_) => 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct KodairaResult {
    pub kodaira: KodairaType,
    pub tame: bool,
    /// v at the interior point (1, 1) of the final equation.
    pub v_interior: BigRational,
    /// The final shifted regular equation.
    pub model: WeierstrassModel,
    pub vp: VPolynomial,
    pub minimal: MinimalModel,
    pub component_group_order: u64,
    pub iterations: usize,
    /// Frobenius orbit sizes of the multiplicity-one components of the
    /// minimal fibre.
    pub mult_one_orbit_sizes: Vec<usize>,
}

fn vpoly_of(f: &QPoly, p: u64) -> Result<VPolynomial> {
    let terms: Vec<((i64, i64), BigRational)> =
        f.iter().map(|(&e, c)| (e, c.clone())).collect();
    VPolynomial::from_rational_poly(&terms, p)
}

/// Least non-negative integer lift of an F_p element.
fn lift(a: &crate::algebra::Fq) -> i64 {
    a.as_prime_field().expect("root must be rational") as i64
}

/// Shift prescribed by a failing edge: translate its unique multiple
/// root to zero along the direction read from the slope.
fn edge_shift(
    vp: &VPolynomial,
    sub: &Subdivision,
    edge: usize,
) -> (BigRational, BigRational, BigRational) {
    let e = &sub.edges[edge];
    assert_eq!(e.delta, 1, "failing strata have denominator one");
    // orient by ascending j (vertical and skew) or ascending i (bottom)
    let mut pts = e.lattice.clone();
    let dir = crate::polytope::geom::primitive_dir(e.a, e.b);
    let horizontal = dir.1 == 0;
    if horizontal {
        pts.sort_by_key(|p| p.0);
    } else {
        pts.sort_by_key(|p| p.1);
    }
    let ctx = vp.field.clone();
    let hull = |q: crate::polytope::geom::Pt| sub.v(q);
    let terms: Vec<(i64, crate::algebra::Fq)> = pts
        .iter()
        .enumerate()
        .map(|(k, &q)| {
            let c = match vp.coeff(q) {
                Some(_)
                    if BigRational::from(BigInt::from(vp.valuation(q))) == hull(q) =>
                {
                    vp.unit(q)
                }
                _ => ctx.zero(),
            };
            (k as i64, c)
        })
        .collect();
    let poly = crate::algebra::UniPoly::from_terms(ctx, terms)
        .strip_monomial()
        .to_dense();
    let m = poly.gcd(&poly.derivative());
    let mut roots = crate::algebra::factor::roots_in_field(&m);
    roots.retain(|r| !r.is_zero());
    assert!(
        !roots.is_empty(),
        "multiple roots of low-degree reductions are rational"
    );
    roots.sort_by_key(|r| r.index());
    let alpha = lift(&roots[0]);
    let steps = (pts.len() - 1) as i64;
    let drop = sub.faces[e.face1].vfun.eval(pts[0]) - sub.faces[e.face1].vfun.eval(pts[steps as usize]);
    let d = drop / BigRational::from(BigInt::from(steps));
    assert!(d.is_integer() && !d.is_negative(), "integral slope step");
    let scale = pow_rat(&q(vp.p as i64), d.numer().to_u32().unwrap_or(0));
    let shift = q(alpha) * scale;
    if horizontal {
        (shift, BigRational::zero(), BigRational::zero())
    } else if dir.0 == 0 {
        (BigRational::zero(), BigRational::zero(), shift)
    } else {
        // skew edge: y -> y + alpha p^d x
        (BigRational::zero(), shift, BigRational::zero())
    }
}

/// Shift prescribed by a singular face: translate the singular point of
/// the reduction to the origin.
fn face_shift(
    vp: &VPolynomial,
    sub: &Subdivision,
    face: usize,
) -> (BigRational, BigRational, BigRational) {
    let f = &sub.faces[face];
    assert_eq!(f.delta, 1, "failing faces have denominator one");
    let fs = reduce_face(vp, sub, face);
    let w = face_singular_witness(&fs).expect("face was reported singular");
    assert_eq!(w.field.m, 1, "singular point is rational");
    // chart coordinates back to standard coordinates: with Hermite basis
    // [(1, s), (0, 1)], the torus map is (X, Y) = (x y^s, y)
    let shear = fs.chart.basis[0].1;
    let y0 = w.y.clone();
    let ys = if shear >= 0 {
        y0.pow(shear as u128)
    } else {
        y0.inv().pow((-shear) as u128)
    };
    let x0 = w.x.mul(&ys.inv());
    let alpha = &f.vfun.a;
    let beta = &f.vfun.b;
    assert!(alpha.is_integer() && beta.is_integer());
    let dx = -alpha.numer().to_i64().unwrap();
    let dy = -beta.numer().to_i64().unwrap();
    assert!(dx >= 0 && dy >= 0, "face shifts stay integral");
    let r = q(lift(&x0)) * pow_rat(&q(vp.p as i64), dx as u32);
    let t = q(lift(&y0)) * pow_rat(&q(vp.p as i64), dy as u32);
    (r, BigRational::zero(), t)
}

/// Run the shift loop and classify.
pub fn kodaira_type(w: &WeierstrassModel, p: u64, budget: &Budget) -> Result<KodairaResult> {
    let disc = w.discriminant();
    if disc.is_zero() {
        return Err(Error::SingularCurve);
    }
    // normalize so that all valuations are non-negative
    let mut model = w.clone();
    let mut scale = 0i64;
    for (a, i) in [
        (&model.a1, 1i64),
        (&model.a2, 2),
        (&model.a3, 3),
        (&model.a4, 4),
        (&model.a6, 6),
    ] {
        if a.is_zero() {
            continue;
        }
        let v = crate::curve::rational_valuation(p, a);
        if v < 0 {
            let needed = (-v + i - 1) / i;
            scale = scale.max(needed);
        }
    }
    if scale > 0 {
        let pn = |i: u32| pow_rat(&q(p as i64), i * scale as u32);
        model = WeierstrassModel {
            a1: &model.a1 * pn(1),
            a2: &model.a2 * pn(2),
            a3: &model.a3 * pn(3),
            a4: &model.a4 * pn(4),
            a6: &model.a6 * pn(6),
        };
    }
    let disc0 = model.discriminant();
    let vdisc = crate::curve::rational_valuation(p, &disc0);
    let cap = (12 * vdisc + 24).max(24) as usize;

    let mut f = wpoly(&model);
    let mut iterations = 0usize;
    loop {
        if iterations > cap {
            return Err(Error::NonTermination);
        }
        let vp = vpoly_of(&f, p)?;
        let sub = Subdivision::lower_hull(&vp);
        assert!(!sub.zero_volume, "nonzero discriminant keeps positive area");
        assert_eq!(sub.genus(), 1, "Weierstrass equations have genus one");
        let report = dv_regular(&vp, &sub)?;
        let classes = classify_faces(&sub)?;
        // exit when the non-removable part is regular
        let (check_vp, check_sub, check_report) = match f_nr(&vp, &sub, &classes) {
            Err(Error::AllRemovable) => (vp.clone(), sub.clone(), report.clone()),
            Err(e) => return Err(e),
            Ok(nr) => {
                let nr_sub = Subdivision::lower_hull(&nr);
                let nr_report = dv_regular(&nr, &nr_sub)?;
                (nr, nr_sub, nr_report)
            }
        };
        if check_report.regular {
            return classify(&model, &vp, &sub, &check_sub, budget, iterations);
        }
        // select the prescribed shift from the blocking strata
        let (r, s, t) = select_shift(&check_vp, &check_sub, &check_report);
        let before = read_model(&f).discriminant();
        f = substitute(&f, &r, &s, &t);
        let after = read_model(&f).discriminant();
        assert_eq!(before, after, "shifts preserve the discriminant");
        model = read_model(&f);
        iterations += 1;
    }
}

fn select_shift(
    vp: &VPolynomial,
    sub: &Subdivision,
    report: &RegularityReport,
) -> (BigRational, BigRational, BigRational) {
    for e in &sub.edges {
        if !report.edges[e.id].smooth {
            return edge_shift(vp, sub, e.id);
        }
    }
    for f in &sub.faces {
        if !report.faces[f.id].smooth {
            return face_shift(vp, sub, f.id);
        }
    }
    unreachable!("a non-regular report names a failing stratum")
}

fn classify(
    model: &WeierstrassModel,
    vp: &VPolynomial,
    sub: &Subdivision,
    final_sub: &Subdivision,
    budget: &Budget,
    iterations: usize,
) -> Result<KodairaResult> {
    let p_pt = (1, 1);
    let v_interior = sub.v(p_pt);
    let minimal = minimal_rnc(vp, budget)?;
    let stratum = sub.stratum_of(p_pt);
    let kodaira = match stratum {
        Stratum::Face(_) => {
            let den = v_interior.denom().to_u64().unwrap();
            let frac = &v_interior - v_interior.floor();
            let t = match (frac.numer().to_u64().unwrap(), den) {
                (0, 1) => KodairaType::I(0),
                (1, 6) => KodairaType::II,
                (1, 4) => KodairaType::III,
                (1, 3) => KodairaType::IV,
                (1, 2) => KodairaType::IStar(istar_n(&minimal)),
                (2, 3) => KodairaType::IVStar,
                (3, 4) => KodairaType::IIIStar,
                (5, 6) => KodairaType::IIStar,
                other => unreachable!("face denominators divide 4 or 6: {other:?}"),
            };
            if t == KodairaType::I(0) {
                assert_eq!(minimal.fibre.components.len(), 1);
                assert_eq!(minimal.fibre.components[0].multiplicity, 1);
                assert_eq!(minimal.fibre.components[0].genus, 1);
            }
            t
        }
        Stratum::Edge(id) => match sub.edges[id].delta {
            1 => KodairaType::I(minimal.fibre.components.len() as u64),
            2 => KodairaType::IStar(istar_n(&minimal)),
            d => unreachable!("interior edge through (1,1) has delta 1 or 2, got {d}"),
        },
        Stratum::Vertex => KodairaType::I(minimal.fibre.components.len() as u64),
    };
    // tameness: no principal face of the final model has multiplicity
    // divisible by p
    let classes = classify_faces(final_sub)?;
    let tame = classes
        .iter()
        .filter(|c| c.class == FaceClass::Principal)
        .all(|c| final_sub.faces[c.face].delta % vp.p != 0);
    let mult_one_orbit_sizes: Vec<usize> = minimal
        .fibre
        .components
        .iter()
        .filter(|c| c.multiplicity == 1)
        .map(|c| c.orbit_size)
        .collect();
    let order = kodaira.component_group_order();
    Ok(KodairaResult {
        kodaira,
        tame,
        v_interior,
        model: model.clone(),
        vp: vp.clone(),
        minimal,
        component_group_order: order,
        iterations,
        mult_one_orbit_sizes,
    })
}

fn istar_n(minimal: &MinimalModel) -> u64 {
    let comps = minimal.fibre.components.len() as u64;
    assert!(comps >= 5, "starred fibres have at least five components");
    comps - 5
}
