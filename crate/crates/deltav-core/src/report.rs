//! Serializable analysis reports with a versioned schema and
//! deterministic field order. All rationals are emitted as exact
//! numerator/denominator strings.

use crate::curve::VPolynomial;
use crate::elliptic::KodairaResult;
use crate::error::{Error, Result};
use crate::invariants::{
    differential_basis, dual_graph_homology, local_polynomial, reduction_type, tame_inertia,
    tame_pieces,
};
use crate::minimal::{minimal_rnc, FaceClass};
use crate::model::{build_fibre, ComponentKind, SpecialFibre};
use crate::polytope::{Stratum, Subdivision};
use crate::schemes::dv_regular;
use crate::Budget;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "deltav-report/1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Rational {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for Rational {
    fn from(r: &BigRational) -> Self {
        Rational {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FaceDto {
    pub id: usize,
    pub polygon: Vec<(i64, i64)>,
    pub delta: u64,
    pub genus: usize,
    pub vfun: (Rational, Rational, Rational),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeDto {
    pub id: usize,
    pub a: (i64, i64),
    pub b: (i64, i64),
    pub inner: bool,
    pub delta: u64,
    pub slope1: Rational,
    pub slope2: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticePointDto {
    pub pt: (i64, i64),
    pub v: Rational,
    pub den: u64,
    pub stratum: String,
    pub interior: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolytopeDto {
    pub polygon: Vec<(i64, i64)>,
    pub genus: usize,
    pub faces: Vec<FaceDto>,
    pub edges: Vec<EdgeDto>,
    pub vertices: Vec<(i64, i64)>,
    pub lattice_points: Vec<LatticePointDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerdictDto {
    pub smooth: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RegularityDto {
    pub regular: bool,
    pub vertex_only: bool,
    pub faces: Vec<VerdictDto>,
    pub edges: Vec<VerdictDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComponentDto {
    pub id: usize,
    pub kind: String,
    pub multiplicity: u64,
    pub genus: usize,
    pub orbit_size: usize,
    pub flagged_nonregular: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntersectionDto {
    pub a: usize,
    pub b: usize,
    pub via_edge: usize,
    pub orbit_size: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FibreDto {
    pub components: Vec<ComponentDto>,
    pub intersections: Vec<IntersectionDto>,
    pub b1: usize,
    pub connected: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MinimalDto {
    pub components: Vec<ComponentDto>,
    pub intersections: Vec<IntersectionDto>,
    pub self_intersections: Vec<i64>,
    pub contractions: usize,
    pub n_gon_path: bool,
    pub face_classes: Vec<(usize, String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReductionDto {
    pub curve_good: bool,
    pub curve_semistable: bool,
    pub curve_tame: bool,
    pub jacobian_good: bool,
    pub jacobian_semistable: bool,
    pub jacobian_tame: bool,
    pub jacobian_potentially_good: Option<bool>,
    pub jacobian_potentially_totally_toric: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomologyDto {
    pub dimension: usize,
    pub char_poly: Vec<i64>,
    pub trivial_multiplicity: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TameInertiaDto {
    pub abelian_orders: Vec<u64>,
    pub toric_orders: Vec<u64>,
    pub wild_dimension_defect: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LocalPolyDto {
    pub poly: Vec<i64>,
    pub toric_factor: Vec<i64>,
    pub face_factors: Vec<(usize, Vec<i64>)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DifferentialsDto {
    pub exponents: Vec<((i64, i64), i64)>,
    pub orders: Vec<Vec<i64>>,
    pub swapped: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TamePieceDto {
    pub stratum: String,
    pub terms: Vec<((i64, i64), i64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvariantsDto {
    pub reduction: ReductionDto,
    pub homology: HomologyDto,
    pub tame_inertia: TameInertiaDto,
    pub local_polynomial: LocalPolyDto,
    pub differentials: DifferentialsDto,
    pub conductor_semistable: Option<(usize, usize)>,
    pub tame_pieces: Vec<TamePieceDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EllipticDto {
    pub kodaira: String,
    pub tame: bool,
    pub v_interior: Rational,
    pub component_group_order: u64,
    pub iterations: usize,
    pub minimal_components: Vec<ComponentDto>,
    pub mult_one_orbit_sizes: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AnalysisReport {
    pub schema: String,
    pub p: u64,
    pub residue_degree: usize,
    pub polytope: Option<PolytopeDto>,
    pub regularity: Option<RegularityDto>,
    pub special_fibre: Option<FibreDto>,
    pub minimal: Option<MinimalDto>,
    pub invariants: Option<InvariantsDto>,
    pub elliptic: Option<EllipticDto>,
    /// Sections that could not be computed, with stable error codes.
    pub skipped: Vec<(String, String)>,
}

impl AnalysisReport {
    pub fn empty(p: u64, residue_degree: usize) -> Self {
        AnalysisReport {
            schema: SCHEMA.to_string(),
            p,
            residue_degree,
            polytope: None,
            regularity: None,
            special_fibre: None,
            minimal: None,
            invariants: None,
            elliptic: None,
            skipped: Vec::new(),
        }
    }
}

fn stratum_name(s: &Stratum) -> String {
    match s {
        Stratum::Face(id) => format!("face:{id}"),
        Stratum::Edge(id) => format!("edge:{id}"),
        Stratum::Vertex => "vertex".to_string(),
    }
}

pub fn polytope_dto(sub: &Subdivision) -> PolytopeDto {
    let cls = sub.classify();
    PolytopeDto {
        polygon: sub.polygon.clone(),
        genus: sub.genus(),
        faces: sub
            .faces
            .iter()
            .map(|f| FaceDto {
                id: f.id,
                polygon: f.polygon.clone(),
                delta: f.delta,
                genus: f.genus,
                vfun: (
                    Rational::from(&f.vfun.a),
                    Rational::from(&f.vfun.b),
                    Rational::from(&f.vfun.c),
                ),
            })
            .collect(),
        edges: sub
            .edges
            .iter()
            .map(|e| EdgeDto {
                id: e.id,
                a: e.a,
                b: e.b,
                inner: e.is_inner(),
                delta: e.delta,
                slope1: Rational::from(&e.slope1),
                slope2: Rational::from(&e.slope2),
            })
            .collect(),
        vertices: sub.vertices.clone(),
        lattice_points: cls
            .points
            .iter()
            .map(|pi| LatticePointDto {
                pt: pi.pt,
                v: Rational::from(&pi.v),
                den: pi.den,
                stratum: stratum_name(&pi.stratum),
                interior: pi.interior,
            })
            .collect(),
    }
}

fn component_dto(c: &crate::model::Component) -> ComponentDto {
    let kind = match c.kind {
        ComponentKind::Face { face } => format!("face:{face}"),
        ComponentKind::Chain {
            edge,
            orbit,
            copy,
            position,
        } => format!("chain:{edge}.{position} orbit {orbit}.{copy}"),
    };
    ComponentDto {
        id: c.id,
        kind,
        multiplicity: c.multiplicity,
        genus: c.genus,
        orbit_size: c.orbit_size,
        flagged_nonregular: c.flagged_nonregular,
    }
}

pub fn fibre_dto(fibre: &SpecialFibre) -> FibreDto {
    FibreDto {
        components: fibre.components.iter().map(component_dto).collect(),
        intersections: fibre
            .intersections
            .iter()
            .map(|i| IntersectionDto {
                a: i.a,
                b: i.b,
                via_edge: i.via_edge,
                orbit_size: i.orbit_size,
            })
            .collect(),
        b1: fibre.b1(),
        connected: fibre.is_connected(),
    }
}

/// Build the full report for a valued polynomial; sections that hit a
/// domain error are recorded in `skipped` with their stable code.
pub fn analyze(vp: &VPolynomial, budget: &Budget) -> Result<AnalysisReport> {
    let mut report = AnalysisReport::empty(vp.p, vp.field.m);
    let sub = Subdivision::lower_hull(vp);
    if sub.zero_volume {
        return Err(Error::ZeroVolume);
    }
    report.polytope = Some(polytope_dto(&sub));
    let reg = dv_regular(vp, &sub)?;
    report.regularity = Some(RegularityDto {
        regular: reg.regular,
        vertex_only: reg.vertex_only,
        faces: reg
            .faces
            .iter()
            .map(|v| VerdictDto {
                smooth: v.smooth,
                witness: v.witness.clone(),
            })
            .collect(),
        edges: reg
            .edges
            .iter()
            .map(|v| VerdictDto {
                smooth: v.smooth,
                witness: v.witness.clone(),
            })
            .collect(),
    });
    let fibre = build_fibre(vp, &sub, &reg, true, budget)?;
    report.special_fibre = Some(fibre_dto(&fibre));
    match minimal_rnc(vp, budget) {
        Ok(minimal) => {
            report.minimal = Some(MinimalDto {
                components: minimal.fibre.components.iter().map(component_dto).collect(),
                intersections: minimal
                    .fibre
                    .intersections
                    .iter()
                    .map(|i| IntersectionDto {
                        a: i.a,
                        b: i.b,
                        via_edge: i.via_edge,
                        orbit_size: i.orbit_size,
                    })
                    .collect(),
                self_intersections: minimal.fibre.self_intersections.clone(),
                contractions: minimal.fibre.contractions,
                n_gon_path: minimal.n_gon_path,
                face_classes: minimal
                    .classes
                    .iter()
                    .map(|c| {
                        let name = match c.class {
                            FaceClass::Removable => "removable",
                            FaceClass::Contractible => "contractible",
                            FaceClass::Principal => "principal",
                        };
                        (c.face, name.to_string(), c.reason.clone())
                    })
                    .collect(),
            });
        }
        Err(e) => report.skipped.push(("minimal".into(), e.code().into())),
    }
    match invariants_dto(vp, &sub, &fibre, &reg, budget) {
        Ok(inv) => report.invariants = Some(inv),
        Err(e) => report.skipped.push(("invariants".into(), e.code().into())),
    }
    Ok(report)
}

fn invariants_dto(
    vp: &VPolynomial,
    sub: &Subdivision,
    fibre: &SpecialFibre,
    reg: &crate::schemes::RegularityReport,
    budget: &Budget,
) -> Result<InvariantsDto> {
    let reduction = reduction_type(vp, sub, reg)?;
    let homology = dual_graph_homology(sub, fibre)?;
    let inertia = tame_inertia(vp, sub, reg)?;
    let lp = local_polynomial(vp, sub, fibre, budget)?;
    let diffs = differential_basis(vp, sub, reg)?;
    let conductor = if reduction.curve_semistable {
        Some((homology.dimension, homology.trivial_multiplicity))
    } else {
        None
    };
    let pieces = tame_pieces(vp, sub, reg)?;
    Ok(InvariantsDto {
        reduction: ReductionDto {
            curve_good: reduction.curve_good,
            curve_semistable: reduction.curve_semistable,
            curve_tame: reduction.curve_tame,
            jacobian_good: reduction.jacobian_good,
            jacobian_semistable: reduction.jacobian_semistable,
            jacobian_tame: reduction.jacobian_tame,
            jacobian_potentially_good: reduction.jacobian_potentially_good,
            jacobian_potentially_totally_toric: reduction.jacobian_potentially_totally_toric,
        },
        homology: HomologyDto {
            dimension: homology.dimension,
            char_poly: homology.char_poly.clone(),
            trivial_multiplicity: homology.trivial_multiplicity,
        },
        tame_inertia: TameInertiaDto {
            abelian_orders: inertia.abelian_orders.clone(),
            toric_orders: inertia.toric_orders.clone(),
            wild_dimension_defect: inertia.wild_dimension_defect,
        },
        local_polynomial: LocalPolyDto {
            poly: lp.poly.clone(),
            toric_factor: lp.toric_factor.clone(),
            face_factors: lp.face_factors.clone(),
        },
        differentials: DifferentialsDto {
            exponents: diffs.exponents.clone(),
            orders: diffs.orders.clone(),
            swapped: diffs.swapped,
        },
        conductor_semistable: conductor,
        tame_pieces: pieces
            .iter()
            .map(|p| TamePieceDto {
                stratum: stratum_name(&p.stratum),
                terms: p
                    .piece
                    .support_points()
                    .iter()
                    .map(|&pt| (pt, p.piece.valuation(pt)))
                    .collect(),
            })
            .collect(),
    })
}

pub fn elliptic_dto(result: &KodairaResult) -> EllipticDto {
    EllipticDto {
        kodaira: result.kodaira.to_string(),
        tame: result.tame,
        v_interior: Rational::from(&result.v_interior),
        component_group_order: result.component_group_order,
        iterations: result.iterations,
        minimal_components: result
            .minimal
            .fibre
            .components
            .iter()
            .map(component_dto)
            .collect(),
        mult_one_orbit_sizes: result.mult_one_orbit_sizes.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::vpoly_from_integer_terms;

    #[test]
    fn json_round_trip() {
        let c0 = 7i64.pow(5);
        let vp = vpoly_from_integer_terms(
            &[((0, 2), 1), ((3, 1), 7), ((3, 0), 1), ((0, 0), c0)],
            7,
        )
        .unwrap();
        let report = analyze(&vp, &Budget::default()).unwrap();
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        assert_eq!(back.schema, SCHEMA);
        // determinism: serializing twice gives identical bytes
        let json2 = serde_json::to_string_pretty(&analyze(&vp, &Budget::default()).unwrap())
            .unwrap();
        assert_eq!(json, json2);
    }

    #[test]
    fn non_regular_inputs_still_report() {
        // the PSS curve at p = 2
        let vp = vpoly_from_integer_terms(
            &[
                ((3, 3), 3),
                ((2, 3), 6),
                ((1, 2), 9),
                ((3, 1), -2),
                ((0, 1), 6),
                ((2, 0), -4),
                ((1, 0), -6),
                ((0, 0), -4),
            ],
            2,
        )
        .unwrap();
        let report = analyze(&vp, &Budget::default()).unwrap();
        assert!(!report.regularity.as_ref().unwrap().regular);
        assert!(report.special_fibre.is_some());
        assert!(report
            .skipped
            .iter()
            .any(|(section, code)| section == "invariants" && code == "NotRegular"));
    }
}
