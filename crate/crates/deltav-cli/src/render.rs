//! DOT and ASCII renderings of the analysis.

use deltav_core::model::{ComponentKind, SpecialFibre};
use deltav_core::polytope::Subdivision;
use num_traits::ToPrimitive;
use std::fmt::Write;

/// DOT graph of the special fibre: one node per face component, one node
/// per chain component class, and one edge per intersection-point orbit
/// carrying the orbit size.
pub fn dot(fibre: &SpecialFibre) -> String {
    let mut out = String::new();
    writeln!(out, "graph special_fibre {{").unwrap();
    // representatives: faces, and chain copies with copy index 0
    let mut node_name = vec![None::<String>; fibre.components.len()];
    for c in &fibre.components {
        match c.kind {
            ComponentKind::Face { face } => {
                let name = format!("F{face}");
                writeln!(
                    out,
                    "  {name} [label=\"F{face} m={} g={}\"];",
                    c.multiplicity, c.genus
                )
                .unwrap();
                node_name[c.id] = Some(name);
            }
            ComponentKind::Chain {
                edge,
                orbit,
                copy,
                position,
            } => {
                if copy != 0 {
                    continue;
                }
                let name = format!("L{edge}o{orbit}k{position}");
                writeln!(
                    out,
                    "  {name} [label=\"L{edge}.{position} m={}\"];",
                    c.multiplicity
                )
                .unwrap();
                node_name[c.id] = Some(name);
            }
        }
    }
    for e in &fibre.intersections {
        let (Some(a), Some(b)) = (&node_name[e.a], &node_name[e.b]) else {
            continue; // non-representative copy
        };
        writeln!(out, "  {a} -- {b} [label=\"orbit {}\"];", e.orbit_size).unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// ASCII table of the subdivision: each lattice point of the polygon with
/// its value of v; a trailing '*' marks hull-tight coefficients of the
/// input (capital convention). Informational only.
pub fn ascii(sub: &Subdivision) -> String {
    let cls = sub.classify();
    let (mut min_i, mut max_i, mut min_j, mut max_j) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for p in &sub.polygon {
        min_i = min_i.min(p.0);
        max_i = max_i.max(p.0);
        min_j = min_j.min(p.1);
        max_j = max_j.max(p.1);
    }
    let mut cells: std::collections::BTreeMap<(i64, i64), String> = Default::default();
    let mut width = 1;
    for pi in &cls.points {
        let tight = sub
            .profile
            .get(&pi.pt)
            .map(|&w| {
                num_rational::BigRational::from(num_bigint::BigInt::from(w)) == pi.v
            })
            .unwrap_or(false);
        let v = if pi.v.is_integer() {
            format!("{}", pi.v.numer())
        } else {
            format!("{}/{}", pi.v.numer(), pi.v.denom())
        };
        let text = if tight { format!("{v}*") } else { v };
        width = width.max(text.len());
        cells.insert(pi.pt, text);
    }
    let _ = width.to_i64();
    let mut out = String::new();
    for j in (min_j..=max_j).rev() {
        let mut row = String::new();
        for i in min_i..=max_i {
            let cell = cells.get(&(i, j)).cloned().unwrap_or_default();
            write!(row, "{cell:>w$} ", w = width).unwrap();
        }
        writeln!(out, "j={j:>2} | {}", row.trim_end()).unwrap();
    }
    let mut axis = String::new();
    for i in min_i..=max_i {
        write!(axis, "{i:>w$} ", w = width).unwrap();
    }
    writeln!(out, "      +{}", "-".repeat(axis.len())).unwrap();
    writeln!(out, "   i: {}", axis.trim_end()).unwrap();
    out
}
