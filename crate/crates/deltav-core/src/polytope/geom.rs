//! Exact integer 2D geometry helpers: hulls, areas, lattice enumeration.

pub type Pt = (i64, i64);

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Strict convex hull in CCW order (no collinear points kept).
pub fn convex_hull(points: &[Pt]) -> Vec<Pt> {
    let mut pts: Vec<Pt> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Pt> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Pt> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

/// Twice the (positive) area of a CCW polygon.
pub fn area2(poly: &[Pt]) -> i64 {
    let n = poly.len();
    if n < 3 {
        return 0;
    }
    let mut acc = 0i64;
    for i in 0..n {
        let (x1, y1) = poly[i];
        let (x2, y2) = poly[(i + 1) % n];
        acc += x1 * y2 - x2 * y1;
    }
    acc
}

/// Strictly inside a CCW convex polygon.
pub fn strictly_inside(poly: &[Pt], p: Pt) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], p) > 0)
}

/// Inside or on the boundary of a CCW convex polygon.
pub fn inside_or_boundary(poly: &[Pt], p: Pt) -> bool {
    let n = poly.len();
    match n {
        0 => false,
        1 => poly[0] == p,
        2 => on_segment(poly[0], poly[1], p),
        _ => (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], p) >= 0),
    }
}

/// On the closed segment [a, b].
pub fn on_segment(a: Pt, b: Pt, p: Pt) -> bool {
    if cross(a, b, p) != 0 {
        return false;
    }
    let dot = (p.0 - a.0) * (b.0 - a.0) + (p.1 - a.1) * (b.1 - a.1);
    let len2 = (b.0 - a.0).pow(2) + (b.1 - a.1).pow(2);
    dot >= 0 && dot <= len2
}

/// All lattice points in the closed convex polygon (or segment).
pub fn lattice_points(poly: &[Pt]) -> Vec<Pt> {
    if poly.is_empty() {
        return Vec::new();
    }
    if poly.len() == 1 {
        return vec![poly[0]];
    }
    if poly.len() == 2 {
        return segment_lattice_points(poly[0], poly[1]);
    }
    let (minx, maxx) = poly
        .iter()
        .fold((i64::MAX, i64::MIN), |(a, b), &(x, _)| (a.min(x), b.max(x)));
    let (miny, maxy) = poly
        .iter()
        .fold((i64::MAX, i64::MIN), |(a, b), &(_, y)| (a.min(y), b.max(y)));
    let mut out = Vec::new();
    for x in minx..=maxx {
        for y in miny..=maxy {
            if inside_or_boundary(poly, (x, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Lattice points strictly inside a CCW convex polygon.
pub fn interior_lattice_points(poly: &[Pt]) -> Vec<Pt> {
    lattice_points(poly)
        .into_iter()
        .filter(|&p| strictly_inside(poly, p))
        .collect()
}

/// Lattice points of the closed segment [a, b], ordered from a to b.
pub fn segment_lattice_points(a: Pt, b: Pt) -> Vec<Pt> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let g = gcd_i64(dx, dy);
    if g == 0 {
        return vec![a];
    }
    let step = (dx / g, dy / g);
    (0..=g)
        .map(|k| (a.0 + k * step.0, a.1 + k * step.1))
        .collect()
}

/// Primitive direction from a to b.
pub fn primitive_dir(a: Pt, b: Pt) -> Pt {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let g = gcd_i64(dx, dy);
    assert!(g > 0, "degenerate segment");
    (dx / g, dy / g)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let sign = if a < 0 { -1 } else { 1 };
        return (a.abs(), sign, 0);
    }
    let (g, s, t) = ext_gcd(b, a % b);
    (g, t, s - (a / b) * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_triangle_with_inner_points() {
        let pts = vec![(0, 0), (6, 0), (0, 3), (3, 0), (0, 2), (1, 1)];
        let h = convex_hull(&pts);
        assert_eq!(h, vec![(0, 0), (6, 0), (0, 3)]);
        assert_eq!(area2(&h), 18);
    }

    #[test]
    fn lattice_enumeration() {
        let tri = vec![(0, 0), (3, 0), (0, 2)];
        let all = lattice_points(&tri);
        // (0,0),(1,0),(2,0),(3,0),(0,1),(1,1),(0,2)
        assert_eq!(all.len(), 7);
        let interior = interior_lattice_points(&tri);
        assert_eq!(interior, vec![(1, 1)]);
    }

    #[test]
    fn segment_points() {
        assert_eq!(
            segment_lattice_points((0, 2), (3, 0)),
            vec![(0, 2), (3, 0)]
        );
        assert_eq!(
            segment_lattice_points((0, 3), (3, 0)),
            vec![(0, 3), (1, 2), (2, 1), (3, 0)]
        );
    }
}
