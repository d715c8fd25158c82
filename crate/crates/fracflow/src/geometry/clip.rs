//! Convex polygon clipping and fan triangulation in the fracture plane.
//!
//! Everything here works on convex polygons with counter-clockwise vertex
//! order, which covers all cross-section polygons and mesh triangles.

use nalgebra::Vector2;

/// Signed area of a polygon (positive for counter-clockwise order).
pub fn polygon_area(poly: &[Vector2<f64>]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        sum += a.x * b.y - b.x * a.y;
    }
    0.5 * sum
}

pub fn polygon_centroid(poly: &[Vector2<f64>]) -> Vector2<f64> {
    let n = poly.len() as f64;
    poly.iter().sum::<Vector2<f64>>() / n
}

/// Clips `poly` against the half-plane `a*x + b*y + c >= 0`
/// (Sutherland-Hodgman step for a single edge).
pub fn clip_halfplane(poly: &[Vector2<f64>], a: f64, b: f64, c: f64) -> Vec<Vector2<f64>> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    let side = |p: Vector2<f64>| a * p.x + b * p.y + c;
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let sp = side(p);
        let sq = side(q);
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
            let t = sp / (sp - sq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

/// Intersection of a convex polygon with a triangle, fan-triangulated from
/// the centroid. Returns an empty list for measure-zero intersections.
pub fn clip_cross_section_with_triangle(
    poly: &[Vector2<f64>],
    tri: &[Vector2<f64>; 3],
) -> Vec<[Vector2<f64>; 3]> {
    let clipped = clip_polygon_with_triangle(poly, tri);
    fan_triangulate(&clipped)
}

/// Intersection polygon of a convex polygon with a triangle.
pub fn clip_polygon_with_triangle(
    poly: &[Vector2<f64>],
    tri: &[Vector2<f64>; 3],
) -> Vec<Vector2<f64>> {
    let mut current = poly.to_vec();
    for i in 0..3 {
        let p = tri[i];
        let q = tri[(i + 1) % 3];
        // inward half-plane of the CCW triangle edge p -> q
        let a = -(q.y - p.y);
        let b = q.x - p.x;
        let c = -(a * p.x + b * p.y);
        current = clip_halfplane(&current, a, b, c);
        if current.len() < 3 {
            return Vec::new();
        }
    }
    current
}

/// Fan triangulation of a convex polygon from its centroid; degenerate
/// slivers are dropped.
pub fn fan_triangulate(poly: &[Vector2<f64>]) -> Vec<[Vector2<f64>; 3]> {
    let n = poly.len();
    if n < 3 {
        return Vec::new();
    }
    let total = polygon_area(poly).abs();
    if total < 1e-300 {
        return Vec::new();
    }
    if n == 3 {
        return vec![[poly[0], poly[1], poly[2]]];
    }
    let c = polygon_centroid(poly);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let tri = [c, poly[i], poly[(i + 1) % n]];
        if polygon_area(&tri).abs() > 1e-14 * total {
            out.push(tri);
        }
    }
    out
}
