//! Triangular meshes on the fracture plane.

use nalgebra::Vector2;

use crate::{Error, Result};
use super::clip::polygon_area;
use super::fracture::FractureGeometry;

/// Conforming triangulation of the fracture polygon, in the local frame.
/// Boundary edge tags index the polygon edge the mesh edge lies on.
#[derive(Debug, Clone)]
pub struct Mesh2D {
    pub vertices: Vec<Vector2<f64>>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<([usize; 2], i32)>,
    pub delta: f64,
}

impl Mesh2D {
    pub fn triangle_vertices(&self, t: usize) -> [Vector2<f64>; 3] {
        let idx = self.triangles[t];
        [
            self.vertices[idx[0]],
            self.vertices[idx[1]],
            self.vertices[idx[2]],
        ]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        polygon_area(&self.triangle_vertices(t))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }
}

/// Structured triangulation of the fracture polygon with maximum element
/// diameter at most `target_h`. Only axis-aligned rectangles (in the local
/// frame) are generated here; other polygons must be imported.
pub fn generate_fracture_tri_mesh(frac: &FractureGeometry, target_h: f64) -> Result<Mesh2D> {
    if target_h <= 0.0 {
        return Err(Error::DegeneratePolygon("target size must be positive".into()));
    }
    let rect = as_axis_rectangle(&frac.polygon).ok_or_else(|| {
        Error::DegeneratePolygon(
            "built-in fracture mesher supports axis-aligned rectangles; import a TRI2D mesh for general polygons"
                .into(),
        )
    })?;
    let (lo, hi) = rect;
    let ext = hi - lo;
    // cell diagonal <= target_h
    let nu = ((ext.x * (1.0 + (ext.y / ext.x).powi(2)).sqrt()) / target_h).ceil() as usize;
    let nu = nu.max(1);
    let nv = ((ext.y / ext.x) * nu as f64).round().max(1.0) as usize;
    generate_rectangle_grid(lo, hi, nu, nv)
}

/// Uniform `nu x nv` grid of the rectangle `[lo, hi]`, each cell split into
/// two triangles. Boundary edge tags follow the rectangle edge order
/// v=v_min, u=u_max, v=v_max, u=u_min.
pub fn generate_rectangle_grid(
    lo: Vector2<f64>,
    hi: Vector2<f64>,
    nu: usize,
    nv: usize,
) -> Result<Mesh2D> {
    if nu == 0 || nv == 0 {
        return Err(Error::DegeneratePolygon("grid counts must be >= 1".into()));
    }
    let ext = hi - lo;
    let hu = ext.x / nu as f64;
    let hv = ext.y / nv as f64;
    let vid = |i: usize, j: usize| j * (nu + 1) + i;
    let mut vertices = Vec::with_capacity((nu + 1) * (nv + 1));
    for j in 0..=nv {
        for i in 0..=nu {
            vertices.push(lo + Vector2::new(i as f64 * hu, j as f64 * hv));
        }
    }
    let mut triangles = Vec::with_capacity(2 * nu * nv);
    for j in 0..nv {
        for i in 0..nu {
            let (a, b, c, d) = (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut boundary_edges = Vec::new();
    for i in 0..nu {
        boundary_edges.push(([vid(i, 0), vid(i + 1, 0)], 0));
        boundary_edges.push(([vid(i, nv), vid(i + 1, nv)], 2));
    }
    for j in 0..nv {
        boundary_edges.push(([vid(nu, j), vid(nu, j + 1)], 1));
        boundary_edges.push(([vid(0, j), vid(0, j + 1)], 3));
    }
    let delta = hu.hypot(hv);
    Ok(Mesh2D {
        vertices,
        triangles,
        boundary_edges,
        delta,
    })
}

fn as_axis_rectangle(poly: &[Vector2<f64>]) -> Option<(Vector2<f64>, Vector2<f64>)> {
    if poly.len() != 4 {
        return None;
    }
    let mut lo = poly[0];
    let mut hi = poly[0];
    for p in poly {
        lo = Vector2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vector2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let tol = 1e-12 * (hi - lo).norm();
    for p in poly {
        let on_u = (p.x - lo.x).abs() < tol || (p.x - hi.x).abs() < tol;
        let on_v = (p.y - lo.y).abs() < tol || (p.y - hi.y).abs() < tol;
        if !(on_u && on_v) {
            return None;
        }
    }
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::box_mesh::BoundaryCondition;
    use approx::assert_relative_eq;

    fn unit_square_fracture() -> FractureGeometry {
        FractureGeometry::axis_rectangle(
            2,
            0.0,
            (0.0, 1.0),
            (0.0, 1.0),
            [false; 4],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap()
    }

    #[test]
    fn coarse_unit_square_is_two_triangles() {
        let mesh = generate_fracture_tri_mesh(&unit_square_fracture(), 1.5).unwrap();
        assert_eq!(mesh.triangles.len(), 2);
        assert_relative_eq!(mesh.total_area(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn test3_square_covers_quarter_area() {
        let frac = FractureGeometry::axis_rectangle(
            0,
            0.5,
            (0.0, 0.5),
            (0.0, 0.5),
            [false, true, true, false],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let mesh = generate_fracture_tri_mesh(&frac, 0.1).unwrap();
        assert_relative_eq!(mesh.total_area(), 0.25, max_relative = 1e-13);
        let max_diam = (0..mesh.triangles.len())
            .map(|t| {
                let v = mesh.triangle_vertices(t);
                (v[0] - v[1])
                    .norm()
                    .max((v[1] - v[2]).norm())
                    .max((v[2] - v[0]).norm())
            })
            .fold(0.0f64, f64::max);
        assert!(max_diam <= 0.1 + 1e-12);
    }

    #[test]
    fn full_cross_section_area_of_edge_two_cube() {
        let frac = FractureGeometry::axis_rectangle(
            2,
            0.0,
            (-1.0, 1.0),
            (-1.0, 1.0),
            [false; 4],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        // refinement at the scale of a couple hundred vertices
        let mesh = generate_fracture_tri_mesh(&frac, 0.2).unwrap();
        assert!(mesh.vertices.len() > 150);
        assert_relative_eq!(mesh.total_area(), 4.0, max_relative = 1e-13);
    }
}
