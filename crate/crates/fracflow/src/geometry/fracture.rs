//! Planar fracture geometry: plane, local frame, polygon and interior edges.

use nalgebra::{Vector2, Vector3};

use crate::{Error, Result};
use super::box_mesh::BoundaryCondition;

/// Signed line equation `a*x + b*y + c` in the fracture local frame,
/// normalized so the gradient has unit norm; positive on the polygon side.
#[derive(Debug, Clone, Copy)]
pub struct LineEquation {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LineEquation {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        let norm = a.hypot(b);
        LineEquation {
            a: a / norm,
            b: b / norm,
            c: c / norm,
        }
    }

    pub fn eval(&self, p: Vector2<f64>) -> f64 {
        self.a * p.x + self.b * p.y + self.c
    }

    pub fn gradient(&self) -> Vector2<f64> {
        Vector2::new(self.a, self.b)
    }
}

/// A planar polygonal fracture immersed in the 3D domain.
///
/// The local frame maps global points to fracture-plane coordinates via
/// `x_F = ((x - x0)·u, (x - x0)·v)`. The side of the plane where
/// `n·(x - x0) > 0` is the `+` side of the interface. `interior_edges` are
/// the polygon edges that lie strictly inside the domain; their line
/// equations are positive over the polygon interior.
#[derive(Debug, Clone)]
pub struct FractureGeometry {
    pub normal: Vector3<f64>,
    pub x0: Vector3<f64>,
    pub axis_u: Vector3<f64>,
    pub axis_v: Vector3<f64>,
    pub polygon: Vec<Vector2<f64>>,
    pub interior_edges: Vec<LineEquation>,
    pub edge_conditions: Vec<BoundaryCondition>,
}

impl FractureGeometry {
    pub fn new(
        normal: Vector3<f64>,
        x0: Vector3<f64>,
        axis_u: Vector3<f64>,
        polygon: Vec<Vector2<f64>>,
        interior_edges: Vec<LineEquation>,
        edge_conditions: Vec<BoundaryCondition>,
    ) -> Result<Self> {
        let normal = normal.normalize();
        let axis_u = (axis_u - normal * axis_u.dot(&normal)).normalize();
        let axis_v = normal.cross(&axis_u);
        let frac = FractureGeometry {
            normal,
            x0,
            axis_u,
            axis_v,
            polygon,
            interior_edges,
            edge_conditions,
        };
        frac.validate()?;
        Ok(frac)
    }

    fn validate(&self) -> Result<()> {
        if self.polygon.len() < 3 {
            return Err(Error::DegeneratePolygon(format!(
                "{} vertices",
                self.polygon.len()
            )));
        }
        if self.polygon_area() <= 0.0 {
            return Err(Error::DegeneratePolygon(
                "polygon not counter-clockwise or zero area".into(),
            ));
        }
        if self.edge_conditions.len() != self.polygon.len() {
            return Err(Error::DegeneratePolygon(format!(
                "{} edge conditions for {} polygon edges",
                self.edge_conditions.len(),
                self.polygon.len()
            )));
        }
        let bary = self.barycenter_local();
        for (i, line) in self.interior_edges.iter().enumerate() {
            if line.eval(bary) <= 0.0 {
                return Err(Error::DegeneratePolygon(format!(
                    "interior edge line {i} not positive at the polygon barycenter"
                )));
            }
        }
        Ok(())
    }

    pub fn signed_distance(&self, x: Vector3<f64>) -> f64 {
        self.normal.dot(&(x - self.x0))
    }

    pub fn to_local(&self, x: Vector3<f64>) -> Vector2<f64> {
        let d = x - self.x0;
        Vector2::new(d.dot(&self.axis_u), d.dot(&self.axis_v))
    }

    pub fn to_global(&self, p: Vector2<f64>) -> Vector3<f64> {
        self.x0 + self.axis_u * p.x + self.axis_v * p.y
    }

    /// Signed area of the polygon (positive for counter-clockwise order).
    pub fn polygon_area(&self) -> f64 {
        super::clip::polygon_area(&self.polygon)
    }

    pub fn barycenter_local(&self) -> Vector2<f64> {
        let n = self.polygon.len() as f64;
        self.polygon.iter().sum::<Vector2<f64>>() / n
    }

    /// Point-in-polygon test in the local frame (convex polygon, boundary
    /// points count as inside).
    pub fn contains_local(&self, p: Vector2<f64>) -> bool {
        let n = self.polygon.len();
        let tol = 1e-12 * self.polygon_area().sqrt();
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            let e = b - a;
            let cross = e.x * (p.y - a.y) - e.y * (p.x - a.x);
            if cross < -tol {
                return false;
            }
        }
        true
    }

    /// Rectangle fracture on the plane `axis = value` of a box-like domain.
    ///
    /// `axis` is 0, 1 or 2; the local frame uses the two remaining axes in
    /// cyclic order, so e.g. a fracture on a plane x = c has local
    /// coordinates (y, z). `interior` marks, per rectangle edge (min-u,
    /// max-u cycle: [u_min, u_max] x [v_min, v_max] edges in the order
    /// v=v_min, u=u_max, v=v_max, u=u_min), which edges lie inside the
    /// domain and contribute an enrichment line.
    #[allow(clippy::too_many_arguments)]
    pub fn axis_rectangle(
        axis: usize,
        value: f64,
        u_range: (f64, f64),
        v_range: (f64, f64),
        interior: [bool; 4],
        edge_conditions: Vec<BoundaryCondition>,
    ) -> Result<Self> {
        let mut normal = Vector3::zeros();
        normal[axis] = 1.0;
        let mut axis_u = Vector3::zeros();
        axis_u[(axis + 1) % 3] = 1.0;
        let mut x0 = Vector3::zeros();
        x0[axis] = value;
        let (u0, u1) = u_range;
        let (v0, v1) = v_range;
        let polygon = vec![
            Vector2::new(u0, v0),
            Vector2::new(u1, v0),
            Vector2::new(u1, v1),
            Vector2::new(u0, v1),
        ];
        // line equations positive inside the rectangle, unit gradient
        let lines = [
            LineEquation::new(0.0, 1.0, -v0),
            LineEquation::new(-1.0, 0.0, u1),
            LineEquation::new(0.0, -1.0, v1),
            LineEquation::new(1.0, 0.0, -u0),
        ];
        let interior_edges = interior
            .iter()
            .zip(lines.iter())
            .filter(|(keep, _)| **keep)
            .map(|(_, l)| *l)
            .collect();
        FractureGeometry::new(normal, x0, axis_u, polygon, interior_edges, edge_conditions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn neumann4() -> Vec<BoundaryCondition> {
        vec![BoundaryCondition::Neumann(0.0); 4]
    }

    #[test]
    fn axis_rectangle_frame_roundtrip() {
        let frac = FractureGeometry::axis_rectangle(
            2,
            0.0,
            (-1.0, 1.0),
            (-1.0, 1.0),
            [false; 4],
            neumann4(),
        )
        .unwrap();
        // plane z = 0: local coordinates are (x, y)
        let p = Vector3::new(0.3, -0.2, 0.0);
        let local = frac.to_local(p);
        assert_relative_eq!(local.x, 0.3);
        assert_relative_eq!(local.y, -0.2);
        let back = frac.to_global(local);
        assert_relative_eq!((back - p).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(frac.polygon_area(), 4.0);
    }

    #[test]
    fn signed_distance_sign_follows_the_normal() {
        let frac = FractureGeometry::axis_rectangle(
            2,
            0.0,
            (-1.0, 1.0),
            (-1.0, 1.0),
            [false; 4],
            neumann4(),
        )
        .unwrap();
        assert!(frac.signed_distance(Vector3::new(0.0, 0.0, 0.3)) > 0.0);
        assert!(frac.signed_distance(Vector3::new(1.0, 1.0, -0.1)) < 0.0);
    }

    #[test]
    fn interior_edge_lines_positive_inside() {
        // fracture x = 0.5 over [0, 0.5]^2 with edges at u=0.5 and v=0.5 interior
        let frac = FractureGeometry::axis_rectangle(
            0,
            0.5,
            (0.0, 0.5),
            (0.0, 0.5),
            [false, true, true, false],
            neumann4(),
        )
        .unwrap();
        assert_eq!(frac.interior_edges.len(), 2);
        let inside = Vector2::new(0.25, 0.25);
        for line in &frac.interior_edges {
            assert!(line.eval(inside) > 0.0);
            assert_relative_eq!(line.gradient().norm(), 1.0);
        }
        assert!(frac.contains_local(Vector2::new(0.1, 0.4)));
        assert!(!frac.contains_local(Vector2::new(0.6, 0.4)));
        // boundary counts as inside
        assert!(frac.contains_local(Vector2::new(0.5, 0.25)));
    }
}
