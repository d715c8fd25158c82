//! Classification and subdivision of tetrahedra crossed by the fracture plane.

use nalgebra::{Vector2, Vector3};

use super::box_mesh::{tet_volume, Mesh3D};
use super::clip::{clip_halfplane, polygon_area, polygon_centroid};
use super::fracture::FractureGeometry;

/// Side of the fracture plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// Relation of one tetrahedron to the fracture plane.
#[derive(Debug, Clone)]
pub enum TetPlaneRelation {
    /// No interior crossing (possibly touching at a vertex or edge).
    Untouched { side: Side },
    /// One face lies exactly on the plane.
    FaceOnPlane { side: Side },
    /// The plane crosses the interior; sub-tetrahedra stored per side.
    Split(SplitTet),
}

/// Sub-tetrahedra of a plane-crossed element, with the cross-section polygon
/// in fracture-local coordinates.
#[derive(Debug, Clone)]
pub struct SplitTet {
    pub sub_plus: Vec<[Vector3<f64>; 4]>,
    pub sub_minus: Vec<[Vector3<f64>; 4]>,
    /// Full plane section of the tet (local frame, counter-clockwise).
    pub section: Vec<Vector2<f64>>,
    /// Section clipped to the fracture polygon; empty outside the footprint.
    pub clipped_section: Vec<Vector2<f64>>,
}

/// Enrichment class of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutKind {
    /// Not enriched.
    None,
    /// Entirely cut by the fracture (Heaviside enrichment).
    FullyCut,
    /// Crossed by an interior fracture edge (Heaviside-bubble enrichment).
    EdgeCut,
}

/// Cut data for every element of the mesh.
#[derive(Debug)]
pub struct CutClassification {
    pub relation: Vec<TetPlaneRelation>,
    pub kind: Vec<CutKind>,
    /// Elements entirely cut within the fracture footprint.
    pub cut_tets: Vec<usize>,
    /// Elements crossed by an interior fracture edge.
    pub edge_tets: Vec<usize>,
    /// Tiling of the meshed part of the interface: `(tet, polygon)` with the
    /// polygon in fracture-local coordinates.
    pub cross_sections: Vec<(usize, Vec<Vector2<f64>>)>,
    /// Snap tolerance used for on-plane vertex classification.
    pub snap_tol: f64,
}

impl CutClassification {
    pub fn is_enriched_tet(&self, t: usize) -> bool {
        self.kind[t] != CutKind::None
    }

    pub fn tiled_area(&self) -> f64 {
        self.cross_sections
            .iter()
            .map(|(_, poly)| polygon_area(poly))
            .sum()
    }
}

/// Classifies every tet of `mesh` against the fracture plane, decomposes the
/// crossed ones into sub-tetrahedra and stores the cross-section polygons
/// clipped to the fracture footprint.
pub fn classify_and_cut(mesh: &Mesh3D, frac: &FractureGeometry) -> CutClassification {
    let (lo, hi) = mesh.bounding_box();
    let snap_tol = 1e-12 * (hi - lo).norm();
    let frac_area = frac.polygon_area();
    let area_tol = 1e-14 * frac_area;

    let mut relation = Vec::with_capacity(mesh.tets.len());
    let mut kind = vec![CutKind::None; mesh.tets.len()];
    let mut cut_tets = Vec::new();
    let mut edge_tets = Vec::new();
    let mut cross_sections = Vec::new();

    for t in 0..mesh.tets.len() {
        let verts = mesh.tet_vertices(t);
        let mut d = [0.0; 4];
        for i in 0..4 {
            let s = frac.signed_distance(verts[i]);
            d[i] = if s.abs() < snap_tol { 0.0 } else { s };
        }
        let pos = d.iter().filter(|&&v| v > 0.0).count();
        let neg = d.iter().filter(|&&v| v < 0.0).count();
        let zero = 4 - pos - neg;

        if pos == 0 || neg == 0 {
            let side = if pos > 0 { Side::Plus } else { Side::Minus };
            if zero == 3 {
                // plane-coincident faces are assigned to the plus-side tet
                // only, keeping the tiling overlap-free
                if side == Side::Plus {
                    let face: Vec<Vector2<f64>> = (0..4)
                        .filter(|&i| d[i] == 0.0)
                        .map(|i| frac.to_local(verts[i]))
                        .collect();
                    let clipped = clip_to_polygon(&ccw(face), &frac.polygon);
                    if polygon_area(&clipped) > area_tol {
                        cross_sections.push((t, clipped));
                    }
                }
                relation.push(TetPlaneRelation::FaceOnPlane { side });
            } else {
                relation.push(TetPlaneRelation::Untouched { side });
            }
            continue;
        }

        // strictly crossed: recursive edge splitting
        let mut sub_plus = Vec::new();
        let mut sub_minus = Vec::new();
        split_recursive(verts, d, &mut sub_plus, &mut sub_minus);

        // section polygon: on-plane vertices plus cut-edge intersections
        let mut pts: Vec<Vector2<f64>> = Vec::new();
        for i in 0..4 {
            if d[i] == 0.0 {
                pts.push(frac.to_local(verts[i]));
            }
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if d[i] * d[j] < 0.0 {
                    let t01 = d[i] / (d[i] - d[j]);
                    pts.push(frac.to_local(verts[i] + (verts[j] - verts[i]) * t01));
                }
            }
        }
        let section = sort_ccw(pts);
        let clipped = clip_to_polygon(&section, &frac.polygon);
        let a_full = polygon_area(&section);
        let a_in = polygon_area(&clipped);

        if a_in > area_tol {
            if a_full - a_in > area_tol {
                kind[t] = CutKind::EdgeCut;
                edge_tets.push(t);
            } else {
                kind[t] = CutKind::FullyCut;
                cut_tets.push(t);
            }
            cross_sections.push((t, clipped.clone()));
        }
        relation.push(TetPlaneRelation::Split(SplitTet {
            sub_plus,
            sub_minus,
            section,
            clipped_section: clipped,
        }));
    }

    CutClassification {
        relation,
        kind,
        cut_tets,
        edge_tets,
        cross_sections,
        snap_tol,
    }
}

fn split_recursive(
    verts: [Vector3<f64>; 4],
    d: [f64; 4],
    out_plus: &mut Vec<[Vector3<f64>; 4]>,
    out_minus: &mut Vec<[Vector3<f64>; 4]>,
) {
    for i in 0..4 {
        for j in 0..4 {
            if d[i] > 0.0 && d[j] < 0.0 {
                let t01 = d[i] / (d[i] - d[j]);
                let x = verts[i] + (verts[j] - verts[i]) * t01;
                let mut va = verts;
                let mut da = d;
                va[j] = x;
                da[j] = 0.0;
                split_recursive(va, da, out_plus, out_minus);
                let mut vb = verts;
                let mut db = d;
                vb[i] = x;
                db[i] = 0.0;
                split_recursive(vb, db, out_plus, out_minus);
                return;
            }
        }
    }
    let vol = tet_volume(verts[0], verts[1], verts[2], verts[3]);
    if vol.abs() < 1e-300 {
        return;
    }
    let mut oriented = verts;
    if vol < 0.0 {
        oriented.swap(2, 3);
    }
    if d.iter().any(|&v| v > 0.0) {
        out_plus.push(oriented);
    } else {
        out_minus.push(oriented);
    }
}

fn ccw(mut poly: Vec<Vector2<f64>>) -> Vec<Vector2<f64>> {
    if polygon_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

fn sort_ccw(mut pts: Vec<Vector2<f64>>) -> Vec<Vector2<f64>> {
    if pts.len() < 3 {
        return pts;
    }
    let c = polygon_centroid(&pts);
    pts.sort_by(|p, q| {
        let ap = (p.y - c.y).atan2(p.x - c.x);
        let aq = (q.y - c.y).atan2(q.x - c.x);
        ap.partial_cmp(&aq).unwrap()
    });
    pts
}

fn clip_to_polygon(section: &[Vector2<f64>], polygon: &[Vector2<f64>]) -> Vec<Vector2<f64>> {
    if section.len() < 3 {
        return Vec::new();
    }
    let mut current = section.to_vec();
    let n = polygon.len();
    for i in 0..n {
        let p = polygon[i];
        let q = polygon[(i + 1) % n];
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::box_mesh::{generate_box_tet_mesh, BoundaryCondition, BoxDomain};
    use approx::assert_relative_eq;

    fn frac_z0(extent: f64) -> FractureGeometry {
        FractureGeometry::axis_rectangle(
            2,
            0.0,
            (-extent, extent),
            (-extent, extent),
            [false; 4],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap()
    }

    #[test]
    fn reference_tet_cut_by_midplane_conserves_volume() {
        let mesh = Mesh3D {
            vertices: vec![
                Vector3::zeros(),
                Vector3::new(1.0, 0.0, 0.0),
                Vector3::new(0.0, 1.0, 0.0),
                Vector3::new(0.0, 0.0, 1.0),
            ],
            tets: vec![[0, 1, 2, 3]],
            boundary_faces: vec![],
            delta: 2f64.sqrt(),
        };
        let frac = FractureGeometry::axis_rectangle(
            2,
            0.5,
            (-2.0, 2.0),
            (-2.0, 2.0),
            [false; 4],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        let TetPlaneRelation::Split(split) = &cut.relation[0] else {
            panic!("expected a split tet");
        };
        assert_eq!(split.sub_plus.len(), 1);
        let vol = |tets: &Vec<[Vector3<f64>; 4]>| -> f64 {
            tets.iter()
                .map(|t| tet_volume(t[0], t[1], t[2], t[3]))
                .sum()
        };
        let total = vol(&split.sub_plus) + vol(&split.sub_minus);
        assert_relative_eq!(total, 1.0 / 6.0, max_relative = 1e-13);
        assert_eq!(cut.cut_tets, vec![0]);
        assert!(cut.edge_tets.is_empty());
    }

    #[test]
    fn full_crossing_fracture_has_no_edge_tets_and_tiles_the_section() {
        let domain = BoxDomain::new(
            Vector3::new(-1.0, -1.0, -1.0),
            Vector3::new(1.0, 1.0, 1.0),
            [
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Dirichlet(-2.0),
                BoundaryCondition::Dirichlet(2.0),
            ],
        )
        .unwrap();
        let mesh = generate_box_tet_mesh(&domain, (5, 5, 5)).unwrap();
        let cut = classify_and_cut(&mesh, &frac_z0(1.0));
        assert!(cut.edge_tets.is_empty());
        assert!(!cut.cut_tets.is_empty());
        assert_relative_eq!(cut.tiled_area(), 4.0, max_relative = 1e-10);
        // volume conservation on every split element
        for rel in &cut.relation {
            if let TetPlaneRelation::Split(s) = rel {
                let vol: f64 = s
                    .sub_plus
                    .iter()
                    .chain(&s.sub_minus)
                    .map(|t| tet_volume(t[0], t[1], t[2], t[3]))
                    .sum();
                let parent = 2.0 / 5.0;
                let parent_vol = parent * parent * parent / 6.0;
                assert_relative_eq!(vol, parent_vol, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn partially_crossing_fracture_produces_edge_tets() {
        // fracture x = 0.5 over [0, 0.5]^2 in a unit cube: elements whose
        // in-footprint section is crossed by the lines y = 0.5 or z = 0.5.
        // Interior gridlines are shifted so the fracture edges do not land
        // on the symmetric mid-cell slice of the Kuhn pattern.
        let domain = BoxDomain::new(
            Vector3::zeros(),
            Vector3::new(1.0, 1.0, 1.0),
            [
                BoundaryCondition::Dirichlet(0.0),
                BoundaryCondition::Dirichlet(1.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
            ],
        )
        .unwrap();
        use crate::geometry::box_mesh::{generate_box_tet_mesh_from_lines, offset_gridlines};
        let xs = offset_gridlines(0.0, 1.0, 7, 0.0);
        let ys = offset_gridlines(0.0, 1.0, 7, 0.3);
        let zs = offset_gridlines(0.0, 1.0, 7, 0.3);
        let mesh = generate_box_tet_mesh_from_lines(&domain, &xs, &ys, &zs).unwrap();
        let frac = FractureGeometry::axis_rectangle(
            0,
            0.5,
            (0.0, 0.5),
            (0.0, 0.5),
            [false, true, true, false],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        assert!(!cut.edge_tets.is_empty());
        assert!(!cut.cut_tets.is_empty());

        // brute-force oracle over all tets: an element belongs to the edge
        // set exactly when its in-footprint section exists and its full
        // section strictly straddles an interior edge line
        let mut expected_edge: Vec<usize> = Vec::new();
        for (t, rel) in cut.relation.iter().enumerate() {
            if let TetPlaneRelation::Split(s) = rel {
                if s.clipped_section.len() < 3 {
                    continue;
                }
                let crossed = frac.interior_edges.iter().any(|line| {
                    s.section.iter().any(|p| line.eval(*p) > 1e-12)
                        && s.section.iter().any(|p| line.eval(*p) < -1e-12)
                });
                if crossed {
                    expected_edge.push(t);
                }
            }
        }
        assert_eq!(cut.edge_tets, expected_edge);
        for &t in &cut.cut_tets {
            let TetPlaneRelation::Split(s) = &cut.relation[t] else {
                panic!()
            };
            for line in &frac.interior_edges {
                let out = s.clipped_section.iter().any(|p| line.eval(*p) < -1e-9);
                assert!(!out, "fully cut tet {t} leaks past an interior edge");
            }
        }

        // tiling covers exactly the footprint
        assert_relative_eq!(cut.tiled_area(), 0.25, max_relative = 1e-10);
    }

    #[test]
    fn fracture_outside_the_mesh_leaves_everything_untouched() {
        let domain = BoxDomain::new(
            Vector3::zeros(),
            Vector3::new(1.0, 1.0, 1.0),
            [
                BoundaryCondition::Dirichlet(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
            ],
        )
        .unwrap();
        let mesh = generate_box_tet_mesh(&domain, (3, 3, 3)).unwrap();
        let frac = FractureGeometry::axis_rectangle(
            2,
            0.5,
            (2.0, 3.0),
            (2.0, 3.0),
            [true; 4],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        assert!(cut.cut_tets.is_empty());
        assert!(cut.edge_tets.is_empty());
        assert!(cut.cross_sections.is_empty());
    }
}
