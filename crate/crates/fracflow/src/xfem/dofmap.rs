//! Degree-of-freedom numbering for the enriched 3D space, the fracture space
//! and the piecewise-constant interface spaces.

use nalgebra::Vector3;

use crate::geometry::{
    BoundaryCondition, CutClassification, CutKind, FractureGeometry, Mesh2D, Mesh3D,
};
use super::enrichment::{edge_bubble, EnrichmentSpec};

/// Which enrichment a vertex carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnrichKind {
    /// Heaviside-times-bubble, for vertices of elements crossed by an
    /// interior fracture edge.
    Bubble,
    /// Plain Heaviside, for vertices of fully cut elements not already
    /// carrying the bubble variant.
    Heaviside,
}

/// Extra degree of freedom attached to a mesh vertex, with the nodal shift
/// constants making the enriched basis vanish at mesh vertices.
#[derive(Debug, Clone, Copy)]
pub struct EnrichedDof {
    pub dof: usize,
    pub kind: EnrichKind,
    pub h_k: f64,
    pub e_k: f64,
}

impl EnrichedDof {
    /// Value subtracted in the shifted basis: `H(x_k) E(x_k)` for the bubble
    /// variant, `H(x_k)` for plain Heaviside.
    pub fn shift(&self) -> f64 {
        match self.kind {
            EnrichKind::Bubble => self.h_k * self.e_k,
            EnrichKind::Heaviside => self.h_k,
        }
    }
}

/// Numbering of all unknowns: standard vertex DOFs first, then enriched DOFs,
/// then the fracture and interface unknowns (counted separately).
#[derive(Debug)]
pub struct DofMap {
    pub n_std: usize,
    pub enriched: Vec<Option<EnrichedDof>>,
    /// Total 3D DOFs: standard plus enriched.
    pub n_dofs_3d: usize,
    pub n_dofs_frac: usize,
    pub m_plus: usize,
    pub m_minus: usize,
    pub m_frac: usize,
    /// Dirichlet value per 3D DOF (standard and enriched).
    pub dirichlet_3d: Vec<Option<f64>>,
    pub dirichlet_2d: Vec<Option<f64>>,
    /// 3D DOF -> index among free 3D DOFs.
    pub free_3d: Vec<Option<usize>>,
    pub free_2d: Vec<Option<usize>>,
    pub n_free_3d: usize,
    pub n_free_2d: usize,
    /// Vertices in the bubble index set (owns `dof` ids in `enriched`).
    pub count_bubble: usize,
    pub count_heaviside: usize,
}

impl DofMap {
    pub fn m_total(&self) -> usize {
        self.m_plus + self.m_minus + self.m_frac
    }

    /// Full coefficient vector from free values plus Dirichlet lifts.
    pub fn expand_3d(&self, free: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.n_dofs_3d];
        for dof in 0..self.n_dofs_3d {
            full[dof] = match self.free_3d[dof] {
                Some(idx) => free[idx],
                None => self.dirichlet_3d[dof].unwrap_or(0.0),
            };
        }
        full
    }

    pub fn expand_2d(&self, free: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.n_dofs_frac];
        for dof in 0..self.n_dofs_frac {
            full[dof] = match self.free_2d[dof] {
                Some(idx) => free[idx],
                None => self.dirichlet_2d[dof].unwrap_or(0.0),
            };
        }
        full
    }
}

/// Builds the DOF map: enriched DOFs for vertices of cut elements, Dirichlet
/// constraints from tagged boundary faces and fracture edges. Enriched DOFs
/// whose vertex lies on a Dirichlet face are constrained to zero.
pub fn build_dof_map(
    mesh3d: &Mesh3D,
    mesh2d: &Mesh2D,
    cut: &CutClassification,
    frac: &FractureGeometry,
    spec: &EnrichmentSpec,
    tags_3d: &dyn Fn(i32) -> Option<BoundaryCondition>,
) -> DofMap {
    let n_std = mesh3d.vertices.len();

    // vertex enrichment sets: bubble takes precedence over Heaviside
    let mut kind = vec![None::<EnrichKind>; n_std];
    for &t in &cut.edge_tets {
        for &v in &mesh3d.tets[t] {
            kind[v] = Some(EnrichKind::Bubble);
        }
    }
    for &t in &cut.cut_tets {
        debug_assert_eq!(cut.kind[t], CutKind::FullyCut);
        for &v in &mesh3d.tets[t] {
            if kind[v].is_none() {
                kind[v] = Some(EnrichKind::Heaviside);
            }
        }
    }

    let heaviside_at = |x: Vector3<f64>| -> f64 {
        let d = frac.signed_distance(x);
        if d.abs() < cut.snap_tol || d > 0.0 {
            1.0
        } else {
            -1.0
        }
    };

    let mut enriched = vec![None; n_std];
    let mut next = n_std;
    let mut count_bubble = 0;
    let mut count_heaviside = 0;
    for v in 0..n_std {
        if let Some(k) = kind[v] {
            let x = mesh3d.vertices[v];
            let (e_k, _) = edge_bubble(x, spec, frac);
            enriched[v] = Some(EnrichedDof {
                dof: next,
                kind: k,
                h_k: heaviside_at(x),
                e_k,
            });
            next += 1;
            match k {
                EnrichKind::Bubble => count_bubble += 1,
                EnrichKind::Heaviside => count_heaviside += 1,
            }
        }
    }
    let n_dofs_3d = next;

    // Dirichlet constraints: every vertex on the closure of a Dirichlet face,
    // Dirichlet winning over Neumann on shared edges and corners
    let mut dirichlet_vertex = vec![None::<f64>; n_std];
    let mut faces: Vec<_> = mesh3d.boundary_faces.clone();
    faces.sort_by_key(|&(f, tag)| (tag, f));
    for (face, tag) in faces {
        if let Some(BoundaryCondition::Dirichlet(value)) = tags_3d(tag) {
            for v in face {
                if dirichlet_vertex[v].is_none() {
                    dirichlet_vertex[v] = Some(value);
                }
            }
        }
    }
    let mut dirichlet_3d = vec![None; n_dofs_3d];
    for v in 0..n_std {
        if let Some(value) = dirichlet_vertex[v] {
            dirichlet_3d[v] = Some(value);
            if let Some(e) = &enriched[v] {
                dirichlet_3d[e.dof] = Some(0.0);
            }
        }
    }

    // fracture Dirichlet edges
    let n_dofs_frac = mesh2d.vertices.len();
    let mut dirichlet_2d = vec![None; n_dofs_frac];
    let mut edges: Vec<_> = mesh2d.boundary_edges.clone();
    edges.sort_by_key(|&(e, tag)| (tag, e));
    for (edge, tag) in edges {
        let bc = frac
            .edge_conditions
            .get(tag as usize)
            .copied()
            .unwrap_or(BoundaryCondition::Neumann(0.0));
        if let BoundaryCondition::Dirichlet(value) = bc {
            for v in edge {
                if dirichlet_2d[v].is_none() {
                    dirichlet_2d[v] = Some(value);
                }
            }
        }
    }

    let index_free = |dirichlet: &[Option<f64>]| -> (Vec<Option<usize>>, usize) {
        let mut map = vec![None; dirichlet.len()];
        let mut n = 0;
        for (dof, d) in dirichlet.iter().enumerate() {
            if d.is_none() {
                map[dof] = Some(n);
                n += 1;
            }
        }
        (map, n)
    };
    let (free_3d, n_free_3d) = index_free(&dirichlet_3d);
    let (free_2d, n_free_2d) = index_free(&dirichlet_2d);

    let m = mesh2d.triangles.len();
    DofMap {
        n_std,
        enriched,
        n_dofs_3d,
        n_dofs_frac,
        m_plus: m,
        m_minus: m,
        m_frac: m,
        dirichlet_3d,
        dirichlet_2d,
        free_3d,
        free_2d,
        n_free_3d,
        n_free_2d,
        count_bubble,
        count_heaviside,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        classify_and_cut, generate_box_tet_mesh, generate_rectangle_grid, BoxDomain,
    };
    use nalgebra::Vector2;

    fn cube_domain(dirichlet_z: bool) -> BoxDomain {
        let neumann = BoundaryCondition::Neumann(0.0);
        let mut tags = [neumann; 6];
        if dirichlet_z {
            tags[4] = BoundaryCondition::Dirichlet(-2.0);
            tags[5] = BoundaryCondition::Dirichlet(2.0);
        } else {
            tags[0] = BoundaryCondition::Dirichlet(0.0);
        }
        BoxDomain::new(
            Vector3::new(-1.0, -1.0, -1.0),
            Vector3::new(1.0, 1.0, 1.0),
            tags,
        )
        .unwrap()
    }

    #[test]
    fn full_crossing_has_only_heaviside_enrichment() {
        let domain = cube_domain(true);
        let mesh = generate_box_tet_mesh(&domain, (5, 5, 5)).unwrap();
        let frac = FractureGeometry::axis_rectangle(
            2,
            0.0,
            (-1.0, 1.0),
            (-1.0, 1.0),
            [false; 4],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        let spec = EnrichmentSpec::new(&frac);
        let mesh2d =
            generate_rectangle_grid(Vector2::new(-1.0, -1.0), Vector2::new(1.0, 1.0), 7, 7)
                .unwrap();
        let dm = build_dof_map(&mesh, &mesh2d, &cut, &frac, &spec, &|tag| {
            domain.condition_for_tag(tag)
        });
        assert_eq!(dm.count_bubble, 0);
        // two vertex layers adjacent to the plane
        assert_eq!(dm.count_heaviside, 2 * 36);
        assert_eq!(dm.n_dofs_3d, 216 + 72);
        // Dirichlet top and bottom layers
        let constrained = dm.dirichlet_3d.iter().filter(|d| d.is_some()).count();
        assert_eq!(constrained, 2 * 36);
        assert_eq!(dm.n_free_3d, 216 + 72 - 72);
        assert_eq!(dm.m_plus, mesh2d.triangles.len());
        assert_eq!(dm.m_total(), 3 * mesh2d.triangles.len());
    }

    #[test]
    fn dirichlet_fracture_edges_constrain_their_vertices() {
        let domain = cube_domain(true);
        let mesh = generate_box_tet_mesh(&domain, (5, 5, 5)).unwrap();
        let frac = FractureGeometry::axis_rectangle(
            2,
            0.0,
            (-1.0, 1.0),
            (-1.0, 1.0),
            [false; 4],
            vec![
                BoundaryCondition::Dirichlet(3.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
            ],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        let spec = EnrichmentSpec::new(&frac);
        let mesh2d =
            generate_rectangle_grid(Vector2::new(-1.0, -1.0), Vector2::new(1.0, 1.0), 4, 4)
                .unwrap();
        let dm = build_dof_map(&mesh, &mesh2d, &cut, &frac, &spec, &|tag| {
            domain.condition_for_tag(tag)
        });
        // the v = -1 edge carries tag 0: its five vertices are constrained
        let constrained: Vec<usize> = (0..dm.n_dofs_frac)
            .filter(|&v| dm.dirichlet_2d[v].is_some())
            .collect();
        assert_eq!(constrained.len(), 5);
        for v in constrained {
            assert_eq!(dm.dirichlet_2d[v], Some(3.0));
            assert!((mesh2d.vertices[v].y + 1.0).abs() < 1e-12);
        }
        assert_eq!(dm.n_free_2d, dm.n_dofs_frac - 5);
    }

    #[test]
    fn uncut_mesh_adds_no_dofs() {
        let domain = cube_domain(false);
        let mesh = generate_box_tet_mesh(&domain, (3, 3, 3)).unwrap();
        let frac = FractureGeometry::axis_rectangle(
            2,
            0.5,
            (4.0, 5.0),
            (4.0, 5.0),
            [true; 4],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        let spec = EnrichmentSpec::new(&frac);
        let mesh2d =
            generate_rectangle_grid(Vector2::new(4.0, 4.0), Vector2::new(5.0, 5.0), 2, 2).unwrap();
        let dm = build_dof_map(&mesh, &mesh2d, &cut, &frac, &spec, &|tag| {
            domain.condition_for_tag(tag)
        });
        assert_eq!(dm.n_dofs_3d, dm.n_std);
    }
}
