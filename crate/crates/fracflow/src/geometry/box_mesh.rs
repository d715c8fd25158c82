//! Axis-aligned box domains and the structured Kuhn tetrahedral mesher.

use nalgebra::Vector3;

use crate::{Error, Result};

/// Boundary condition attached to a boundary face tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet(f64),
    Neumann(f64),
}

impl BoundaryCondition {
    pub fn is_dirichlet(&self) -> bool {
        matches!(self, BoundaryCondition::Dirichlet(_))
    }
}

/// The six faces of an axis-aligned box, used as boundary tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxFace {
    XMin,
    XMax,
    YMin,
    YMax,
    ZMin,
    ZMax,
}

pub const BOX_FACES: [BoxFace; 6] = [
    BoxFace::XMin,
    BoxFace::XMax,
    BoxFace::YMin,
    BoxFace::YMax,
    BoxFace::ZMin,
    BoxFace::ZMax,
];

/// A 3D box domain with one boundary condition per face.
#[derive(Debug, Clone)]
pub struct BoxDomain {
    pub min_corner: Vector3<f64>,
    pub max_corner: Vector3<f64>,
    pub tags: [BoundaryCondition; 6],
}

impl BoxDomain {
    pub fn new(
        min_corner: Vector3<f64>,
        max_corner: Vector3<f64>,
        tags: [BoundaryCondition; 6],
    ) -> Result<Self> {
        for i in 0..3 {
            if min_corner[i] >= max_corner[i] {
                return Err(Error::InvalidMesh(format!(
                    "box corners not ordered along axis {i}: {} >= {}",
                    min_corner[i], max_corner[i]
                )));
            }
        }
        if !tags.iter().any(|t| t.is_dirichlet()) {
            return Err(Error::InvalidMesh(
                "box must have at least one Dirichlet face".into(),
            ));
        }
        Ok(BoxDomain {
            min_corner,
            max_corner,
            tags,
        })
    }

    pub fn condition_for_tag(&self, tag: i32) -> Option<BoundaryCondition> {
        self.tags.get(tag as usize).copied()
    }

    pub fn diameter(&self) -> f64 {
        (self.max_corner - self.min_corner).norm()
    }
}

/// Conforming tetrahedral mesh with tagged boundary faces.
///
/// Boundary face tags are small integers; for generated meshes they index
/// the box face (order of [`BOX_FACES`]). `delta` is the maximum element
/// diameter.
#[derive(Debug, Clone)]
pub struct Mesh3D {
    pub vertices: Vec<Vector3<f64>>,
    pub tets: Vec<[usize; 4]>,
    pub boundary_faces: Vec<([usize; 3], i32)>,
    pub delta: f64,
}

impl Mesh3D {
    pub fn tet_vertices(&self, t: usize) -> [Vector3<f64>; 4] {
        let idx = self.tets[t];
        [
            self.vertices[idx[0]],
            self.vertices[idx[1]],
            self.vertices[idx[2]],
            self.vertices[idx[3]],
        ]
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        let [a, b, c, d] = self.tet_vertices(t);
        tet_volume(a, b, c, d)
    }

    pub fn tet_diameter(&self, t: usize) -> f64 {
        let v = self.tet_vertices(t);
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                d = d.max((v[i] - v[j]).norm());
            }
        }
        d
    }

    pub fn bounding_box(&self) -> (Vector3<f64>, Vector3<f64>) {
        let mut lo = Vector3::repeat(f64::INFINITY);
        let mut hi = Vector3::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            for i in 0..3 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    /// Checks conformity: every interior face shared by exactly two tets,
    /// every boundary face by one.
    pub fn validate(&self) -> Result<()> {
        use std::collections::HashMap;
        let mut face_count: HashMap<[usize; 3], usize> = HashMap::new();
        for tet in &self.tets {
            for f in tet_faces(tet) {
                let mut key = f;
                key.sort_unstable();
                *face_count.entry(key).or_insert(0) += 1;
            }
        }
        let mut boundary = 0usize;
        for (&face, &count) in &face_count {
            match count {
                1 => boundary += 1,
                2 => {}
                n => {
                    return Err(Error::InvalidMesh(format!(
                        "face {face:?} shared by {n} tets"
                    )))
                }
            }
        }
        if boundary != self.boundary_faces.len() {
            return Err(Error::InvalidMesh(format!(
                "{} tagged boundary faces but {} mesh boundary faces",
                self.boundary_faces.len(),
                boundary
            )));
        }
        for t in 0..self.tets.len() {
            if self.tet_volume(t) <= 0.0 {
                return Err(Error::InvalidMesh(format!("tet {t} has non-positive volume")));
            }
        }
        Ok(())
    }
}

/// Uniform gridlines over `[lo, hi]` with the interior lines shifted by
/// `offset` cell widths (endpoints kept). Shifted grids avoid the exactly
/// symmetric element/fracture alignments a centered feature would otherwise
/// produce on a uniform grid.
pub fn offset_gridlines(lo: f64, hi: f64, n: usize, offset: f64) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    let mut lines = Vec::with_capacity(n + 1);
    lines.push(lo);
    for k in 1..n {
        lines.push(lo + (k as f64 + offset) * h);
    }
    lines.push(hi);
    lines
}

pub fn tet_volume(a: Vector3<f64>, b: Vector3<f64>, c: Vector3<f64>, d: Vector3<f64>) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0
}

pub fn tet_faces(tet: &[usize; 4]) -> [[usize; 3]; 4] {
    [
        [tet[1], tet[2], tet[3]],
        [tet[0], tet[2], tet[3]],
        [tet[0], tet[1], tet[3]],
        [tet[0], tet[1], tet[2]],
    ]
}

/// Structured mesh of `domain` with `n = (nx, ny, nz)` cells per axis, each
/// hex cell split into the six Kuhn tetrahedra sharing the main diagonal.
/// The mesh is built without any knowledge of a fracture.
pub fn generate_box_tet_mesh(domain: &BoxDomain, n: (usize, usize, usize)) -> Result<Mesh3D> {
    let (nx, ny, nz) = n;
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidMesh("cell counts must be >= 1".into()));
    }
    let lines = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
    };
    generate_box_tet_mesh_from_lines(
        domain,
        &lines(domain.min_corner.x, domain.max_corner.x, nx),
        &lines(domain.min_corner.y, domain.max_corner.y, ny),
        &lines(domain.min_corner.z, domain.max_corner.z, nz),
    )
}

/// Kuhn mesh on an arbitrary rectilinear grid given by per-axis gridline
/// coordinates (strictly increasing, spanning the box).
pub fn generate_box_tet_mesh_from_lines(
    domain: &BoxDomain,
    xs: &[f64],
    ys: &[f64],
    zs: &[f64],
) -> Result<Mesh3D> {
    for (axis, lines) in [xs, ys, zs].iter().enumerate() {
        if lines.len() < 2 || lines.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMesh(format!(
                "gridlines along axis {axis} must be strictly increasing with >= 2 entries"
            )));
        }
    }
    let (nx, ny, nz) = (xs.len() - 1, ys.len() - 1, zs.len() - 1);

    let vid = |i: usize, j: usize, k: usize| (k * (ny + 1) + j) * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push(Vector3::new(xs[i], ys[j], zs[k]));
            }
        }
    }

    // Kuhn subdivision: one tet per permutation of the axis insertion order,
    // every tet containing the cell diagonal (0,0,0)-(1,1,1).
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut tets = Vec::with_capacity(nx * ny * nz * 6);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                for perm in PERMS {
                    let mut corner = [0usize; 3];
                    let mut quad = [0usize; 4];
                    quad[0] = vid(i, j, k);
                    for (step, &axis) in perm.iter().enumerate() {
                        corner[axis] = 1;
                        quad[step + 1] =
                            vid(i + corner[0], j + corner[1], k + corner[2]);
                    }
                    let vol = tet_volume(
                        vertices[quad[0]],
                        vertices[quad[1]],
                        vertices[quad[2]],
                        vertices[quad[3]],
                    );
                    if vol < 0.0 {
                        quad.swap(2, 3);
                    }
                    tets.push(quad);
                }
            }
        }
    }

    // Boundary faces: collect tet faces whose three vertices lie on a box face.
    let on_face = |v: &Vector3<f64>, face: BoxFace| -> bool {
        let eps = 1e-12 * domain.diameter();
        match face {
            BoxFace::XMin => (v.x - domain.min_corner.x).abs() < eps,
            BoxFace::XMax => (v.x - domain.max_corner.x).abs() < eps,
            BoxFace::YMin => (v.y - domain.min_corner.y).abs() < eps,
            BoxFace::YMax => (v.y - domain.max_corner.y).abs() < eps,
            BoxFace::ZMin => (v.z - domain.min_corner.z).abs() < eps,
            BoxFace::ZMax => (v.z - domain.max_corner.z).abs() < eps,
        }
    };
    use std::collections::HashMap;
    let mut face_count: HashMap<[usize; 3], ([usize; 3], usize)> = HashMap::new();
    for tet in &tets {
        for f in tet_faces(tet) {
            let mut key = f;
            key.sort_unstable();
            face_count
                .entry(key)
                .and_modify(|e| e.1 += 1)
                .or_insert((f, 1));
        }
    }
    let mut boundary_faces = Vec::new();
    let mut keys: Vec<_> = face_count.keys().copied().collect();
    keys.sort_unstable();
    for key in keys {
        let (face, count) = face_count[&key];
        if count != 1 {
            continue;
        }
        for (tag, bf) in BOX_FACES.iter().enumerate() {
            if face.iter().all(|&v| on_face(&vertices[v], *bf)) {
                boundary_faces.push((face, tag as i32));
                break;
            }
        }
    }

    let max_step = |lines: &[f64]| -> f64 {
        lines.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    };
    let delta = Vector3::new(max_step(xs), max_step(ys), max_step(zs)).norm();
    let mesh = Mesh3D {
        vertices,
        tets,
        boundary_faces,
        delta,
    };
    Ok(mesh)
}
