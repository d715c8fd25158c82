//! The four validation cases and their mesh ladders.

use nalgebra::{Matrix2, Vector2, Vector3};

use crate::assembly::MaterialFields;
use crate::geometry::{BoundaryCondition, BoxDomain, FractureGeometry, Side};
use crate::{Error, Result};

/// Mesh resolution of one refinement level: 3D cells per axis, per-axis
/// interior gridline offsets (in cell widths) and the fracture grid.
#[derive(Debug, Clone, Copy)]
pub struct MeshLevel {
    pub grid: (usize, usize, usize),
    pub offsets: (f64, f64, f64),
    pub frac_grid: (usize, usize),
}

#[derive(Debug, Clone, Copy)]
pub struct SolverSpec {
    pub tol: f64,
    pub max_iters: usize,
}

/// Closed-form reference solution, with one branch per side of the fracture.
pub struct AnalyticSolution {
    pub value: Box<dyn Fn(Vector3<f64>, Side) -> f64 + Send + Sync>,
    pub gradient: Box<dyn Fn(Vector3<f64>, Side) -> Vector3<f64> + Send + Sync>,
    pub h_f: Box<dyn Fn(Vector2<f64>) -> f64 + Send + Sync>,
}

pub struct CaseDefinition {
    pub name: &'static str,
    pub domain: BoxDomain,
    pub fracture: FractureGeometry,
    pub materials: MaterialFields,
    pub analytic: Option<AnalyticSolution>,
    pub levels: Vec<MeshLevel>,
    pub solver: SolverSpec,
}

impl std::fmt::Debug for CaseDefinition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CaseDefinition")
            .field("name", &self.name)
            .field("levels", &self.levels)
            .finish_non_exhaustive()
    }
}

pub fn case_by_name(name: &str) -> Result<CaseDefinition> {
    match name {
        "test0" => Ok(test0()),
        "test1" => Ok(test1()),
        "test2" => Ok(test2()),
        "test3" => Ok(test3()),
        other => Err(Error::InvalidMesh(format!("unknown case `{other}`"))),
    }
}

const NEU: BoundaryCondition = BoundaryCondition::Neumann(0.0);

fn edge2_cube(bottom: f64, top: f64) -> BoxDomain {
    BoxDomain::new(
        Vector3::new(-1.0, -1.0, -1.0),
        Vector3::new(1.0, 1.0, 1.0),
        [
            NEU,
            NEU,
            NEU,
            NEU,
            BoundaryCondition::Dirichlet(bottom),
            BoundaryCondition::Dirichlet(top),
        ],
    )
    .expect("valid box")
}

fn full_z0_fracture() -> FractureGeometry {
    FractureGeometry::axis_rectangle(2, 0.0, (-1.0, 1.0), (-1.0, 1.0), [false; 4], vec![NEU; 4])
        .expect("valid fracture")
}

/// Refinement ladder shared by the cube cases: the cut axis keeps an odd
/// cell count so the mid-plane fracture never aligns with gridlines.
fn cube_levels() -> Vec<MeshLevel> {
    vec![
        MeshLevel {
            grid: (5, 5, 5),
            offsets: (0.0, 0.0, 0.0),
            frac_grid: (7, 7),
        },
        MeshLevel {
            grid: (10, 10, 11),
            offsets: (0.0, 0.0, 0.0),
            frac_grid: (14, 14),
        },
        MeshLevel {
            grid: (20, 20, 21),
            offsets: (0.0, 0.0, 0.0),
            frac_grid: (28, 28),
        },
        MeshLevel {
            grid: (32, 32, 33),
            offsets: (0.0, 0.0, 0.0),
            frac_grid: (45, 45),
        },
    ]
}

/// Cube with a fully crossing barrier at z = 0 and boundary data producing
/// the piecewise-linear solution `z + 1` above, `z - 1` below, zero in the
/// fracture. The solution lies in the enriched discrete space.
pub fn test0() -> CaseDefinition {
    CaseDefinition {
        name: "test0",
        domain: edge2_cube(-2.0, 2.0),
        fracture: full_z0_fracture(),
        materials: MaterialFields::constant(1.0, 1.0, 1.0),
        analytic: Some(AnalyticSolution {
            value: Box::new(|x, side| match side {
                Side::Plus => x.z + 1.0,
                Side::Minus => x.z - 1.0,
            }),
            gradient: Box::new(|_, _| Vector3::new(0.0, 0.0, 1.0)),
            h_f: Box::new(|_| 0.0),
        }),
        levels: cube_levels(),
        solver: SolverSpec {
            tol: 1e-12,
            max_iters: 200,
        },
    }
}

/// Same geometry with the smooth discontinuous solution `e^z / -e^{-z}` and
/// the matching body source.
pub fn test1() -> CaseDefinition {
    let e = std::f64::consts::E;
    CaseDefinition {
        name: "test1",
        domain: edge2_cube(-e, e),
        fracture: full_z0_fracture(),
        materials: MaterialFields::constant(1.0, 1.0, 1.0).with_source(|x| {
            if x.z > 0.0 {
                -x.z.exp()
            } else {
                (-x.z).exp()
            }
        }),
        analytic: Some(AnalyticSolution {
            value: Box::new(|x, side| match side {
                Side::Plus => x.z.exp(),
                Side::Minus => -(-x.z).exp(),
            }),
            gradient: Box::new(|x, side| {
                let dz = match side {
                    Side::Plus => x.z.exp(),
                    Side::Minus => (-x.z).exp(),
                };
                Vector3::new(0.0, 0.0, dz)
            }),
            h_f: Box::new(|_| 0.0),
        }),
        levels: cube_levels(),
        solver: SolverSpec {
            tol: 1e-7,
            max_iters: 200,
        },
    }
}

/// Thickness of the equi-dimensional fracture behind the reduced models.
pub const FRACTURE_WIDTH: f64 = 1e-2;

/// Cuboid crossed by a fracture that is permeable on its outer strips and a
/// barrier in the middle. The fracture plane is y = 1; its local frame is
/// (z, x), so the piecewise fields read the second local coordinate.
pub fn test2() -> CaseDefinition {
    let d = FRACTURE_WIDTH;
    let domain = BoxDomain::new(
        Vector3::new(0.0, 0.0, 0.0),
        Vector3::new(1.0, 2.0, 1.0),
        [
            NEU,
            NEU,
            BoundaryCondition::Dirichlet(0.0),
            BoundaryCondition::Dirichlet(1.0),
            NEU,
            NEU,
        ],
    )
    .expect("valid box");
    let fracture = FractureGeometry::axis_rectangle(
        1,
        1.0,
        (0.0, 1.0),
        (0.0, 1.0),
        [false; 4],
        vec![NEU; 4],
    )
    .expect("valid fracture");
    let permeable = move |x: f64| -> bool { !(0.25..=0.75).contains(&x) };
    let mut materials = MaterialFields::constant(1.0, 1.0, 1.0);
    materials.k_f = Box::new(move |p: Vector2<f64>| {
        let k = if permeable(p.y) { d } else { 2e-3 * d };
        Matrix2::identity() * k
    });
    materials.eta = Box::new(move |p: Vector2<f64>| {
        if permeable(p.y) {
            1.0 / d
        } else {
            2e-3 / d
        }
    });
    CaseDefinition {
        name: "test2",
        domain,
        fracture,
        materials,
        analytic: None,
        levels: vec![
            MeshLevel {
                grid: (10, 21, 10),
                offsets: (0.0, 0.0, 0.0),
                frac_grid: (13, 13),
            },
            MeshLevel {
                grid: (16, 33, 16),
                offsets: (0.0, 0.0, 0.0),
                frac_grid: (21, 21),
            },
        ],
        solver: SolverSpec {
            tol: 1e-7,
            max_iters: 1000,
        },
    }
}

/// Unit cube with an impervious square fracture at x = 0.5 ending inside the
/// domain. Interior gridlines along y and z are shifted so the fracture
/// edges cross element sections generically.
pub fn test3() -> CaseDefinition {
    let d = FRACTURE_WIDTH;
    let domain = BoxDomain::new(
        Vector3::new(0.0, 0.0, 0.0),
        Vector3::new(1.0, 1.0, 1.0),
        [
            BoundaryCondition::Dirichlet(0.0),
            BoundaryCondition::Dirichlet(1.0),
            NEU,
            NEU,
            NEU,
            NEU,
        ],
    )
    .expect("valid box");
    let fracture = FractureGeometry::axis_rectangle(
        0,
        0.5,
        (0.0, 0.5),
        (0.0, 0.5),
        [false, true, true, false],
        vec![NEU; 4],
    )
    .expect("valid fracture");
    let mut materials = MaterialFields::constant(1.0, 1.0, 1.0);
    materials.k_f = Box::new(move |_| Matrix2::identity() * (1e-7 * d));
    materials.eta = Box::new(move |_| 1e-7 / d);
    CaseDefinition {
        name: "test3",
        domain,
        fracture,
        materials,
        analytic: None,
        levels: vec![
            MeshLevel {
                grid: (17, 17, 17),
                offsets: (0.0, 0.3, 0.3),
                frac_grid: (20, 20),
            },
            MeshLevel {
                grid: (25, 25, 25),
                offsets: (0.0, 0.3, 0.3),
                frac_grid: (30, 30),
            },
            MeshLevel {
                grid: (33, 33, 33),
                offsets: (0.0, 0.3, 0.3),
                frac_grid: (40, 40),
            },
            MeshLevel {
                grid: (49, 49, 49),
                offsets: (0.0, 0.3, 0.3),
                frac_grid: (56, 56),
            },
        ],
        solver: SolverSpec {
            tol: 1e-7,
            max_iters: 500,
        },
    }
}
