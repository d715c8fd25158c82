//! Meshes, fracture geometry, cut-element classification and quadrature.

pub mod box_mesh;
pub mod clip;
pub mod cut;
pub mod fracture;
pub mod interface;
pub mod mesh_io;
pub mod quadrature;
pub mod tri_mesh;

pub use box_mesh::{generate_box_tet_mesh, BoundaryCondition, BoxDomain, BoxFace, Mesh3D};
pub use clip::clip_cross_section_with_triangle;
pub use cut::{classify_and_cut, CutClassification, CutKind, Side, SplitTet, TetPlaneRelation};
pub use fracture::{FractureGeometry, LineEquation};
pub use interface::{build_interface_quadrature, InterfacePiece, InterfaceQuadrature};
pub use quadrature::{quadrature, CellKind, QuadratureRule};
pub use tri_mesh::{generate_fracture_tri_mesh, generate_rectangle_grid, Mesh2D};
