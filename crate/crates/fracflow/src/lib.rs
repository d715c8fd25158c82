//! Darcy flow in a 3D porous block crossed by a single planar fracture or
//! barrier, solved on tetrahedral meshes that do not conform to the fracture.
//!
//! The pressure in the matrix and in the fracture are coupled through a
//! filtration-type interface condition. The coupled problem is recast as the
//! minimization of an interface mismatch functional constrained by the two
//! subdomain equations, with three auxiliary interface controls next to the
//! two pressure fields. Discontinuities of the matrix pressure across the
//! fracture plane are represented with discontinuous enrichment functions on
//! the cut elements, so the 3D mesh can be generated independently of the
//! fracture position.
//!
//! Module layout:
//! * [`geometry`] — meshes, cut-element classification, clipping, quadrature
//! * [`xfem`] — enriched function spaces and degree-of-freedom maps
//! * [`assembly`] — sparse blocks of the discrete optimization problem
//! * [`optimizer`] — reduced conjugate-gradient solver and the direct
//!   saddle-point solve used as an oracle
//! * [`reference`] — equi-dimensional 2D reference solutions
//! * [`harness`] — the validation cases, error norms and artifact export

pub use nalgebra;

pub mod assembly;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod optimizer;
pub mod reference;
pub mod xfem;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
