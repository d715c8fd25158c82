//! Material fields of the coupled problem.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

/// Hydraulic data: matrix conductivity, tangential fracture conductivity,
/// normal fracture transmissibility and the volumetric source. The fracture
/// fields live in fracture-local coordinates.
pub struct MaterialFields {
    pub k_d: Matrix3<f64>,
    pub k_f: Box<dyn Fn(Vector2<f64>) -> Matrix2<f64> + Send + Sync>,
    pub eta: Box<dyn Fn(Vector2<f64>) -> f64 + Send + Sync>,
    pub source: Box<dyn Fn(Vector3<f64>) -> f64 + Send + Sync>,
}

impl MaterialFields {
    /// Constant isotropic data with no source.
    pub fn constant(k_d: f64, k_f: f64, eta: f64) -> Self {
        MaterialFields {
            k_d: Matrix3::identity() * k_d,
            k_f: Box::new(move |_| Matrix2::identity() * k_f),
            eta: Box::new(move |_| eta),
            source: Box::new(|_| 0.0),
        }
    }

    pub fn with_source(mut self, g: impl Fn(Vector3<f64>) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Box::new(g);
        self
    }
}

impl std::fmt::Debug for MaterialFields {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MaterialFields")
            .field("k_d", &self.k_d)
            .finish_non_exhaustive()
    }
}
