//! Discontinuous enrichment functions: the Heaviside of the fracture plane
//! and the interior-edge bubble confining the jump to the fracture footprint.

use nalgebra::{Vector2, Vector3};

use crate::geometry::FractureGeometry;

/// Parameters of the edge-bubble enrichment
/// `E(x) = sigma * prod_i eps_i(x_F)^varsigma` inside the footprint, 0 outside.
/// `sigma` normalizes `E` to one at the fracture barycenter. With no interior
/// edges the product is empty and `E` is identically one on the footprint.
#[derive(Debug, Clone, Copy)]
pub struct EnrichmentSpec {
    pub sigma: f64,
    pub varsigma: f64,
}

impl EnrichmentSpec {
    pub fn new(frac: &FractureGeometry) -> Self {
        Self::with_varsigma(frac, 0.5)
    }

    pub fn with_varsigma(frac: &FractureGeometry, varsigma: f64) -> Self {
        let bary = frac.barycenter_local();
        let prod: f64 = frac
            .interior_edges
            .iter()
            .map(|line| line.eval(bary).powf(varsigma))
            .product();
        EnrichmentSpec {
            sigma: 1.0 / prod,
            varsigma,
        }
    }
}

/// Sign of the signed distance to the fracture plane; points snapped onto
/// the plane count as the plus side.
pub fn heaviside(x: Vector3<f64>, frac: &FractureGeometry) -> f64 {
    if frac.signed_distance(x) >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Edge-bubble value and in-plane gradient at a fracture-local point.
pub fn edge_bubble_local(
    p: Vector2<f64>,
    spec: &EnrichmentSpec,
    frac: &FractureGeometry,
) -> (f64, Vector2<f64>) {
    if !frac.contains_local(p) {
        return (0.0, Vector2::zeros());
    }
    let mut value = spec.sigma;
    for line in &frac.interior_edges {
        let e = line.eval(p);
        if e <= 0.0 {
            return (0.0, Vector2::zeros());
        }
        value *= e.powf(spec.varsigma);
    }
    let mut grad = Vector2::zeros();
    for line in &frac.interior_edges {
        let e = line.eval(p);
        grad += line.gradient() * (spec.varsigma / e);
    }
    (value, grad * value)
}

/// Edge-bubble value and full 3D gradient; the gradient has no component
/// along the fracture normal.
pub fn edge_bubble(
    x: Vector3<f64>,
    spec: &EnrichmentSpec,
    frac: &FractureGeometry,
) -> (f64, Vector3<f64>) {
    let (value, g2) = edge_bubble_local(frac.to_local(x), spec, frac);
    (value, frac.axis_u * g2.x + frac.axis_v * g2.y)
}
