//! Quadrature rules on the reference triangle and reference tetrahedron.
//!
//! Reference elements are the unit simplices: the triangle
//! `{(x,y): x,y >= 0, x+y <= 1}` with measure 1/2 and the tetrahedron
//! `{(x,y,z): x,y,z >= 0, x+y+z <= 1}` with measure 1/6. Weights integrate
//! over the reference element directly, so mapping to a physical cell only
//! multiplies by the Jacobian ratio `|cell| / |ref|`.

use crate::{Error, Result};

/// Element family a rule is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Tet,
    Triangle,
}

/// Points (local simplex coordinates, unused trailing components zero) and
/// weights of a quadrature rule, exact up to the declared polynomial degree.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: CellKind,
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Measure of the reference element the weights sum to.
    pub fn reference_measure(&self) -> f64 {
        match self.kind {
            CellKind::Tet => 1.0 / 6.0,
            CellKind::Triangle => 0.5,
        }
    }
}

const MAX_DEGREE: usize = 9;

/// Returns a rule exact to `degree` on the reference element.
pub fn quadrature(kind: CellKind, degree: usize) -> Result<QuadratureRule> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::UnsupportedQuadrature {
            kind: match kind {
                CellKind::Tet => "tet",
                CellKind::Triangle => "triangle",
            },
            degree,
        });
    }
    let rule = match (kind, degree) {
        (CellKind::Tet, 1) => tet_centroid(),
        (CellKind::Tet, 2) => tet_four_point(),
        (CellKind::Triangle, 1) => tri_centroid(),
        (CellKind::Triangle, 2) => tri_three_point(),
        (CellKind::Triangle, 5) => tri_seven_point(),
        (k, d) => conical_product(k, d),
    };
    Ok(rule)
}

fn tet_centroid() -> QuadratureRule {
    QuadratureRule {
        kind: CellKind::Tet,
        degree: 1,
        points: vec![[0.25, 0.25, 0.25]],
        weights: vec![1.0 / 6.0],
    }
}

fn tet_four_point() -> QuadratureRule {
    let a = 0.585_410_196_624_968_5;
    let b = 0.138_196_601_125_010_5;
    QuadratureRule {
        kind: CellKind::Tet,
        degree: 2,
        points: vec![[a, b, b], [b, a, b], [b, b, a], [b, b, b]],
        weights: vec![1.0 / 24.0; 4],
    }
}

fn tri_centroid() -> QuadratureRule {
    QuadratureRule {
        kind: CellKind::Triangle,
        degree: 1,
        points: vec![[1.0 / 3.0, 1.0 / 3.0, 0.0]],
        weights: vec![0.5],
    }
}

fn tri_three_point() -> QuadratureRule {
    let (a, b) = (1.0 / 6.0, 2.0 / 3.0);
    QuadratureRule {
        kind: CellKind::Triangle,
        degree: 2,
        points: vec![[a, a, 0.0], [b, a, 0.0], [a, b, 0.0]],
        weights: vec![1.0 / 6.0; 3],
    }
}

/// Classic 7-point degree-5 rule with positive weights.
fn tri_seven_point() -> QuadratureRule {
    let a = 0.101_286_507_323_456_3;
    let b = 0.470_142_064_105_115_1;
    let wa = 0.125_939_180_544_827 * 0.5;
    let wb = 0.132_394_152_788_506 * 0.5;
    let wc = 0.225 * 0.5;
    let third = 1.0 / 3.0;
    QuadratureRule {
        kind: CellKind::Triangle,
        degree: 5,
        points: vec![
            [third, third, 0.0],
            [a, a, 0.0],
            [1.0 - 2.0 * a, a, 0.0],
            [a, 1.0 - 2.0 * a, 0.0],
            [b, b, 0.0],
            [1.0 - 2.0 * b, b, 0.0],
            [b, 1.0 - 2.0 * b, 0.0],
        ],
        weights: vec![wc, wa, wa, wa, wb, wb, wb],
    }
}

/// Conical-product rule on the unit simplex: the collapsed map turns the
/// simplex integral into a tensor product of one-dimensional Gauss-Jacobi
/// integrals, so all weights are positive. `ceil((degree+1)/2)` points per
/// direction give exactness to `degree`.
fn conical_product(kind: CellKind, degree: usize) -> QuadratureRule {
    let n = degree.div_ceil(2).max((degree + 1).div_ceil(2));
    let gl = gauss_jacobi_01(n, 0.0);
    match kind {
        CellKind::Triangle => {
            // x = u, y = v (1 - u), Jacobian (1 - u)
            let gj1 = gauss_jacobi_01(n, 1.0);
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for (u, wu) in &gj1 {
                for (v, wv) in &gl {
                    points.push([*u, v * (1.0 - u), 0.0]);
                    weights.push(wu * wv);
                }
            }
            QuadratureRule {
                kind,
                degree,
                points,
                weights,
            }
        }
        CellKind::Tet => {
            // x = u, y = v (1 - u), z = w (1 - u)(1 - v), Jacobian (1-u)^2 (1-v)
            let gj2 = gauss_jacobi_01(n, 2.0);
            let gj1 = gauss_jacobi_01(n, 1.0);
            let mut points = Vec::with_capacity(n * n * n);
            let mut weights = Vec::with_capacity(n * n * n);
            for (u, wu) in &gj2 {
                for (v, wv) in &gj1 {
                    for (w, ww) in &gl {
                        points.push([*u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v)]);
                        weights.push(wu * wv * ww);
                    }
                }
            }
            QuadratureRule {
                kind,
                degree,
                points,
                weights,
            }
        }
    }
}

/// Gauss-Jacobi nodes and weights on [0, 1] for the weight `(1 - t)^alpha`,
/// by the Golub-Welsch eigenvalue method on the Jacobi recurrence matrix.
fn gauss_jacobi_01(n: usize, alpha: f64) -> Vec<(f64, f64)> {
    let beta = 0.0f64;
    let mut jac = nalgebra::DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (alpha + beta + 2.0)
        } else {
            (beta * beta - alpha * alpha)
                / ((2.0 * kf + alpha + beta) * (2.0 * kf + alpha + beta + 2.0))
        };
        jac[(k, k)] = diag;
        if k >= 1 {
            let num = 4.0 * kf * (kf + alpha) * (kf + beta) * (kf + alpha + beta);
            let den = (2.0 * kf + alpha + beta).powi(2)
                * (2.0 * kf + alpha + beta + 1.0)
                * (2.0 * kf + alpha + beta - 1.0);
            let e = (num / den).sqrt();
            jac[(k, k - 1)] = e;
            jac[(k - 1, k)] = e;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mu0 = 2f64.powf(alpha + 1.0) / (alpha + 1.0);
    let mut out: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = mu0 * eig.eigenvectors[(0, i)].powi(2);
            // map [-1, 1] to [0, 1]; the weight (1-x)^alpha picks up 2^-alpha
            ((1.0 + x) / 2.0, w / 2f64.powf(alpha + 1.0))
        })
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}
