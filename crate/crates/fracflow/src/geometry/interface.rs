//! Quadrature decomposition of the interface for mixed-mesh integrals.
//!
//! Each cross-section polygon of a cut element is clipped against every
//! overlapping triangle of the fracture mesh; the resulting pieces carry
//! quadrature points usable for integrals of products of 3D traces, fracture
//! basis functions and piecewise-constant interface functions.

use nalgebra::Vector2;

use crate::Result;
use super::clip::{clip_cross_section_with_triangle, polygon_area};
use super::cut::{CutClassification, CutKind};
use super::quadrature::{quadrature, CellKind};
use super::tri_mesh::Mesh2D;

/// One clipped piece `cross-section(tet) ∩ triangle(tri)` with quadrature
/// points in fracture-local coordinates. Weights carry the piece area.
#[derive(Debug, Clone)]
pub struct InterfacePiece {
    pub tet: usize,
    pub tri: usize,
    pub points: Vec<Vector2<f64>>,
    pub weights: Vec<f64>,
}

/// Quadrature tiling of the meshed interface region.
#[derive(Debug)]
pub struct InterfaceQuadrature {
    pub pieces: Vec<InterfacePiece>,
    pub total_area: f64,
}

/// Builds the interface quadrature. Pieces on elements crossed by an interior
/// fracture edge use `degree_edge` (the enrichment is not polynomial there),
/// all others `degree`.
pub fn build_interface_quadrature(
    mesh2d: &Mesh2D,
    cut: &CutClassification,
    degree: usize,
    degree_edge: usize,
) -> Result<InterfaceQuadrature> {
    let rule_std = quadrature(CellKind::Triangle, degree)?;
    let rule_edge = quadrature(CellKind::Triangle, degree_edge)?;

    // bin triangles on a uniform grid over the fracture mesh bounding box
    let (lo, hi) = mesh2d_bounds(mesh2d);
    let nbins = (mesh2d.triangles.len() as f64).sqrt().ceil() as usize + 1;
    let ext = hi - lo;
    let inv = Vector2::new(
        nbins as f64 / ext.x.max(1e-300),
        nbins as f64 / ext.y.max(1e-300),
    );
    let bin_of = |p: Vector2<f64>| -> (usize, usize) {
        let bx = ((p.x - lo.x) * inv.x).floor().clamp(0.0, nbins as f64 - 1.0) as usize;
        let by = ((p.y - lo.y) * inv.y).floor().clamp(0.0, nbins as f64 - 1.0) as usize;
        (bx, by)
    };
    let mut bins: Vec<Vec<usize>> = vec![Vec::new(); nbins * nbins];
    for (t, _) in mesh2d.triangles.iter().enumerate() {
        let v = mesh2d.triangle_vertices(t);
        let (lo_b, hi_b) = tri_bin_range(&v, &bin_of);
        for by in lo_b.1..=hi_b.1 {
            for bx in lo_b.0..=hi_b.0 {
                bins[by * nbins + bx].push(t);
            }
        }
    }

    let mut pieces = Vec::new();
    let mut total_area = 0.0;
    for (tet, section) in &cut.cross_sections {
        let rule = if cut.kind[*tet] == CutKind::EdgeCut {
            &rule_edge
        } else {
            &rule_std
        };
        let mut cand: Vec<usize> = Vec::new();
        let (lo_b, hi_b) = poly_bin_range(section, &bin_of);
        for by in lo_b.1..=hi_b.1 {
            for bx in lo_b.0..=hi_b.0 {
                cand.extend_from_slice(&bins[by * nbins + bx]);
            }
        }
        cand.sort_unstable();
        cand.dedup();

        let section_area = polygon_area(section);
        for tri in cand {
            let tv = mesh2d.triangle_vertices(tri);
            let sub = clip_cross_section_with_triangle(section, &tv);
            if sub.is_empty() {
                continue;
            }
            let mut points = Vec::new();
            let mut weights = Vec::new();
            let mut piece_area = 0.0;
            for st in &sub {
                let a = polygon_area(st);
                if a <= 1e-14 * section_area.max(1e-300) {
                    continue;
                }
                piece_area += a;
                let scale = a / rule.reference_measure();
                for (p, w) in rule.points.iter().zip(&rule.weights) {
                    let x = st[0] + (st[1] - st[0]) * p[0] + (st[2] - st[0]) * p[1];
                    points.push(x);
                    weights.push(w * scale);
                }
            }
            if piece_area > 0.0 {
                total_area += piece_area;
                pieces.push(InterfacePiece {
                    tet: *tet,
                    tri,
                    points,
                    weights,
                });
            }
        }
    }

    Ok(InterfaceQuadrature { pieces, total_area })
}

fn mesh2d_bounds(mesh: &Mesh2D) -> (Vector2<f64>, Vector2<f64>) {
    let mut lo = Vector2::repeat(f64::INFINITY);
    let mut hi = Vector2::repeat(f64::NEG_INFINITY);
    for v in &mesh.vertices {
        lo = Vector2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Vector2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    (lo, hi)
}

fn tri_bin_range(
    v: &[Vector2<f64>; 3],
    bin_of: &impl Fn(Vector2<f64>) -> (usize, usize),
) -> ((usize, usize), (usize, usize)) {
    poly_bin_range(v.as_slice(), bin_of)
}

fn poly_bin_range(
    pts: &[Vector2<f64>],
    bin_of: &impl Fn(Vector2<f64>) -> (usize, usize),
) -> ((usize, usize), (usize, usize)) {
    let mut lo = (usize::MAX, usize::MAX);
    let mut hi = (0usize, 0usize);
    for p in pts {
        let b = bin_of(*p);
        lo = (lo.0.min(b.0), lo.1.min(b.1));
        hi = (hi.0.max(b.0), hi.1.max(b.1));
    }
    (lo, hi)
}
