//! Equi-dimensional 2D reference solutions: conforming P1 elements on a
//! graded rectilinear grid in which the fracture keeps its physical width
//! and appears as a thin strip of its own material.

use nalgebra::{Matrix2, Vector2};

use crate::optimizer::{Coo, LdlFactor};
use crate::{Error, Result};

/// A 2D conforming problem with piecewise-constant (per cell) anisotropic
/// diagonal conductivity and Dirichlet data assigned by boundary position.
pub struct EquiDim2DCase {
    pub x_lines: Vec<f64>,
    pub y_lines: Vec<f64>,
    pub conductivity: Box<dyn Fn(Vector2<f64>) -> Matrix2<f64> + Send + Sync>,
    pub dirichlet: Box<dyn Fn(Vector2<f64>) -> Option<f64> + Send + Sync>,
}

impl std::fmt::Debug for EquiDim2DCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EquiDim2DCase")
            .field("x_lines", &self.x_lines.len())
            .field("y_lines", &self.y_lines.len())
            .finish_non_exhaustive()
    }
}

/// Nodal reference field on the structured triangulation.
pub struct EquiDimSolution {
    pub x_lines: Vec<f64>,
    pub y_lines: Vec<f64>,
    pub values: Vec<f64>,
}

impl EquiDimSolution {
    fn nx(&self) -> usize {
        self.x_lines.len()
    }

    fn vid(&self, i: usize, j: usize) -> usize {
        j * self.nx() + i
    }

    pub fn dofs(&self) -> usize {
        self.x_lines.len() * self.y_lines.len()
    }

    /// Piecewise-linear interpolation at an interior point.
    pub fn interpolate(&self, p: Vector2<f64>) -> Result<f64> {
        let ci = cell_index(&self.x_lines, p.x)
            .ok_or(Error::PointOutsideMesh([p.x, p.y, 0.0]))?;
        let cj = cell_index(&self.y_lines, p.y)
            .ok_or(Error::PointOutsideMesh([p.x, p.y, 0.0]))?;
        let (x0, x1) = (self.x_lines[ci], self.x_lines[ci + 1]);
        let (y0, y1) = (self.y_lines[cj], self.y_lines[cj + 1]);
        let u = (p.x - x0) / (x1 - x0);
        let v = (p.y - y0) / (y1 - y0);
        let f00 = self.values[self.vid(ci, cj)];
        let f10 = self.values[self.vid(ci + 1, cj)];
        let f11 = self.values[self.vid(ci + 1, cj + 1)];
        let f01 = self.values[self.vid(ci, cj + 1)];
        // cells are split along the (0,0)-(1,1) diagonal
        Ok(if u >= v {
            f00 + (f10 - f00) * u + (f11 - f10) * v
        } else {
            f00 + (f11 - f01) * u + (f01 - f00) * v
        })
    }
}

fn cell_index(lines: &[f64], x: f64) -> Option<usize> {
    let eps = 1e-12 * (lines[lines.len() - 1] - lines[0]).abs();
    if x < lines[0] - eps || x > lines[lines.len() - 1] + eps {
        return None;
    }
    let mut lo = 0usize;
    let mut hi = lines.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if x >= lines[mid] {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo.min(lines.len() - 2))
}

/// Solves `-div(K grad u) = 0` with P1 elements on the graded grid, each
/// quad cell split into two triangles and the cell conductivity evaluated at
/// the cell centroid.
pub fn solve_equidim_2d(case: &EquiDim2DCase) -> Result<EquiDimSolution> {
    let nx = case.x_lines.len();
    let ny = case.y_lines.len();
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidMesh("reference grid needs two lines per axis".into()));
    }
    let n = nx * ny;
    let vid = |i: usize, j: usize| j * nx + i;

    let mut dirichlet = vec![None::<f64>; n];
    for j in 0..ny {
        for i in 0..nx {
            let p = Vector2::new(case.x_lines[i], case.y_lines[j]);
            if i == 0 || i + 1 == nx || j == 0 || j + 1 == ny {
                dirichlet[vid(i, j)] = (case.dirichlet)(p);
            }
        }
    }
    let mut free = vec![None::<usize>; n];
    let mut n_free = 0;
    for (v, d) in dirichlet.iter().enumerate() {
        if d.is_none() {
            free[v] = Some(n_free);
            n_free += 1;
        }
    }

    let mut coo = Coo::new(n_free, n_free);
    let mut rhs = vec![0.0; n_free];
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let (x0, x1) = (case.x_lines[i], case.x_lines[i + 1]);
            let (y0, y1) = (case.y_lines[j], case.y_lines[j + 1]);
            let k = (case.conductivity)(Vector2::new(0.5 * (x0 + x1), 0.5 * (y0 + y1)));
            let corners = [
                Vector2::new(x0, y0),
                Vector2::new(x1, y0),
                Vector2::new(x1, y1),
                Vector2::new(x0, y1),
            ];
            let ids = [vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)];
            for tri in [[0usize, 1, 2], [0, 2, 3]] {
                let v = [corners[tri[0]], corners[tri[1]], corners[tri[2]]];
                let det = (v[1] - v[0]).x * (v[2] - v[0]).y - (v[2] - v[0]).x * (v[1] - v[0]).y;
                let area = det / 2.0;
                let g1 = Vector2::new((v[2] - v[0]).y, -(v[2] - v[0]).x) / det;
                let g2 = Vector2::new(-(v[1] - v[0]).y, (v[1] - v[0]).x) / det;
                let grads = [-(g1 + g2), g1, g2];
                for a in 0..3 {
                    let ga = ids[tri[a]];
                    let kga = k * grads[a];
                    for b in 0..3 {
                        let gb = ids[tri[b]];
                        let val = area * kga.dot(&grads[b]);
                        match (free[ga], free[gb]) {
                            (Some(fa), Some(fb)) => coo.push(fa, fb, val),
                            (Some(fa), None) => {
                                rhs[fa] -= val * dirichlet[gb].unwrap();
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
    }

    let a = coo.to_csr();
    let factor = LdlFactor::new(&a, "equi-dimensional reference")?;
    let u_free = factor.solve(&rhs);
    let mut values = vec![0.0; n];
    for v in 0..n {
        values[v] = match free[v] {
            Some(fidx) => u_free[fidx],
            None => dirichlet[v].unwrap(),
        };
    }
    Ok(EquiDimSolution {
        x_lines: case.x_lines.clone(),
        y_lines: case.y_lines.clone(),
        values,
    })
}

/// Samples the reference field on 2D segments with midpoint spacing,
/// matching the solver's line-sample layout.
pub fn sample_on_lines(
    sol: &EquiDimSolution,
    segments: &[(Vector2<f64>, Vector2<f64>)],
    n_samples: usize,
) -> Result<Vec<Vec<(f64, f64)>>> {
    let mut all = Vec::with_capacity(segments.len());
    for (start, end) in segments {
        let mut rows = Vec::with_capacity(n_samples);
        for k in 0..n_samples {
            let t = (k as f64 + 0.5) / n_samples as f64;
            let p = start + (end - start) * t;
            rows.push((t, sol.interpolate(p)?));
        }
        all.push(rows);
    }
    Ok(all)
}

/// Gridline ladder built from contiguous uniform blocks `(from, to, cells)`.
pub fn graded_lines(blocks: &[(f64, f64, usize)]) -> Vec<f64> {
    let mut lines = vec![blocks[0].0];
    for &(from, to, cells) in blocks {
        for k in 1..=cells {
            lines.push(from + (to - from) * k as f64 / cells as f64);
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ramp_case(strip_k: f64) -> EquiDim2DCase {
        // unit square, u = 0 at y = 0 and u = 1 at y = 1, strip in the middle
        EquiDim2DCase {
            x_lines: graded_lines(&[(0.0, 1.0, 8)]),
            y_lines: graded_lines(&[(0.0, 0.45, 9), (0.45, 0.55, 10), (0.55, 1.0, 9)]),
            conductivity: Box::new(move |p| {
                let k = if (0.45..=0.55).contains(&p.y) { strip_k } else { 1.0 };
                Matrix2::identity() * k
            }),
            dirichlet: Box::new(|p| {
                if p.y.abs() < 1e-12 {
                    Some(0.0)
                } else if (p.y - 1.0).abs() < 1e-12 {
                    Some(1.0)
                } else {
                    None
                }
            }),
        }
    }

    #[test]
    fn homogeneous_strip_gives_the_linear_ramp() {
        let sol = solve_equidim_2d(&ramp_case(1.0)).unwrap();
        for (j, y) in sol.y_lines.iter().enumerate() {
            for i in 0..sol.x_lines.len() {
                let v = sol.values[j * sol.x_lines.len() + i];
                assert_relative_eq!(v, *y, epsilon = 1e-10);
            }
        }
        // interpolation reproduces the ramp exactly
        let samples = sample_on_lines(
            &sol,
            &[(Vector2::new(0.5, 0.0), Vector2::new(0.5, 1.0))],
            7,
        )
        .unwrap();
        for (t, v) in &samples[0] {
            assert_relative_eq!(*v, *t, epsilon = 1e-10);
        }
    }

    #[test]
    fn barrier_strip_concentrates_the_pressure_drop() {
        let sol = solve_equidim_2d(&ramp_case(1e-4)).unwrap();
        let mid_low = sol.interpolate(Vector2::new(0.3, 0.44)).unwrap();
        let mid_high = sol.interpolate(Vector2::new(0.3, 0.56)).unwrap();
        // almost the whole unit drop happens across the strip
        assert!(mid_high - mid_low > 0.9, "{mid_low} vs {mid_high}");
        // discrete maximum principle within Dirichlet bounds
        for v in &sol.values {
            assert!(*v >= -1e-10 && *v <= 1.0 + 1e-10);
        }
    }
}
