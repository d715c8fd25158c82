//! Reference problems mirroring the validation cases on the cross-section
//! plane, with the fracture represented as a strip of physical width.
//!
//! The strip conductivity is recovered from the reduced-model data by the
//! inverse of the dimensional reduction: tangential `K_F / d`, normal
//! `eta * d`. For both cases this yields an isotropic strip material.

use nalgebra::{Matrix2, Vector2};

use crate::harness::cases::FRACTURE_WIDTH;
use super::equidim::{graded_lines, EquiDim2DCase};

/// Cross-section reference for the piecewise permeable/barrier fracture:
/// the (x, y) plane at mid-height, strip along y = 1.
pub fn test2_reference() -> EquiDim2DCase {
    let d = FRACTURE_WIDTH;
    let (y0, y1) = (1.0 - d / 2.0, 1.0 + d / 2.0);
    EquiDim2DCase {
        x_lines: graded_lines(&[(0.0, 1.0, 64)]),
        y_lines: graded_lines(&[
            (0.0, 0.9, 45),
            (0.9, y0, 19),
            (y0, y1, 10),
            (y1, 1.1, 19),
            (1.1, 2.0, 45),
        ]),
        conductivity: Box::new(move |p| {
            let k = if p.y >= y0 && p.y <= y1 {
                // strip: K_F/d and eta*d coincide per region
                if p.x < 0.25 || p.x > 0.75 {
                    1.0
                } else {
                    2e-3
                }
            } else {
                1.0
            };
            Matrix2::identity() * k
        }),
        dirichlet: Box::new(|p| {
            if p.y.abs() < 1e-12 {
                Some(0.0)
            } else if (p.y - 2.0).abs() < 1e-12 {
                Some(1.0)
            } else {
                None
            }
        }),
    }
}

/// Cross-section reference for the interior-tip barrier: unit square with a
/// strip along x = 0.5 extending over y <= 0.5.
pub fn test3_reference() -> EquiDim2DCase {
    let d = FRACTURE_WIDTH;
    let (x0, x1) = (0.5 - d / 2.0, 0.5 + d / 2.0);
    EquiDim2DCase {
        x_lines: graded_lines(&[
            (0.0, 0.45, 18),
            (0.45, x0, 9),
            (x0, x1, 10),
            (x1, 0.55, 9),
            (0.55, 1.0, 18),
        ]),
        y_lines: graded_lines(&[(0.0, 0.45, 18), (0.45, 0.55, 25), (0.55, 1.0, 18)]),
        conductivity: Box::new(move |p| {
            let k = if p.x >= x0 && p.x <= x1 && p.y <= 0.5 {
                1e-7
            } else {
                1.0
            };
            Matrix2::identity() * k
        }),
        dirichlet: Box::new(|p| {
            if p.x.abs() < 1e-12 {
                Some(0.0)
            } else if (p.x - 1.0).abs() < 1e-12 {
                Some(1.0)
            } else {
                None
            }
        }),
    }
}

/// Sampling lines of the cross-section comparisons, as 2D segments in the
/// reference plane: five lines along y for the permeable/barrier case.
pub fn test2_lines() -> Vec<(f64, (Vector2<f64>, Vector2<f64>))> {
    [0.1, 0.3, 0.5, 0.7, 0.9]
        .into_iter()
        .map(|x| (x, (Vector2::new(x, 0.0), Vector2::new(x, 2.0))))
        .collect()
}

/// Six lines along x for the interior-tip case.
pub fn test3_lines() -> Vec<(f64, (Vector2<f64>, Vector2<f64>))> {
    [0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
        .into_iter()
        .map(|y| (y, (Vector2::new(0.0, y), Vector2::new(1.0, y))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::equidim::{sample_on_lines, solve_equidim_2d};

    #[test]
    fn test2_reference_scale_and_barrier_jump() {
        let case = test2_reference();
        let sol = solve_equidim_2d(&case).unwrap();
        // unknown count at the intended resolution
        assert!(sol.dofs() > 7_000 && sol.dofs() < 15_000, "dofs = {}", sol.dofs());
        // jump across the mid-strip barrier at x = 0.5, none at x = 0.1
        let jump_at = |x: f64| -> f64 {
            let below = sol.interpolate(Vector2::new(x, 1.0 - FRACTURE_WIDTH)).unwrap();
            let above = sol.interpolate(Vector2::new(x, 1.0 + FRACTURE_WIDTH)).unwrap();
            above - below
        };
        assert!(jump_at(0.5) > 0.2, "barrier jump {}", jump_at(0.5));
        assert!(jump_at(0.1).abs() < 0.02, "permeable jump {}", jump_at(0.1));
    }

    #[test]
    fn test3_reference_jump_dies_past_the_tip() {
        let sol = solve_equidim_2d(&test3_reference()).unwrap();
        let jump_at = |y: f64| -> f64 {
            let left = sol.interpolate(Vector2::new(0.5 - FRACTURE_WIDTH, y)).unwrap();
            let right = sol.interpolate(Vector2::new(0.5 + FRACTURE_WIDTH, y)).unwrap();
            right - left
        };
        assert!(jump_at(0.25) > 0.2, "barrier jump {}", jump_at(0.25));
        assert!(jump_at(0.8).abs() < 0.05, "post-tip jump {}", jump_at(0.8));
    }

    #[test]
    fn strip_refinement_is_converged() {
        // refining the strip resolution by 2x moves sampled values by < 1%
        let base = solve_equidim_2d(&test2_reference()).unwrap();
        let mut fine_case = test2_reference();
        let d = FRACTURE_WIDTH;
        fine_case.y_lines = graded_lines(&[
            (0.0, 0.9, 45),
            (0.9, 1.0 - d / 2.0, 38),
            (1.0 - d / 2.0, 1.0 + d / 2.0, 20),
            (1.0 + d / 2.0, 1.1, 38),
            (1.1, 2.0, 45),
        ]);
        let fine = solve_equidim_2d(&fine_case).unwrap();
        let lines: Vec<_> = test2_lines().into_iter().map(|(_, s)| s).collect();
        let a = sample_on_lines(&base, &lines, 100).unwrap();
        let b = sample_on_lines(&fine, &lines, 100).unwrap();
        for (sa, sb) in a.iter().zip(&b) {
            let num: f64 = sa
                .iter()
                .zip(sb)
                .map(|((_, va), (_, vb))| (va - vb) * (va - vb))
                .sum::<f64>()
                .sqrt();
            let den: f64 = sb.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
            assert!(num / den < 0.01, "relative change {}", num / den);
        }
    }
}
