//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned here. Runtime budgets are asserted where the
//! criterion carries one.

use std::sync::OnceLock;
use std::time::Instant;

use fracflow::assembly::{functional_by_blocks, CrossWeighting};
use fracflow::geometry::{Side, TetPlaneRelation};
use fracflow::harness::errors::StudyResult;
use fracflow::harness::{
    cases, convergence_study, run_case, sample_segments, Segment,
};
use fracflow::optimizer::{solve_kkt_direct, ReducedSystem};
use fracflow::reference::{
    sample_on_lines, solve_equidim_2d, test2_lines, test2_reference, test3_lines, test3_reference,
};
use fracflow::nalgebra::{Vector2, Vector3};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "{} criterion {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// test1 refinement study, shared between the rate and iteration criteria.
fn test1_study() -> &'static (StudyResult, f64) {
    static STUDY: OnceLock<(StudyResult, f64)> = OnceLock::new();
    STUDY.get_or_init(|| {
        let start = Instant::now();
        let study = convergence_study(&cases::test1(), 4).expect("test1 study");
        (study, start.elapsed().as_secs_f64())
    })
}

#[test]
fn criterion_1_exactness_of_the_piecewise_linear_case() {
    let start = Instant::now();
    let case = cases::test0();
    let analytic = case.analytic.as_ref().unwrap();
    let mut worst_nodal = 0.0f64;
    let mut worst_hf = 0.0f64;
    let mut worst_j = 0.0f64;
    let mut dofs = Vec::new();
    for level in 0..3 {
        let art = run_case(&case, level, CrossWeighting::Metric).unwrap();
        dofs.push(art.dofmap.n_free_3d);
        for (v, x) in art.mesh3d.vertices.iter().enumerate() {
            let side = if case.fracture.signed_distance(*x) >= 0.0 {
                Side::Plus
            } else {
                Side::Minus
            };
            worst_nodal = worst_nodal.max((art.state.h_d[v] - (analytic.value)(*x, side)).abs());
        }
        worst_hf = art
            .state
            .h_f
            .iter()
            .fold(worst_hf, |acc, v| acc.max(v.abs()));
        worst_j = worst_j.max(art.report.j_delta);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_nodal <= 1e-8 && worst_hf <= 1e-8 && worst_j <= 1e-14 && elapsed <= 30.0;
    report(
        "1 (exact piecewise-linear reproduction)",
        pass,
        &format!(
            "levels {dofs:?} free dofs; max nodal error {worst_nodal:.2e} (<= 1e-8), \
             max fracture pressure {worst_hf:.2e} (<= 1e-8), max J {worst_j:.2e} (<= 1e-14), \
             {elapsed:.1}s (<= 30s)"
        ),
    );
}

#[test]
fn criterion_2_optimal_convergence_rates() {
    let (study, elapsed) = test1_study();
    let l2_ok = (1.8..=2.2).contains(&study.l2_rate);
    let h1_ok = (0.85..=1.15).contains(&study.h1_rate);
    let pass = l2_ok && h1_ok && study.reports.len() == 4 && *elapsed <= 600.0;
    report(
        "2 (optimal convergence rates)",
        pass,
        &format!(
            "4 levels, L2 rate {:.3} (in [1.8, 2.2]), H1 rate {:.3} (in [0.85, 1.15]), {:.0}s (<= 600s)",
            study.l2_rate, study.h1_rate, elapsed
        ),
    );
}

#[test]
fn criterion_3_conjugate_gradient_iteration_counts() {
    let (study, _) = test1_study();
    // nominal counts the method needs on comparable meshes; measured counts
    // must stay within a factor of three of them
    let nominal_test1 = [11usize, 12, 11, 11];
    let mut ok = true;
    let mut detail = String::new();
    for (r, nominal) in study.reports.iter().zip(nominal_test1) {
        let within = r.iterations <= 30
            && r.iterations * 3 >= nominal
            && r.iterations <= nominal * 3;
        ok &= within;
        detail += &format!("test1 L{}: {} (nominal {nominal}); ", r.level, r.iterations);
    }
    let art2 = run_case(&cases::test2(), 0, CrossWeighting::Metric).unwrap();
    let n2 = art2.report.iterations;
    ok &= art2.report.converged && n2 <= 300 && n2 * 3 >= 115 && n2 <= 115 * 3;
    detail += &format!("test2: {n2} (nominal 115, <= 300); ");
    let art3 = run_case(&cases::test3(), 0, CrossWeighting::Metric).unwrap();
    let n3 = art3.report.iterations;
    ok &= art3.report.converged && n3 <= 40 && n3 * 3 >= 12 && n3 <= 12 * 3;
    detail += &format!("test3: {n3} (nominal 12, <= 40)");
    report("3 (conjugate gradient iteration counts)", ok, &detail);
}

#[test]
fn criterion_4_direct_saddle_point_oracle_agreement() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for case in [cases::test0(), cases::test1()] {
        let art = run_case(&case, 0, CrossWeighting::Metric).unwrap();
        let kkt = solve_kkt_direct(&art.blocks, &art.dofmap, CrossWeighting::Metric).unwrap();
        let unknowns = art.dofmap.n_free_3d
            + art.dofmap.n_free_2d
            + art.dofmap.m_total()
            + art.dofmap.n_free_3d
            + art.dofmap.n_free_2d;
        assert!(unknowns <= 2000, "dense oracle instance too large: {unknowns}");
        // per-field relative difference, guarded for near-zero fields by the
        // overall solution scale
        let scale = kkt
            .state
            .h_d
            .iter()
            .chain(&kkt.state.psi_plus)
            .fold(0.0f64, |a, b| a.max(b.abs()));
        let field_diff = |a: &[f64], b: &[f64]| -> f64 {
            let num = a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            let den = b.iter().map(|y| y * y).sum::<f64>().sqrt();
            num / den.max(1e-6 * scale)
        };
        let diffs = [
            field_diff(&art.state.h_d, &kkt.state.h_d),
            field_diff(&art.state.h_f, &kkt.state.h_f),
            field_diff(&art.state.psi_plus, &kkt.state.psi_plus),
            field_diff(&art.state.psi_minus, &kkt.state.psi_minus),
            field_diff(&art.state.psi_frac, &kkt.state.psi_frac),
        ];
        let max_diff = diffs.iter().cloned().fold(0.0, f64::max);
        let sigma_ok = kkt.sigma_min > 0.0 && kkt.sigma_min > 1e-12 * kkt.sigma_max;
        ok &= max_diff <= 1e-6 && sigma_ok;
        detail += &format!(
            "{}: max field diff {:.2e} (<= 1e-6), sigma_min {:.2e} > 0; ",
            case.name, max_diff, kkt.sigma_min
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed <= 60.0;
    detail += &format!("{elapsed:.1}s (<= 60s)");
    report("4 (direct saddle-point oracle agreement)", ok, &detail);
}

#[test]
fn criterion_5_gradient_matches_central_differences() {
    use rand::SeedableRng;
    use rand::Rng;
    let case = cases::test1();
    let art = run_case(&case, 0, CrossWeighting::Metric).unwrap();
    let reduced = ReducedSystem::new(&art.blocks, &art.dofmap, CrossWeighting::Metric).unwrap();
    let n = reduced.layout.total();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let j_of = |psi: &[f64]| -> f64 {
        let (h3, h2) = reduced.solve_state(psi, false);
        let (pp, pm, pf) = reduced.layout.split(psi);
        functional_by_blocks(&art.blocks, CrossWeighting::Metric, &h3, &h2, pp, pm, pf)
    };
    // base point away from the minimizer
    let psi_base: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let scale = psi_base.iter().map(|v| v * v).sum::<f64>().sqrt();
    let grad = reduced.gradient(&psi_base, false).gradient;
    let mut ok = true;
    let mut per_step = vec![0.0f64; 3];
    for _ in 0..10 {
        let mut dir: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        dir.iter_mut().for_each(|v| *v /= norm);
        // the assembled gradient is half the derivative of the quadratic form
        let directional: f64 =
            2.0 * grad.iter().zip(&dir).map(|(g, d)| g * d).sum::<f64>();
        for (k, step_scale) in [1e-4, 1e-5, 1e-6].into_iter().enumerate() {
            let s = step_scale * scale;
            let plus: Vec<f64> = psi_base.iter().zip(&dir).map(|(p, d)| p + s * d).collect();
            let minus: Vec<f64> = psi_base.iter().zip(&dir).map(|(p, d)| p - s * d).collect();
            let fd = (j_of(&plus) - j_of(&minus)) / (2.0 * s);
            let rel = (fd - directional).abs() / directional.abs().max(1e-300);
            per_step[k] = per_step[k].max(rel);
            ok &= rel <= 1e-6;
        }
    }
    // the reduced functional is exactly quadratic, so central differences are
    // exact up to rounding at every step; the observed errors sit on the
    // rounding floor instead of an O(step^2) decay curve
    report(
        "5 (gradient versus central differences)",
        ok,
        &format!(
            "10 directions, worst relative error per step {{1e-4, 1e-5, 1e-6}}*scale: \
             {:.2e}, {:.2e}, {:.2e} (each <= 1e-6)",
            per_step[0], per_step[1], per_step[2]
        ),
    );
}

#[test]
fn criterion_6_reference_agreement_for_the_permeable_barrier_case() {
    let start = Instant::now();
    let case = cases::test2();
    let art = run_case(&case, 0, CrossWeighting::Metric).unwrap();
    let oracle = solve_equidim_2d(&test2_reference()).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for (x, (a, b)) in test2_lines() {
        let seg = Segment {
            label: format!("x={x}"),
            start: Vector3::new(a.x, a.y, 0.5),
            end: Vector3::new(b.x, b.y, 0.5),
        };
        let solver = sample_segments(&art, &case.fracture, &[seg], 200).unwrap();
        let reference = sample_on_lines(&oracle, &[(a, b)], 200).unwrap();
        let num: f64 = solver[0]
            .iter()
            .zip(&reference[0])
            .map(|((_, _, s), (_, r))| (s - r) * (s - r))
            .sum::<f64>()
            .sqrt();
        let den: f64 = reference[0].iter().map(|(_, r)| r * r).sum::<f64>().sqrt();
        let rel = num / den;
        ok &= rel <= 0.05;
        detail += &format!("x={x}: {:.3}; ", rel);
    }
    let elapsed = start.elapsed().as_secs_f64();
    ok &= elapsed <= 300.0;
    detail += &format!("all <= 0.05; {elapsed:.0}s (<= 300s)");
    report("6 (equi-dimensional agreement, permeable barrier)", ok, &detail);
}

#[test]
fn criterion_7_discontinuity_structure_of_the_interior_tip_case() {
    // the line comparison needs the finest ladder level; see the decisions
    // log for the mesh-size study behind this choice
    let case = cases::test3();
    let level = case.levels.len() - 1;
    let art = run_case(&case, level, CrossWeighting::Metric).unwrap();
    let ev = art.evaluator_3d(&case.fracture);
    let jump = |y: f64, z: f64| -> f64 {
        let x = Vector3::new(0.5, y, z);
        ev.eval(x, Side::Plus, &art.state.h_d).unwrap()
            - ev.eval(x, Side::Minus, &art.state.h_d).unwrap()
    };
    let barycenter_jump = jump(0.25, 0.25).abs();
    let mut beyond_max = 0.0f64;
    for i in 0..20 {
        for j in 0..20 {
            let (a, b) = (0.02 + 0.96 * i as f64 / 19.0, 0.02 + 0.96 * j as f64 / 19.0);
            if a > 0.6 {
                beyond_max = beyond_max.max(jump(a, b).abs());
            }
            if b > 0.6 {
                beyond_max = beyond_max.max(jump(a, b).abs());
            }
        }
    }
    let oracle = solve_equidim_2d(&test3_reference()).unwrap();
    let mut lines_ok = true;
    let mut worst_line = 0.0f64;
    let mut detail = String::new();
    for (y, (a, b)) in test3_lines() {
        let seg = Segment {
            label: format!("y={y}"),
            start: Vector3::new(a.x, a.y, 0.02),
            end: Vector3::new(b.x, b.y, 0.02),
        };
        let solver = sample_segments(&art, &case.fracture, &[seg], 200).unwrap();
        let reference = sample_on_lines(&oracle, &[(a, b)], 200).unwrap();
        let num: f64 = solver[0]
            .iter()
            .zip(&reference[0])
            .map(|((_, _, s), (_, r))| (s - r) * (s - r))
            .sum::<f64>()
            .sqrt();
        let den: f64 = reference[0].iter().map(|(_, r)| r * r).sum::<f64>().sqrt();
        let rel = num / den;
        worst_line = worst_line.max(rel);
        lines_ok &= rel <= 0.05;
        detail += &format!("y={y}: {:.4}; ", rel);
    }
    let pass = barycenter_jump > 0.1 && beyond_max <= 1e-10 && lines_ok;
    report(
        "7 (interior-tip discontinuity structure)",
        pass,
        &format!(
            "barycenter jump {barycenter_jump:.3} (> 0.1), max jump beyond the tip \
             {beyond_max:.2e} (<= 1e-10), lines {detail}worst {worst_line:.4} (<= 0.05)"
        ),
    );
}

#[test]
fn criterion_8_randomized_geometry_property_suite() {
    use fracflow::geometry::box_mesh::{
        generate_box_tet_mesh_from_lines, offset_gridlines, tet_volume, BoundaryCondition,
        BoxDomain, Mesh3D,
    };
    use fracflow::geometry::clip::{clip_halfplane, polygon_area};
    use fracflow::geometry::{
        classify_and_cut, clip_cross_section_with_triangle, generate_rectangle_grid,
        FractureGeometry,
    };
    use fracflow::xfem::{build_dof_map, EnrichmentSpec, Evaluator3D};
    use rand::Rng;
    use rand::SeedableRng;

    let start = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut instances = 0usize;

    // 400 random tetrahedron/plane splits: exact volume conservation
    for _ in 0..400 {
        let mut verts;
        loop {
            verts = [(); 4].map(|_| {
                Vector3::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>())
            });
            if tet_volume(verts[0], verts[1], verts[2], verts[3]).abs() > 1e-3 {
                break;
            }
        }
        if tet_volume(verts[0], verts[1], verts[2], verts[3]) < 0.0 {
            verts.swap(2, 3);
        }
        let mesh = Mesh3D {
            vertices: verts.to_vec(),
            tets: vec![[0, 1, 2, 3]],
            boundary_faces: vec![],
            delta: 1.0,
        };
        let axis = Vector3::new(
            rng.random::<f64>() - 0.5,
            rng.random::<f64>() - 0.5,
            rng.random::<f64>() - 0.5,
        )
        .normalize();
        let frac = FractureGeometry::new(
            axis,
            Vector3::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()),
            orthogonal_to(axis),
            vec![
                Vector2::new(-10.0, -10.0),
                Vector2::new(10.0, -10.0),
                Vector2::new(10.0, 10.0),
                Vector2::new(-10.0, 10.0),
            ],
            vec![],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        if let TetPlaneRelation::Split(split) = &cut.relation[0] {
            let total: f64 = split
                .sub_plus
                .iter()
                .chain(&split.sub_minus)
                .map(|t| tet_volume(t[0], t[1], t[2], t[3]))
                .sum();
            let parent = mesh.tet_volume(0);
            assert!(
                (total - parent).abs() <= 1e-12 * parent,
                "volume conservation violated: {total} vs {parent}"
            );
        }
        instances += 1;
    }

    // 150 random meshes and oblique fracture planes: the clipped tiling
    // equals the independently clipped plane/box/footprint polygon area
    for _ in 0..150 {
        let n = 2 + (rng.random::<u64>() % 3) as usize;
        let domain = BoxDomain::new(
            Vector3::zeros(),
            Vector3::new(1.0, 1.0, 1.0),
            [
                BoundaryCondition::Dirichlet(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
            ],
        )
        .unwrap();
        let o = rng.random::<f64>() * 0.9;
        let mesh = generate_box_tet_mesh_from_lines(
            &domain,
            &offset_gridlines(0.0, 1.0, n, 0.0),
            &offset_gridlines(0.0, 1.0, n, o),
            &offset_gridlines(0.0, 1.0, n + 1, o * 0.5),
        )
        .unwrap();
        let axis = Vector3::new(
            rng.random::<f64>() - 0.5,
            rng.random::<f64>() - 0.5,
            1.0,
        )
        .normalize();
        let x0 = Vector3::new(0.5, 0.5, 0.3 + 0.4 * rng.random::<f64>());
        let half = 0.2 + 0.4 * rng.random::<f64>();
        let frac = FractureGeometry::new(
            axis,
            x0,
            orthogonal_to(axis),
            vec![
                Vector2::new(-half, -half),
                Vector2::new(half, -half),
                Vector2::new(half, half),
                Vector2::new(-half, half),
            ],
            vec![],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        let tiled = cut.tiled_area();
        let oracle = plane_box_footprint_area(&frac, 1.0);
        assert!(
            (tiled - oracle).abs() <= 1e-10 * oracle.max(1e-8),
            "tiling {tiled} vs plane/box/footprint clip {oracle}"
        );
        instances += 1;
    }

    // 250 random convex-polygon/triangle clips: complement additivity
    for _ in 0..250 {
        let square = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(1.0, 1.0),
            Vector2::new(0.0, 1.0),
        ];
        let mut tri = [(); 3].map(|_| {
            Vector2::new(
                rng.random::<f64>() * 3.0 - 1.0,
                rng.random::<f64>() * 3.0 - 1.0,
            )
        });
        if polygon_area(&tri) < 0.0 {
            tri.swap(1, 2);
        }
        if polygon_area(&tri).abs() < 1e-3 {
            continue;
        }
        let mut current = square.clone();
        let mut removed = 0.0;
        for i in 0..3 {
            let p = tri[i];
            let q = tri[(i + 1) % 3];
            let a = -(q.y - p.y);
            let b = q.x - p.x;
            let c = -(a * p.x + b * p.y);
            removed += polygon_area(&clip_halfplane(&current, -a, -b, -c));
            current = clip_halfplane(&current, a, b, c);
        }
        let inter = polygon_area(&current);
        assert!(
            (inter + removed - 1.0).abs() <= 1e-12,
            "clip additivity violated: {inter} + {removed} != 1"
        );
        let pieces = clip_cross_section_with_triangle(&square, &tri);
        let pieces_area: f64 = pieces.iter().map(|t| polygon_area(t)).sum();
        assert!((pieces_area - inter).abs() <= 1e-12);
        instances += 1;
    }

    // 200 partition-of-unity and shifted-enrichment checks on a cut mesh
    {
        let domain = BoxDomain::new(
            Vector3::zeros(),
            Vector3::new(1.0, 1.0, 1.0),
            [
                BoundaryCondition::Dirichlet(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
                BoundaryCondition::Neumann(0.0),
            ],
        )
        .unwrap();
        let mesh = generate_box_tet_mesh_from_lines(
            &domain,
            &offset_gridlines(0.0, 1.0, 5, 0.0),
            &offset_gridlines(0.0, 1.0, 5, 0.3),
            &offset_gridlines(0.0, 1.0, 5, 0.3),
        )
        .unwrap();
        let frac = FractureGeometry::axis_rectangle(
            0,
            0.5,
            (0.0, 0.6),
            (0.0, 0.6),
            [false, true, true, false],
            vec![BoundaryCondition::Neumann(0.0); 4],
        )
        .unwrap();
        let cut = classify_and_cut(&mesh, &frac);
        assert!(!cut.edge_tets.is_empty());
        let spec = EnrichmentSpec::new(&frac);
        let mesh2d =
            generate_rectangle_grid(Vector2::zeros(), Vector2::new(0.6, 0.6), 5, 5).unwrap();
        let dofmap = build_dof_map(&mesh, &mesh2d, &cut, &frac, &spec, &|tag| {
            domain.condition_for_tag(tag)
        });
        let ev = Evaluator3D::new(&mesh, &cut, &dofmap, &frac, &spec);
        let mut ones = vec![0.0; dofmap.n_dofs_3d];
        ones[..dofmap.n_std].fill(1.0);
        let mut enriched_only = vec![0.0; dofmap.n_dofs_3d];
        for e in dofmap.enriched.iter().flatten() {
            enriched_only[e.dof] = 1.0;
        }
        let n_vertex_checks = dofmap.enriched.iter().flatten().count();
        for (v, e) in dofmap.enriched.iter().enumerate() {
            if e.is_none() {
                continue;
            }
            let x = mesh.vertices[v];
            let side = if frac.signed_distance(x) >= 0.0 {
                Side::Plus
            } else {
                Side::Minus
            };
            let val = ev.eval(x, side, &enriched_only).unwrap();
            assert!(val.abs() <= 1e-13, "shifted enrichment at vertex {v}: {val}");
        }
        for _ in 0..(200 - n_vertex_checks.min(150)) {
            let x = Vector3::new(rng.random(), rng.random(), rng.random());
            let pu = ev.eval(x, Side::Plus, &ones).unwrap();
            assert!((pu - 1.0).abs() <= 1e-13, "partition of unity: {pu}");
        }
        instances += 200;
    }

    let elapsed = start.elapsed().as_secs_f64();
    let pass = instances >= 1000 && elapsed <= 60.0;
    report(
        "8 (randomized geometry property suite)",
        pass,
        &format!("{instances} randomized instances, {elapsed:.1}s (<= 60s)"),
    );
}

fn orthogonal_to(n: Vector3<f64>) -> Vector3<f64> {
    let trial = if n.x.abs() < 0.9 {
        Vector3::new(1.0, 0.0, 0.0)
    } else {
        Vector3::new(0.0, 1.0, 0.0)
    };
    (trial - n * trial.dot(&n)).normalize()
}

/// Independent tiling oracle: the fracture-plane polygon clipped by the six
/// half-spaces of the unit box, intersected with the footprint polygon.
fn plane_box_footprint_area(frac: &fracflow::geometry::FractureGeometry, box_edge: f64) -> f64 {
    use fracflow::geometry::clip::{clip_halfplane, polygon_area};
    // large in-plane rectangle, clipped against the box
    let mut poly = vec![
        Vector2::new(-100.0, -100.0),
        Vector2::new(100.0, -100.0),
        Vector2::new(100.0, 100.0),
        Vector2::new(-100.0, 100.0),
    ];
    for axis in 0..3 {
        // x_axis(u, v) = x0[axis] + u U[axis] + v V[axis] within [0, box_edge]
        let (u_a, v_a, x0_a) = (frac.axis_u[axis], frac.axis_v[axis], frac.x0[axis]);
        for (a, b, c) in [(u_a, v_a, x0_a), (-u_a, -v_a, box_edge - x0_a)] {
            poly = clip_halfplane(&poly, a, b, c);
            if poly.len() < 3 {
                return 0.0;
            }
        }
    }
    // intersect with the footprint polygon
    let n = frac.polygon.len();
    for i in 0..n {
        let p = frac.polygon[i];
        let q = frac.polygon[(i + 1) % n];
        let a = -(q.y - p.y);
        let b = q.x - p.x;
        let c = -(a * p.x + b * p.y);
        poly = clip_halfplane(&poly, a, b, c);
        if poly.len() < 3 {
            return 0.0;
        }
    }
    polygon_area(&poly)
}
