//! Command line driver: runs the validation cases, refinement studies,
//! reference solutions and solver/reference comparisons.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracflow::nalgebra::Vector3;

use fracflow::assembly::CrossWeighting;
use fracflow::harness::{
    self, case_by_name, compute_error_norms, convergence_study, dump_blocks,
    export_interface_comparison, export_line_samples, export_slice_plot, export_vtk_fracture,
    export_vtk_matrix, run_case_with, sample_segments, Segment,
};
use fracflow::geometry::mesh_io;
use fracflow::reference::{
    sample_on_lines, solve_equidim_2d, test2_lines, test2_reference, test3_lines, test3_reference,
};

#[derive(Parser)]
#[command(name = "fracflow", about = "Darcy flow with a planar fracture or barrier on non-conforming meshes", version)]
struct Cli {
    /// Output directory (overridden by FRACFLOW_OUT)
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one case at one refinement level and export artifacts
    Run {
        case: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Solver tolerance override (relative reduced-gradient norm)
        #[arg(long)]
        tol: Option<f64>,
        /// Dump every assembled block in coordinate format
        #[arg(long)]
        dump_blocks: bool,
        /// Export the generated meshes in TET3D / TRI2D format
        #[arg(long)]
        export_mesh: bool,
        /// Exit with code 2 if the case acceptance thresholds fail
        #[arg(long)]
        check: bool,
    },
    /// Refinement study with error norms and convergence rates
    Study {
        case: String,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long)]
        check: bool,
    },
    /// Solve the equi-dimensional cross-section reference of a case
    Reference { case: String },
    /// Overlay solver and reference line samples
    Compare {
        case: String,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        check: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = std::env::var("FRACFLOW_OUT")
        .map(PathBuf::from)
        .unwrap_or(cli.out.clone());
    match dispatch(&cli.command, &out_dir) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("acceptance thresholds violated");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: &Command, out: &Path) -> fracflow::Result<bool> {
    match cmd {
        Command::Run {
            case,
            level,
            tol,
            dump_blocks: dump,
            export_mesh,
            check,
        } => {
            let case = case_by_name(case)?;
            let art = run_case_with(&case, *level, CrossWeighting::Metric, *tol)?;
            let r = &art.report;
            println!(
                "{} level {}: {} iterations, relative residual {:.3e}, J = {:.6e} (gram {:.6e} / weighted {:.6e})",
                case.name, level, r.iterations, r.relative_residual, r.j_delta,
                r.j_gram_metric, r.j_gram_transmissibility
            );
            println!(
                "dofs: 3d {} (free {}), fracture {}, interface {}; wall {:.2}s",
                art.dofmap.n_dofs_3d,
                art.dofmap.n_free_3d,
                art.dofmap.n_dofs_frac,
                art.dofmap.m_total(),
                r.wall_time
            );
            let dir = out.join(case.name).join(format!("level{level}"));
            std::fs::create_dir_all(&dir)?;
            export_vtk_matrix(&dir.join("matrix.vtk"), &art, &case.fracture)?;
            export_vtk_fracture(&dir.join("fracture.vtk"), &art, &case.fracture)?;
            let slice = slice_spec(case.name);
            export_slice_plot(&dir.join("slice.csv"), &art, &case.fracture, slice.0, slice.1, 100)?;
            export_interface_comparison(&dir.join("interface.csv"), &art, &case.fracture)?;
            let mut report_file = std::fs::File::create(dir.join("report.txt"))?;
            r.write_key_values(&mut report_file)?;
            if *dump {
                dump_blocks(&dir.join("blocks"), &art)?;
            }
            if *export_mesh {
                let mut f = std::fs::File::create(dir.join("mesh.tet3d"))?;
                mesh_io::write_tet3d(&art.mesh3d, &mut f)?;
                let mut f = std::fs::File::create(dir.join("fracture.tri2d"))?;
                mesh_io::write_tri2d(&art.mesh2d, &mut f)?;
            }
            if let Some(analytic) = &case.analytic {
                let (l2, _, h1) = compute_error_norms(&art, &case, analytic)?;
                println!("errors vs analytic: L2 {:.6e}, H1 {:.6e}", l2, h1);
            }
            println!("artifacts in {}", dir.display());
            if *check {
                return Ok(run_check(&case, &art));
            }
            Ok(true)
        }
        Command::Study { case, levels, check } => {
            let case = case_by_name(case)?;
            if case.analytic.is_none() {
                return Err(fracflow::Error::InvalidMesh(format!(
                    "case `{}` has no analytic solution for a study",
                    case.name
                )));
            }
            let study = convergence_study(&case, *levels)?;
            println!("# mesh parameter: h = max element diameter; the volume-like");
            println!("# refinement parameter of ladder tables scales as delta ~ h^3");
            println!(
                "{:>5} {:>10} {:>12} {:>8} {:>8} {:>6} {:>12} {:>12}",
                "level", "h", "delta~h^3", "N_D", "N_F", "n_it", "L2", "H1"
            );
            for r in &study.reports {
                println!(
                    "{:>5} {:>10.5} {:>12.3e} {:>8} {:>8} {:>6} {:>12.5e} {:>12.5e}",
                    r.level,
                    r.h,
                    r.delta_volume_like,
                    r.dofs_3d_free,
                    r.dofs_frac,
                    r.iterations,
                    r.l2_error,
                    r.h1_error
                );
            }
            println!(
                "least-squares rates: L2 {:.3}, H1 {:.3}",
                study.l2_rate, study.h1_rate
            );
            let dir = out.join(case.name);
            std::fs::create_dir_all(&dir)?;
            let mut f = std::fs::File::create(dir.join("study.csv"))?;
            use std::io::Write;
            writeln!(f, "level,h,delta_volume_like,dofs_3d,dofs_fracture,iterations,l2_error,h1_error")?;
            for r in &study.reports {
                writeln!(
                    f,
                    "{},{:.16e},{:.16e},{},{},{},{:.16e},{:.16e}",
                    r.level,
                    r.h,
                    r.delta_volume_like,
                    r.dofs_3d_free,
                    r.dofs_frac,
                    r.iterations,
                    r.l2_error,
                    r.h1_error
                )?;
            }
            if *check {
                let ok = (1.8..=2.2).contains(&study.l2_rate)
                    && (0.85..=1.15).contains(&study.h1_rate)
                    && study.reports.iter().all(|r| r.iterations <= 30);
                return Ok(ok);
            }
            Ok(true)
        }
        Command::Reference { case } => {
            let (reference, lines, label) = match case.as_str() {
                "test2" => (test2_reference(), test2_lines(), "x"),
                "test3" => (test3_reference(), test3_lines(), "y"),
                other => {
                    return Err(fracflow::Error::InvalidMesh(format!(
                        "no equi-dimensional reference for `{other}` (test2 and test3 only)"
                    )))
                }
            };
            let sol = solve_equidim_2d(&reference)?;
            println!("reference for {case}: {} unknowns", sol.dofs());
            let segs: Vec<_> = lines.iter().map(|(_, s)| *s).collect();
            let samples = sample_on_lines(&sol, &segs, 200)?;
            let dir = out.join(case);
            std::fs::create_dir_all(&dir)?;
            use std::io::Write;
            let mut f = std::fs::File::create(dir.join("reference_lines.csv"))?;
            writeln!(f, "segment,t,value")?;
            for ((pos, _), rows) in lines.iter().zip(&samples) {
                for (t, v) in rows {
                    writeln!(f, "{label}={pos},{:.16e},{:.16e}", t, v)?;
                }
            }
            println!("line samples in {}", dir.display());
            Ok(true)
        }
        Command::Compare { case, level, check } => {
            let (ok, dir) = compare_case(case, *level, out)?;
            println!("comparison artifacts in {}", dir.display());
            if *check {
                return Ok(ok);
            }
            Ok(true)
        }
    }
}

/// Slice plane per case: (axis, value) of an axis-aligned plane orthogonal
/// to the fracture.
fn slice_spec(name: &str) -> (usize, f64) {
    match name {
        "test0" | "test1" => (0, 0.0),
        "test2" => (2, 0.5),
        _ => (2, 0.02),
    }
}

fn run_check(case: &harness::CaseDefinition, art: &harness::RunArtifacts) -> bool {
    if case.name == "test0" {
        let analytic = case.analytic.as_ref().unwrap();
        let mut max_err = 0.0f64;
        for (v, x) in art.mesh3d.vertices.iter().enumerate() {
            let side = if case.fracture.signed_distance(*x) >= 0.0 {
                fracflow::geometry::Side::Plus
            } else {
                fracflow::geometry::Side::Minus
            };
            max_err = max_err.max((art.state.h_d[v] - (analytic.value)(*x, side)).abs());
        }
        let hf_max = art.state.h_f.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        max_err <= 1e-8 && hf_max <= 1e-8 && art.report.j_delta <= 1e-14
    } else {
        art.report.converged
    }
}

fn compare_case(name: &str, level: Option<usize>, out: &Path) -> fracflow::Result<(bool, PathBuf)> {
    let case = case_by_name(name)?;
    // default levels sized so the 5% line agreement is reachable
    let (reference, lines, z_plane, label, default_level) = match name {
        "test2" => (test2_reference(), test2_lines(), 0.5, "x", 0),
        "test3" => (test3_reference(), test3_lines(), 0.02, "y", 3),
        other => {
            return Err(fracflow::Error::InvalidMesh(format!(
                "no reference comparison for `{other}` (test2 and test3 only)"
            )))
        }
    };
    let level = level.unwrap_or(default_level);
    let art = run_case_with(&case, level, CrossWeighting::Metric, None)?;
    let sol = solve_equidim_2d(&reference)?;
    let n = 200;
    let mut labels = Vec::new();
    let mut solver_samples = Vec::new();
    let mut reference_samples = Vec::new();
    let mut all_ok = true;
    for (pos, (a, b)) in &lines {
        let seg = Segment {
            label: format!("{label}={pos}"),
            start: Vector3::new(a.x, a.y, z_plane),
            end: Vector3::new(b.x, b.y, z_plane),
        };
        let sv = sample_segments(&art, &case.fracture, &[seg], n)?;
        let ov = sample_on_lines(&sol, &[(*a, *b)], n)?;
        let num: f64 = sv[0]
            .iter()
            .zip(&ov[0])
            .map(|((_, _, s), (_, r))| (s - r) * (s - r))
            .sum::<f64>()
            .sqrt();
        let den: f64 = ov[0].iter().map(|(_, r)| r * r).sum::<f64>().sqrt();
        let rel = num / den;
        let ok = rel <= 0.05;
        all_ok &= ok;
        println!(
            "{name} line {label}={pos}: relative L2 discrepancy {:.4} [{}]",
            rel,
            if ok { "ok" } else { "above 5%" }
        );
        labels.push(format!("{label}={pos}"));
        solver_samples.push(sv.into_iter().next().unwrap());
        reference_samples.push(ov.into_iter().next().unwrap());
    }
    let dir = out.join(name);
    std::fs::create_dir_all(&dir)?;
    fracflow::harness::export_comparison(
        &dir.join("comparison.csv"),
        &labels,
        &solver_samples,
        &reference_samples,
    )?;
    // solver-only line samples in the shared format
    let tagged: Vec<(String, Vec<fracflow::harness::export::LineSample>)> = labels
        .iter()
        .cloned()
        .zip(solver_samples.iter().cloned())
        .collect();
    export_line_samples(&dir.join("solver_lines.csv"), &tagged)?;
    Ok((all_ok, dir))
}
