//! Artifact export: legacy VTK grids, slice and line CSV files, the
//! per-triangle interface comparison and coordinate dumps of the blocks.

use std::collections::BTreeMap;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::{Vector2, Vector3};

use crate::assembly::functional_by_quadrature;
use crate::geometry::{FractureGeometry, Side, TetPlaneRelation};
use crate::optimizer::exchange_flux;
use crate::{Error, Result};
use super::pipeline::RunArtifacts;

fn create(path: &Path) -> Result<BufWriter<std::fs::File>> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(std::fs::File::create(path)?))
}

/// Legacy ASCII VTK export of the matrix solution on the sub-tetrahedron
/// decomposition. Points on the interface are duplicated per side and carry
/// the one-sided values.
pub fn export_vtk_matrix(path: &Path, art: &RunArtifacts, frac: &FractureGeometry) -> Result<()> {
    let ev3 = art.evaluator_3d(frac);
    let (lo, hi) = art.mesh3d.bounding_box();
    let quant = 1e-9 * (hi - lo).norm();
    let key_of = |side: i8, p: Vector3<f64>| -> (i8, i64, i64, i64) {
        (
            side,
            (p.x / quant).round() as i64,
            (p.y / quant).round() as i64,
            (p.z / quant).round() as i64,
        )
    };
    let mut points: Vec<(Vector3<f64>, f64)> = Vec::new();
    let mut index: BTreeMap<(i8, i64, i64, i64), usize> = BTreeMap::new();
    let mut cells: Vec<[usize; 4]> = Vec::new();
    let snap = art.cut.snap_tol;
    let mut add_cell = |tet: usize, cell: &[Vector3<f64>; 4], h_sign: f64| {
        let mut ids = [0usize; 4];
        for (slot, p) in cell.iter().enumerate() {
            // off-plane points are keyed by their own side so copies shared
            // with neighboring cells coincide; on-plane points split per side
            let d = frac.signed_distance(*p);
            let point_sign = if d.abs() <= snap { h_sign } else { d.signum() };
            let key = key_of(if point_sign > 0.0 { 1 } else { -1 }, *p);
            let id = *index.entry(key).or_insert_with(|| {
                let value = ev3.value_in_tet(tet, *p, point_sign, &art.state.h_d);
                points.push((*p, value));
                points.len() - 1
            });
            ids[slot] = id;
        }
        cells.push(ids);
    };
    for t in 0..art.mesh3d.tets.len() {
        match &art.cut.relation[t] {
            // only elements actually crossing the interface are subdivided;
            // elements crossed by the plane outside the footprint carry a
            // continuous solution and stay whole
            TetPlaneRelation::Split(split) if art.cut.is_enriched_tet(t) => {
                for sub in &split.sub_plus {
                    add_cell(t, sub, 1.0);
                }
                for sub in &split.sub_minus {
                    add_cell(t, sub, -1.0);
                }
            }
            TetPlaneRelation::Split(_) => {
                let verts = art.mesh3d.tet_vertices(t);
                let centroid = (verts[0] + verts[1] + verts[2] + verts[3]) / 4.0;
                add_cell(t, &verts, frac.signed_distance(centroid).signum());
            }
            TetPlaneRelation::Untouched { side } | TetPlaneRelation::FaceOnPlane { side } => {
                add_cell(t, &art.mesh3d.tet_vertices(t), side.sign());
            }
        }
    }

    let mut out = create(path)?;
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "matrix pressure on the cut decomposition")?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", points.len())?;
    for (p, _) in &points {
        writeln!(out, "{:.17e} {:.17e} {:.17e}", p.x, p.y, p.z)?;
    }
    writeln!(out, "CELLS {} {}", cells.len(), cells.len() * 5)?;
    for c in &cells {
        writeln!(out, "4 {} {} {} {}", c[0], c[1], c[2], c[3])?;
    }
    writeln!(out, "CELL_TYPES {}", cells.len())?;
    for _ in &cells {
        writeln!(out, "10")?;
    }
    writeln!(out, "POINT_DATA {}", points.len())?;
    writeln!(out, "SCALARS pressure double 1")?;
    writeln!(out, "LOOKUP_TABLE default")?;
    for (_, v) in &points {
        writeln!(out, "{:.17e}", v)?;
    }
    Ok(())
}

/// VTK export of the fracture mesh with the fracture pressure as point data
/// and the three interface controls as cell data.
pub fn export_vtk_fracture(path: &Path, art: &RunArtifacts, frac: &FractureGeometry) -> Result<()> {
    let mesh = &art.mesh2d;
    let mut out = create(path)?;
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "fracture pressure and interface controls")?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(out, "POINTS {} double", mesh.vertices.len())?;
    for v in &mesh.vertices {
        let p = frac.to_global(*v);
        writeln!(out, "{:.17e} {:.17e} {:.17e}", p.x, p.y, p.z)?;
    }
    writeln!(out, "CELLS {} {}", mesh.triangles.len(), mesh.triangles.len() * 4)?;
    for t in &mesh.triangles {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    writeln!(out, "CELL_TYPES {}", mesh.triangles.len())?;
    for _ in &mesh.triangles {
        writeln!(out, "5")?;
    }
    writeln!(out, "POINT_DATA {}", mesh.vertices.len())?;
    writeln!(out, "SCALARS fracture_pressure double 1")?;
    writeln!(out, "LOOKUP_TABLE default")?;
    for v in &art.state.h_f {
        writeln!(out, "{:.17e}", v)?;
    }
    writeln!(out, "CELL_DATA {}", mesh.triangles.len())?;
    for (name, data) in [
        ("psi_plus", &art.state.psi_plus),
        ("psi_minus", &art.state.psi_minus),
        ("psi_fracture", &art.state.psi_frac),
    ] {
        writeln!(out, "SCALARS {name} double 1")?;
        writeln!(out, "LOOKUP_TABLE default")?;
        for v in data {
            writeln!(out, "{:.17e}", v)?;
        }
    }
    Ok(())
}

/// Axis-aligned slice plot: `resolution x resolution` equally spaced points
/// on the plane `axis = value`, written as CSV `u,v,value`. Points on the
/// fracture plane are evaluated from the positive side; elsewhere the side
/// is taken from the sign of the distance.
pub fn export_slice_plot(
    path: &Path,
    art: &RunArtifacts,
    frac: &FractureGeometry,
    axis: usize,
    value: f64,
    resolution: usize,
) -> Result<()> {
    let ev3 = art.evaluator_3d(frac);
    let (lo, hi) = art.mesh3d.bounding_box();
    let (au, av) = ((axis + 1) % 3, (axis + 2) % 3);
    if value < lo[axis] || value > hi[axis] {
        return Err(Error::PointOutsideMesh([value, 0.0, 0.0]));
    }
    let mut out = create(path)?;
    writeln!(out, "u,v,value")?;
    for j in 0..resolution {
        for i in 0..resolution {
            let u = lo[au] + (hi[au] - lo[au]) * i as f64 / (resolution - 1) as f64;
            let v = lo[av] + (hi[av] - lo[av]) * j as f64 / (resolution - 1) as f64;
            let mut x = Vector3::zeros();
            x[axis] = value;
            x[au] = u;
            x[av] = v;
            let val = ev3.eval(x, Side::Plus, &art.state.h_d)?;
            writeln!(out, "{:.16e},{:.16e},{:.16e}", u, v, val)?;
        }
    }
    Ok(())
}

/// One sampling segment with equally spaced midpoint samples.
#[derive(Debug, Clone)]
pub struct Segment {
    pub label: String,
    pub start: Vector3<f64>,
    pub end: Vector3<f64>,
}

/// One sample on a segment: curve parameter, position, field value.
pub type LineSample = (f64, Vector3<f64>, f64);

/// Samples the solved field on segments. Midpoint sampling avoids landing
/// exactly on the fracture plane.
pub fn sample_segments(
    art: &RunArtifacts,
    frac: &FractureGeometry,
    segments: &[Segment],
    n_samples: usize,
) -> Result<Vec<Vec<LineSample>>> {
    let ev3 = art.evaluator_3d(frac);
    let mut all = Vec::with_capacity(segments.len());
    for seg in segments {
        let mut rows = Vec::with_capacity(n_samples);
        for k in 0..n_samples {
            let t = (k as f64 + 0.5) / n_samples as f64;
            let x = seg.start + (seg.end - seg.start) * t;
            let value = ev3.eval(x, Side::Plus, &art.state.h_d)?;
            rows.push((t, x, value));
        }
        all.push(rows);
    }
    Ok(all)
}

/// CSV of line samples: `segment,t,x,y,z,value`.
pub fn export_line_samples(
    path: &Path,
    samples: &[(String, Vec<LineSample>)],
) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "segment,t,x,y,z,value")?;
    for (label, rows) in samples {
        for (t, x, v) in rows {
            writeln!(
                out,
                "{label},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                t, x.x, x.y, x.z, v
            )?;
        }
    }
    Ok(())
}

/// CSV overlay of solver and reference samples: `segment,t,solver,reference`.
pub fn export_comparison(
    path: &Path,
    labels: &[String],
    solver: &[Vec<LineSample>],
    reference: &[Vec<(f64, f64)>],
) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "segment,t,solver,reference")?;
    for ((label, s), r) in labels.iter().zip(solver).zip(reference) {
        for ((t, _, vs), (_, vr)) in s.iter().zip(r) {
            writeln!(out, "{label},{:.16e},{:.16e},{:.16e}", t, vs, vr)?;
        }
    }
    Ok(())
}

/// Per-triangle comparison of the interface controls with the mean traces
/// they chase; the local squared mismatches sum to the functional value.
pub fn export_interface_comparison(
    path: &Path,
    art: &RunArtifacts,
    frac: &FractureGeometry,
) -> Result<f64> {
    let ev3 = art.evaluator_3d(frac);
    let ev2 = art.evaluator_2d();
    let (j, per_tri) = functional_by_quadrature(
        &art.iface,
        &ev3,
        &ev2,
        &art.state.h_d,
        &art.state.h_f,
        &art.state.psi_plus,
        &art.state.psi_minus,
        &art.state.psi_frac,
    );
    let mut out = create(path)?;
    writeln!(
        out,
        "triangle,area,centroid_u,centroid_v,psi_plus,trace_plus_mean,j_plus,psi_minus,trace_minus_mean,j_minus,psi_fracture,h_fracture_mean,j_fracture"
    )?;
    for (t, row) in per_tri.iter().enumerate() {
        let v = art.mesh2d.triangle_vertices(t);
        let c = (v[0] + v[1] + v[2]) / 3.0;
        writeln!(
            out,
            "{t},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.area,
            c.x,
            c.y,
            row.psi_plus,
            row.trace_plus_mean,
            row.j_plus,
            row.psi_minus,
            row.trace_minus_mean,
            row.j_minus,
            row.psi_frac,
            row.h_frac_mean,
            row.j_frac
        )?;
    }
    Ok(j)
}

/// Coordinate-format dump of every assembled block.
pub fn dump_blocks(dir: &Path, art: &RunArtifacts) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let blocks = &art.blocks;
    let named: [(&str, &crate::optimizer::Csr); 9] = [
        ("A_D", &blocks.a_d_full),
        ("A_F", &blocks.a_f_full),
        ("B_plus", &blocks.b_plus),
        ("B_minus", &blocks.b_minus),
        ("B_F", &blocks.b_frac),
        ("E_plus", &blocks.e_plus),
        ("E_minus", &blocks.e_minus),
        ("E_F", &blocks.e_frac),
        ("G_D", &blocks.g_d),
    ];
    for (name, m) in named {
        let mut out = create(&dir.join(format!("{name}.txt")))?;
        m.write_coordinate(&mut out)?;
    }
    let mut out = create(&dir.join("G_psi.txt"))?;
    writeln!(out, "{} diagonal", blocks.g_psi_plus.len())?;
    for v in &blocks.g_psi_plus {
        writeln!(out, "{:.17e}", v)?;
    }
    Ok(())
}

/// Pointwise exchange fluxes at a fracture-local point, from the one-sided
/// traces and the fracture pressure.
pub fn exchange_flux_at(
    art: &RunArtifacts,
    frac: &FractureGeometry,
    eta: &dyn Fn(Vector2<f64>) -> f64,
    p: Vector2<f64>,
) -> Result<(f64, f64)> {
    if !frac.contains_local(p) {
        return Err(Error::PointOutsideMesh([p.x, p.y, 0.0]));
    }
    let ev3 = art.evaluator_3d(frac);
    let ev2 = art.evaluator_2d();
    let x = frac.to_global(p);
    let tr_plus = ev3.eval(x, Side::Plus, &art.state.h_d)?;
    let tr_minus = ev3.eval(x, Side::Minus, &art.state.h_d)?;
    // fracture mesh triangle containing the local point
    let mut h_f = None;
    for t in 0..art.mesh2d.triangles.len() {
        let lambda = ev2.barycentric(t, p);
        if lambda.iter().all(|&l| l >= -1e-10) {
            h_f = Some(ev2.value_in_tri(t, p, &art.state.h_f));
            break;
        }
    }
    let h_f = h_f.ok_or(Error::PointOutsideMesh([p.x, p.y, 0.0]))?;
    Ok(exchange_flux(eta(p), tr_plus, tr_minus, h_f))
}
