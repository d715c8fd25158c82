//! Plain-text mesh import and export.
//!
//! 3D format: header `TET3D <nv> <nt> <nbf>`, then vertex lines `x y z`,
//! tet lines `i0 i1 i2 i3` (0-based) and boundary-face lines `i0 i1 i2 <tag>`.
//! 2D format: header `TRI2D <nv> <nt> <nbe>` with vertex lines `x y`,
//! triangle lines `i0 i1 i2` and boundary-edge lines `i0 i1 <tag>`.

use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::{Vector2, Vector3};

use crate::{Error, Result};
use super::box_mesh::Mesh3D;
use super::tri_mesh::Mesh2D;

pub fn write_tet3d<W: Write>(mesh: &Mesh3D, out: &mut W) -> Result<()> {
    writeln!(
        out,
        "TET3D {} {} {}",
        mesh.vertices.len(),
        mesh.tets.len(),
        mesh.boundary_faces.len()
    )?;
    for v in &mesh.vertices {
        writeln!(out, "{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z)?;
    }
    for t in &mesh.tets {
        writeln!(out, "{} {} {} {}", t[0], t[1], t[2], t[3])?;
    }
    for (f, tag) in &mesh.boundary_faces {
        writeln!(out, "{} {} {} {}", f[0], f[1], f[2], tag)?;
    }
    Ok(())
}

pub fn read_tet3d<R: Read>(input: R) -> Result<Mesh3D> {
    let mut lines = BufReader::new(input).lines();
    let header = next_line(&mut lines)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "TET3D" {
        return Err(Error::MeshFormat(format!("bad TET3D header: `{header}`")));
    }
    let nv: usize = parse(parts[1])?;
    let nt: usize = parse(parts[2])?;
    let nbf: usize = parse(parts[3])?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = next_line(&mut lines)?;
        let c: Vec<f64> = parse_all(&line)?;
        if c.len() != 3 {
            return Err(Error::MeshFormat(format!("bad vertex line: `{line}`")));
        }
        vertices.push(Vector3::new(c[0], c[1], c[2]));
    }
    let mut tets = Vec::with_capacity(nt);
    for _ in 0..nt {
        let line = next_line(&mut lines)?;
        let c: Vec<usize> = parse_all(&line)?;
        if c.len() != 4 {
            return Err(Error::MeshFormat(format!("bad tet line: `{line}`")));
        }
        tets.push([c[0], c[1], c[2], c[3]]);
    }
    let mut boundary_faces = Vec::with_capacity(nbf);
    for _ in 0..nbf {
        let line = next_line(&mut lines)?;
        let c: Vec<i64> = parse_all(&line)?;
        if c.len() != 4 {
            return Err(Error::MeshFormat(format!("bad boundary face line: `{line}`")));
        }
        boundary_faces.push(([c[0] as usize, c[1] as usize, c[2] as usize], c[3] as i32));
    }
    let mut mesh = Mesh3D {
        vertices,
        tets,
        boundary_faces,
        delta: 0.0,
    };
    mesh.delta = (0..mesh.tets.len())
        .map(|t| mesh.tet_diameter(t))
        .fold(0.0, f64::max);
    mesh.validate()?;
    Ok(mesh)
}

pub fn write_tri2d<W: Write>(mesh: &Mesh2D, out: &mut W) -> Result<()> {
    writeln!(
        out,
        "TRI2D {} {} {}",
        mesh.vertices.len(),
        mesh.triangles.len(),
        mesh.boundary_edges.len()
    )?;
    for v in &mesh.vertices {
        writeln!(out, "{:.17e} {:.17e}", v.x, v.y)?;
    }
    for t in &mesh.triangles {
        writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
    }
    for (e, tag) in &mesh.boundary_edges {
        writeln!(out, "{} {} {}", e[0], e[1], tag)?;
    }
    Ok(())
}

pub fn read_tri2d<R: Read>(input: R) -> Result<Mesh2D> {
    let mut lines = BufReader::new(input).lines();
    let header = next_line(&mut lines)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "TRI2D" {
        return Err(Error::MeshFormat(format!("bad TRI2D header: `{header}`")));
    }
    let nv: usize = parse(parts[1])?;
    let nt: usize = parse(parts[2])?;
    let nbe: usize = parse(parts[3])?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = next_line(&mut lines)?;
        let c: Vec<f64> = parse_all(&line)?;
        if c.len() != 2 {
            return Err(Error::MeshFormat(format!("bad vertex line: `{line}`")));
        }
        vertices.push(Vector2::new(c[0], c[1]));
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let line = next_line(&mut lines)?;
        let c: Vec<usize> = parse_all(&line)?;
        if c.len() != 3 {
            return Err(Error::MeshFormat(format!("bad triangle line: `{line}`")));
        }
        triangles.push([c[0], c[1], c[2]]);
    }
    let mut boundary_edges = Vec::with_capacity(nbe);
    for _ in 0..nbe {
        let line = next_line(&mut lines)?;
        let c: Vec<i64> = parse_all(&line)?;
        if c.len() != 3 {
            return Err(Error::MeshFormat(format!("bad boundary edge line: `{line}`")));
        }
        boundary_edges.push(([c[0] as usize, c[1] as usize], c[2] as i32));
    }
    let mut mesh = Mesh2D {
        vertices,
        triangles,
        boundary_edges,
        delta: 0.0,
    };
    mesh.delta = (0..mesh.triangles.len())
        .map(|t| {
            let v = mesh.triangle_vertices(t);
            (v[0] - v[1])
                .norm()
                .max((v[1] - v[2]).norm())
                .max((v[2] - v[0]).norm())
        })
        .fold(0.0, f64::max);
    for t in 0..mesh.triangles.len() {
        if mesh.triangle_area(t) <= 0.0 {
            return Err(Error::MeshFormat(format!(
                "triangle {t} has non-positive area"
            )));
        }
    }
    Ok(mesh)
}

fn next_line(
    lines: &mut std::io::Lines<impl BufRead>,
) -> Result<String> {
    loop {
        match lines.next() {
            Some(Ok(line)) => {
                if !line.trim().is_empty() {
                    return Ok(line);
                }
            }
            Some(Err(e)) => return Err(e.into()),
            None => return Err(Error::MeshFormat("unexpected end of file".into())),
        }
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::MeshFormat(format!("cannot parse `{s}`")))
}

fn parse_all<T: std::str::FromStr>(line: &str) -> Result<Vec<T>> {
    line.split_whitespace().map(|s| parse(s)).collect()
}
