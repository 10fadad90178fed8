//! OBJ, binary STL and ASCII PLY writers.
//!
//! ASCII coordinates use the shortest decimal that parses back to the same
//! `f64`, so identical meshes give identical bytes. STL is 32-bit by format.

use std::io::{self, Write};

use klein_core::math::Vec3;
use klein_core::mesh::TriangleMesh;

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("write failed: {0}")]
    SinkFailure(#[from] io::Error),
    #[error("{0} triangles do not fit a binary STL count")]
    TooManyTriangles(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Obj,
    Stl,
    Ply,
}

pub const STL_HEADER: &[u8] = b"klein binary STL";

/// Shortest round-trip decimal for `x`.
pub fn fmt_f64(x: f64) -> String {
    // Debug switches to exponent notation for very large and small values,
    // Display never does
    let s = format!("{x:?}");
    s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
}

fn fmt_vec(p: Vec3) -> String {
    format!("{} {} {}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z))
}

pub fn write_obj<W: Write>(m: &TriangleMesh, sink: &mut W) -> Result<(), ExportError> {
    let mut w = io::BufWriter::new(sink);
    writeln!(w, "# {} {}x{}", m.provenance.surface, m.provenance.nu, m.provenance.nv)?;
    for p in &m.vertices {
        writeln!(w, "v {}", fmt_vec(*p))?;
    }
    if let Some(normals) = &m.normals {
        for n in normals {
            writeln!(w, "vn {}", fmt_vec(*n))?;
        }
    }
    let with_normals = m.normals.is_some();
    for [a, b, c] in &m.triangles {
        let (a, b, c) = (a + 1, b + 1, c + 1);
        if with_normals {
            writeln!(w, "f {a}//{a} {b}//{b} {c}//{c}")?;
        } else {
            writeln!(w, "f {a} {b} {c}")?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_stl_binary<W: Write>(m: &TriangleMesh, sink: &mut W) -> Result<(), ExportError> {
    let count = u32::try_from(m.triangles.len()).map_err(|_| ExportError::TooManyTriangles(m.triangles.len()))?;
    let mut w = io::BufWriter::new(sink);
    let mut header = [0u8; 80];
    header[..STL_HEADER.len()].copy_from_slice(STL_HEADER);
    w.write_all(&header)?;
    w.write_all(&count.to_le_bytes())?;
    for t in 0..m.triangles.len() {
        let n = m.face_normal(t).normalized().unwrap_or(Vec3::ZERO);
        let [a, b, c] = m.triangles[t].map(|i| m.vertices[i]);
        for p in [n, a, b, c] {
            for x in p.to_array() {
                w.write_all(&(x as f32).to_le_bytes())?;
            }
        }
        w.write_all(&[0, 0])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ply_ascii<W: Write>(m: &TriangleMesh, sink: &mut W) -> Result<(), ExportError> {
    let mut w = io::BufWriter::new(sink);
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "comment {}", m.provenance.surface)?;
    writeln!(w, "element vertex {}", m.vertices.len())?;
    for axis in ["x", "y", "z"] {
        writeln!(w, "property double {axis}")?;
    }
    if m.normals.is_some() {
        for axis in ["nx", "ny", "nz"] {
            writeln!(w, "property double {axis}")?;
        }
    }
    writeln!(w, "element face {}", m.triangles.len())?;
    writeln!(w, "property list uchar uint vertex_indices")?;
    writeln!(w, "end_header")?;
    for (i, p) in m.vertices.iter().enumerate() {
        match &m.normals {
            Some(n) => writeln!(w, "{} {}", fmt_vec(*p), fmt_vec(n[i]))?,
            None => writeln!(w, "{}", fmt_vec(*p))?,
        }
    }
    for [a, b, c] in &m.triangles {
        writeln!(w, "3 {a} {b} {c}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_mesh<W: Write>(m: &TriangleMesh, format: Format, sink: &mut W) -> Result<(), ExportError> {
    match format {
        Format::Obj => write_obj(m, sink),
        Format::Stl => write_stl_binary(m, sink),
        Format::Ply => write_ply_ascii(m, sink),
    }
}
