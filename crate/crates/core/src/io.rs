//! Mesh export and import.
//!
//! JSON is lossless: coordinates are strings `"m"` or `"m/2^e"`, and the
//! generation counter and provenance are kept. OFF and legacy VTK carry exact
//! decimal expansions of the coordinates and only support ambient dimension
//! up to 3.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arithmetic::{Dyadic, Point};
use crate::complex::{build_complex, Complex, Provenance};
use crate::error::{Error, Result};
use crate::subdivision::Simplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeshFormat {
    Off,
    Vtk,
    Json,
}

impl MeshFormat {
    pub fn name(self) -> &'static str {
        match self {
            MeshFormat::Off => "OFF",
            MeshFormat::Vtk => "VTK",
            MeshFormat::Json => "JSON",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshDocument {
    pub format: MeshFormat,
    pub payload: String,
}

const JSON_FORMAT_TAG: &str = "freudenthal-complex";

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    format: String,
    dimension: usize,
    ambient_dimension: usize,
    generation: u32,
    vertices: Vec<Point>,
    cells: Vec<Simplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

pub fn export_mesh(complex: &Complex, format: MeshFormat) -> Result<MeshDocument> {
    let payload = match format {
        MeshFormat::Json => to_json(complex),
        MeshFormat::Off => to_off(complex)?,
        MeshFormat::Vtk => to_vtk(complex)?,
    };
    Ok(MeshDocument { format, payload })
}

pub fn to_json(complex: &Complex) -> String {
    let doc = ComplexJson {
        format: JSON_FORMAT_TAG.to_string(),
        dimension: complex.dimension(),
        ambient_dimension: complex.ambient_dim(),
        generation: complex.generation(),
        vertices: complex.vertices().to_vec(),
        cells: complex.cells().to_vec(),
        provenance: complex.provenance().cloned(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("complex serializes");
    out.push('\n');
    out
}

/// Parses a JSON complex. Structure is checked; pairwise cell intersections
/// are left to [`crate::complex::validate_complex`].
pub fn from_json(text: &str) -> Result<Complex> {
    let doc: ComplexJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.format != JSON_FORMAT_TAG {
        return Err(Error::Parse(format!("unknown format tag {:?}", doc.format)));
    }
    if let Some(p) = doc.vertices.iter().find(|p| p.dim() != doc.ambient_dimension) {
        return Err(Error::DimensionMismatch { expected: doc.ambient_dimension, found: p.dim() });
    }
    Complex::from_parts(doc.vertices, doc.cells, doc.dimension, doc.generation, doc.provenance)
}

fn check_low_dimension(complex: &Complex, format: MeshFormat) -> Result<()> {
    let dim = complex.ambient_dim();
    if dim > 3 {
        return Err(Error::UnsupportedDimension { format: format.name(), dim });
    }
    Ok(())
}

fn decimal_coords(p: &Point, pad_to: usize) -> String {
    let mut parts: Vec<String> = p.coords().iter().map(Dyadic::to_decimal_string).collect();
    while parts.len() < pad_to {
        parts.push("0".to_string());
    }
    parts.join(" ")
}

fn id_list(cell: &Simplex) -> String {
    let ids: Vec<String> = cell.vertex_ids.iter().map(ToString::to_string).collect();
    format!("{} {}", ids.len(), ids.join(" "))
}

pub fn to_off(complex: &Complex) -> Result<String> {
    check_low_dimension(complex, MeshFormat::Off)?;
    let mut out = String::from("OFF\n");
    writeln!(out, "{} {} 0", complex.vertices().len(), complex.num_cells()).unwrap();
    for p in complex.vertices() {
        writeln!(out, "{}", decimal_coords(p, 0)).unwrap();
    }
    for cell in complex.cells() {
        writeln!(out, "{}", id_list(cell)).unwrap();
    }
    Ok(out)
}

fn vtk_cell_type(r: usize) -> u8 {
    match r {
        0 => 1,
        1 => 3,
        2 => 5,
        _ => 10,
    }
}

pub fn to_vtk(complex: &Complex) -> Result<String> {
    check_low_dimension(complex, MeshFormat::Vtk)?;
    let nc = complex.num_cells();
    let r = complex.dimension();
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    writeln!(out, "freudenthal complex, generation {}", complex.generation()).unwrap();
    out.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    writeln!(out, "POINTS {} double", complex.vertices().len()).unwrap();
    for p in complex.vertices() {
        writeln!(out, "{}", decimal_coords(p, 3)).unwrap();
    }
    writeln!(out, "CELLS {} {}", nc, nc * (r + 2)).unwrap();
    for cell in complex.cells() {
        writeln!(out, "{}", id_list(cell)).unwrap();
    }
    writeln!(out, "CELL_TYPES {nc}").unwrap();
    for _ in 0..nc {
        writeln!(out, "{}", vtk_cell_type(r)).unwrap();
    }
    Ok(out)
}

/// Parses an OFF file whose coordinates are exact dyadic decimals. Every
/// face line becomes a cell; the result is fully validated.
pub fn from_off(text: &str) -> Result<Complex> {
    let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
    if lines.next() != Some("OFF") {
        return Err(Error::Parse("missing OFF header".into()));
    }
    let counts: Vec<usize> = lines
        .next()
        .ok_or_else(|| Error::Parse("missing OFF counts".into()))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad count {t:?}"))))
        .collect::<Result<_>>()?;
    let (nv, nc) = match counts.as_slice() {
        [nv, nc, ..] => (*nv, *nc),
        _ => return Err(Error::Parse("OFF counts need vertex and face numbers".into())),
    };
    let mut points = Vec::with_capacity(nv);
    for _ in 0..nv {
        let line = lines.next().ok_or_else(|| Error::Parse("truncated vertex list".into()))?;
        let coords = line.split_whitespace().map(Dyadic::from_decimal_str).collect::<Result<Vec<_>>>()?;
        points.push(Point::new(coords));
    }
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let line = lines.next().ok_or_else(|| Error::Parse("truncated face list".into()))?;
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad index {t:?}"))))
            .collect::<Result<_>>()?;
        let (&k, ids) = nums.split_first().ok_or_else(|| Error::Parse("empty face".into()))?;
        if ids.len() != k {
            return Err(Error::Parse(format!("face declares {k} vertices, lists {}", ids.len())));
        }
        cells.push(ids.to_vec());
    }
    build_complex(points, cells)
}

/// Reads JSON or OFF, chosen by the first non-blank character.
pub fn import_mesh(text: &str) -> Result<Complex> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        from_json(text)
    } else if trimmed.starts_with("OFF") {
        from_off(text)
    } else {
        Err(Error::Parse("unrecognized mesh format (expected JSON or OFF)".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::iterate_subdivision;
    use crate::fixtures;

    #[test]
    fn off_of_unit_triangle() {
        let doc = export_mesh(&fixtures::kuhn_simplex(2), MeshFormat::Off).unwrap();
        assert_eq!(doc.payload, "OFF\n3 1 0\n0 0\n1 0\n1 1\n3 0 1 2\n");
    }

    #[test]
    fn off_uses_exact_decimals_and_reimports() {
        let c = iterate_subdivision(&fixtures::kuhn_simplex(2), 2).unwrap();
        let off = to_off(&c).unwrap();
        assert!(off.contains("0.25 0"));
        let back = from_off(&off).unwrap();
        assert_eq!(back.vertices(), c.vertices());
        assert_eq!(back.cells(), c.cells());
    }

    #[test]
    fn vtk_layout() {
        let vtk = to_vtk(&fixtures::kuhn_simplex(3)).unwrap();
        let lines: Vec<&str> = vtk.lines().collect();
        assert_eq!(lines[0], "# vtk DataFile Version 3.0");
        assert_eq!(lines[3], "DATASET UNSTRUCTURED_GRID");
        assert_eq!(lines[4], "POINTS 4 double");
        assert_eq!(lines[5], "0 0 0");
        assert_eq!(lines[9], "CELLS 1 5");
        assert_eq!(lines[10], "4 0 1 2 3");
        assert_eq!(&lines[11..], &["CELL_TYPES 1", "10"]);
        let tri = to_vtk(&fixtures::kuhn_simplex(2)).unwrap();
        assert!(tri.contains("1 1 0\n"));
        assert!(tri.ends_with("CELL_TYPES 1\n5\n"));
    }

    #[test]
    fn high_dimension_rejected() {
        let c = fixtures::kuhn_simplex(4);
        assert_eq!(export_mesh(&c, MeshFormat::Off), Err(Error::UnsupportedDimension { format: "OFF", dim: 4 }));
        assert!(matches!(export_mesh(&c, MeshFormat::Vtk), Err(Error::UnsupportedDimension { .. })));
        assert!(export_mesh(&c, MeshFormat::Json).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let c = iterate_subdivision(&fixtures::square(), 2).unwrap();
        let text = to_json(&c);
        assert!(text.contains("\"1/2^2\""));
        assert_eq!(from_json(&text).unwrap(), c);
        assert_eq!(import_mesh(&text).unwrap(), c);
    }

    #[test]
    fn json_errors() {
        assert!(matches!(from_json("{}"), Err(Error::Parse(_))));
        let bad = to_json(&fixtures::kuhn_simplex(2)).replace("freudenthal-complex", "other");
        assert!(matches!(from_json(&bad), Err(Error::Parse(_))));
        let unsorted = to_json(&fixtures::kuhn_simplex(2)).replacen("0,\n      1", "1,\n      0", 1);
        assert!(from_json(&unsorted).is_err());
        assert!(import_mesh("solid x").is_err());
    }
}
