//! Browser bindings for the subdivision demo.
//!
//! Each exported function is a thin wrapper over a plain Rust function that
//! returns a JSON string, so everything except the JS glue runs in native
//! tests. Triangle corners coming from the page are snapped to a dyadic grid
//! first; after that all arithmetic is exact.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use num_traits::ToPrimitive;

use freudenthal::arithmetic::{sqrt_decimal, Dyadic, Point, RationalPoint};
use freudenthal::complex::{build_complex, iterate_subdivision};
use freudenthal::kernel::{child_vertex_labels, enumerate_children};
use freudenthal::quality::{max_flatness_sq, quality_report, Signature};
use freudenthal::subdivision::barycentric_iterate;

/// Canvas coordinates are rounded to multiples of `2^-GRID_BITS`.
pub const GRID_BITS: u32 = 10;
pub const MAX_FREUDENTHAL_DEPTH: usize = 6;
pub const MAX_BARYCENTRIC_DEPTH: usize = 5;
pub const MAX_LABEL_DIM: usize = 6;

#[derive(Serialize, Debug)]
pub struct MeshView {
    pub scheme: &'static str,
    pub depth: usize,
    pub triangles: Vec<[[f64; 2]; 3]>,
    /// Exact `max q²` as a fraction.
    pub max_flatness_sq: String,
    /// `max q` to four decimals.
    pub max_flatness: String,
    /// Number of distinct shapes up to similarity.
    pub classes: usize,
}

#[derive(Serialize, Debug)]
pub struct ChildView {
    pub sigma: Vec<u8>,
    pub pi: Vec<usize>,
    pub path_word: Vec<u8>,
    pub labels: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct CompareRow {
    pub depth: usize,
    pub freudenthal: String,
    pub barycentric: String,
}

/// Snaps six numbers `x0 y0 x1 y1 x2 y2` to the dyadic grid.
pub fn snap_triangle(coords: &[f64]) -> Result<Vec<Point>, String> {
    if coords.len() != 6 {
        return Err(format!("expected 6 coordinates, got {}", coords.len()));
    }
    let scale = f64::from(1u32 << GRID_BITS);
    coords
        .chunks(2)
        .map(|xy| {
            xy.iter()
                .map(|&v| {
                    if !v.is_finite() || v.abs() > 1e6 {
                        return Err(format!("coordinate {v} out of range"));
                    }
                    let grid = (v * scale).round() / scale;
                    Dyadic::from_f64(grid).ok_or_else(|| format!("coordinate {v} is not representable"))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Point::new)
        })
        .collect()
}

fn to_xy(p: &[f64]) -> [f64; 2] {
    [p[0], p[1]]
}

fn rational_xy(p: &RationalPoint) -> [f64; 2] {
    [p[0].to_f64().unwrap_or(f64::NAN), p[1].to_f64().unwrap_or(f64::NAN)]
}

/// The triangle after `depth` rounds of either scheme.
pub fn mesh(coords: &[f64], depth: usize, scheme: &str) -> Result<MeshView, String> {
    let corners = snap_triangle(coords)?;
    match scheme {
        "freudenthal" => {
            if depth > MAX_FREUDENTHAL_DEPTH {
                return Err(format!("depth is limited to {MAX_FREUDENTHAL_DEPTH}"));
            }
            // the vertex order the user placed the corners in is kept
            let base = build_complex(corners, vec![vec![0, 1, 2]]).map_err(|e| e.to_string())?;
            let complex = iterate_subdivision(&base, depth).map_err(|e| e.to_string())?;
            let report = quality_report(&complex).map_err(|e| e.to_string())?;
            let triangles = (0..complex.num_cells())
                .map(|n| {
                    let pts = complex.cell_points(n);
                    [to_xy(&pts[0].to_f64()), to_xy(&pts[1].to_f64()), to_xy(&pts[2].to_f64())]
                })
                .collect();
            Ok(MeshView {
                scheme: "freudenthal",
                depth,
                triangles,
                max_flatness: sqrt_decimal(&report.max_flatness_sq, 4),
                max_flatness_sq: report.max_flatness_sq.to_string(),
                classes: report.census.len(),
            })
        }
        "barycentric" => {
            if depth > MAX_BARYCENTRIC_DEPTH {
                return Err(format!("depth is limited to {MAX_BARYCENTRIC_DEPTH}"));
            }
            let rational: Vec<RationalPoint> = corners.iter().map(Point::to_rational).collect();
            let cells = barycentric_iterate(&rational, depth).map_err(|e| e.to_string())?;
            let max = max_flatness_sq(&cells).map_err(|e| e.to_string())?;
            let classes: std::collections::BTreeSet<Signature> = cells
                .iter()
                .map(|c| freudenthal::quality::similarity_signature(c))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            Ok(MeshView {
                scheme: "barycentric",
                depth,
                triangles: cells.iter().map(|c| [rational_xy(&c[0]), rational_xy(&c[1]), rational_xy(&c[2])]).collect(),
                max_flatness: sqrt_decimal(&max, 4),
                max_flatness_sq: max.to_string(),
                classes: classes.len(),
            })
        }
        other => Err(format!("unknown scheme {other:?}")),
    }
}

/// The `2^r` children of a generic `r`-simplex as midpoint labels.
pub fn children(r: usize) -> Result<Vec<ChildView>, String> {
    if !(1..=MAX_LABEL_DIM).contains(&r) {
        return Err(format!("dimension must be between 1 and {MAX_LABEL_DIM}"));
    }
    Ok(enumerate_children(r)
        .iter()
        .map(|key| ChildView {
            sigma: key.sigma.bits().to_vec(),
            pi: key.pi.as_slice().to_vec(),
            path_word: key.path_word(),
            labels: child_vertex_labels(key).iter().map(ToString::to_string).collect(),
        })
        .collect())
}

/// `max q²` for both schemes at depths `0..=depth`.
pub fn compare(coords: &[f64], depth: usize) -> Result<Vec<CompareRow>, String> {
    let depth = depth.min(MAX_BARYCENTRIC_DEPTH);
    (0..=depth)
        .map(|k| {
            Ok(CompareRow {
                depth: k,
                freudenthal: mesh(coords, k, "freudenthal")?.max_flatness_sq,
                barycentric: mesh(coords, k, "barycentric")?.max_flatness_sq,
            })
        })
        .collect()
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    value.map(|v| serde_json::to_string(&v).expect("views serialize")).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = mesh)]
pub fn mesh_js(coords: &[f64], depth: usize, scheme: &str) -> Result<String, JsValue> {
    to_js(mesh(coords, depth, scheme))
}

#[wasm_bindgen(js_name = children)]
pub fn children_js(r: usize) -> Result<String, JsValue> {
    to_js(children(r))
}

#[wasm_bindgen(js_name = compare)]
pub fn compare_js(coords: &[f64], depth: usize) -> Result<String, JsValue> {
    to_js(compare(coords, depth))
}
