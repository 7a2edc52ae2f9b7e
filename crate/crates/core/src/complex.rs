//! Pure-dimensional simplicial complexes with a global vertex order, and
//! their repeated subdivision.
//!
//! Every cell lists its vertex ids in ascending order, so each cell inherits
//! its vertex order from the table. Subdividing a complex subdivides every
//! cell in that order; an edge midpoint is keyed by the ordered pair of its
//! parent ids, old vertex `i` is carried as `(i, i)`, and the new table is
//! sorted lexicographically by these keys. Cells sharing a face therefore
//! create identical midpoints and sub-faces on it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arithmetic::{determinant, gram_det, Dyadic, Point, RationalPoint};
use crate::error::{Error, Result};
use crate::kernel::{child_vertex_labels, enumerate_children, ChildKey};
use crate::lp::{maximize, LpOutcome};
use crate::subdivision::Simplex;

/// Where a cell came from: the index of its parent cell in the previous
/// generation and its child key.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CellOrigin {
    pub parent: usize,
    pub key: ChildKey,
}

/// Links a generation to the one before it.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Provenance {
    /// Parent-id pair `(i, j)`, `i ≤ j`, of every vertex.
    pub vertex_parents: Vec<(usize, usize)>,
    pub cell_parents: Vec<CellOrigin>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Complex {
    vertices: Vec<Point>,
    cells: Vec<Simplex>,
    dimension: usize,
    generation: u32,
    provenance: Option<Provenance>,
}

/// One problem found by [`validate_complex`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    AmbientDimension { vertex: usize, expected: usize, found: usize },
    AmbientTooSmall { ambient: usize, dimension: usize },
    WrongArity { cell: usize, expected: usize, found: usize },
    VertexOutOfRange { cell: usize, id: usize },
    UnsortedCell { cell: usize },
    DuplicatePoint { first: usize, second: usize },
    DegenerateCell { cell: usize },
    DuplicateCell { first: usize, second: usize },
    NonComplexIntersection { first: usize, second: usize },
    Provenance(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AmbientDimension { vertex, expected, found } => {
                write!(f, "vertex {vertex} has {found} coordinates, expected {expected}")
            }
            Violation::AmbientTooSmall { ambient, dimension } => {
                write!(f, "ambient dimension {ambient} below cell dimension {dimension}")
            }
            Violation::WrongArity { cell, expected, found } => {
                write!(f, "cell {cell} has {found} vertices, expected {expected}")
            }
            Violation::VertexOutOfRange { cell, id } => write!(f, "cell {cell} references missing vertex {id}"),
            Violation::UnsortedCell { cell } => write!(f, "unsorted cell {cell}"),
            Violation::DuplicatePoint { first, second } => write!(f, "vertices {first} and {second} coincide"),
            Violation::DegenerateCell { cell } => write!(f, "degenerate cell {cell}"),
            Violation::DuplicateCell { first, second } => write!(f, "cells {first} and {second} are identical"),
            Violation::NonComplexIntersection { first, second } => {
                write!(f, "non-complex intersection between cells {first} and {second}")
            }
            Violation::Provenance(msg) => write!(f, "provenance: {msg}"),
        }
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        match v {
            Violation::DuplicatePoint { first, second } => Error::DuplicatePoint { first, second },
            Violation::DegenerateCell { cell } => Error::DegenerateCell(cell),
            Violation::NonComplexIntersection { first, second } => Error::NonComplexIntersection { first, second },
            Violation::AmbientDimension { expected, found, .. } => Error::DimensionMismatch { expected, found },
            Violation::VertexOutOfRange { id, cell } => {
                Error::InvalidCell { cell, reason: format!("vertex {id} out of range") }
            }
            Violation::WrongArity { cell, expected, found } => {
                Error::InvalidCell { cell, reason: format!("{found} vertices, expected {expected}") }
            }
            other => Error::InvalidCell { cell: 0, reason: other.to_string() },
        }
    }
}

impl Complex {
    /// Assembles a complex after structural checks only (ids, arity,
    /// ordering, duplicate points, degeneracy). Pairwise intersections are
    /// not examined; use [`validate_complex`] for that.
    pub fn from_parts(
        vertices: Vec<Point>,
        cells: Vec<Simplex>,
        dimension: usize,
        generation: u32,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        let complex = Self { vertices, cells, dimension, generation, provenance };
        if let Some(v) = structural_violations(&complex).into_iter().next() {
            return Err(v.into());
        }
        Ok(complex)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    /// Cell dimension `r`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices.first().map_or(0, Point::dim)
    }

    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_points(&self, cell: usize) -> Vec<Point> {
        self.cells[cell].vertex_ids.iter().map(|&id| self.vertices[id].clone()).collect()
    }

    pub fn cell_rational_points(&self, cell: usize) -> Vec<RationalPoint> {
        self.cells[cell].vertex_ids.iter().map(|&id| self.vertices[id].to_rational()).collect()
    }

    /// All `k`-faces as sorted id lists.
    pub fn faces(&self, k: usize) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for cell in &self.cells {
            for subset in subsets(&cell.vertex_ids, k + 1) {
                out.insert(subset);
            }
        }
        out
    }

    /// Largest coordinate exponent over the vertex table.
    pub fn max_exponent(&self) -> u32 {
        self.vertices.iter().map(Point::max_exponent).max().unwrap_or(0)
    }
}

fn subsets(ids: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if ids.len() < size {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (n, &first) in ids.iter().enumerate() {
        for mut rest in subsets(&ids[n + 1..], size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Builds a complex from raw cells: ids in each cell are sorted ascending
/// and the result is fully validated.
pub fn build_complex(points: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Complex> {
    let dimension = cells.first().map_or(0, |c| c.len().saturating_sub(1));
    let cells = cells
        .into_iter()
        .map(|mut ids| {
            ids.sort_unstable();
            Simplex::new(ids)
        })
        .collect();
    let complex = Complex { vertices: points, cells, dimension, generation: 0, provenance: None };
    if let Some(v) = validate_complex(&complex).into_iter().next() {
        return Err(v.into());
    }
    Ok(complex)
}

/// Replaces every cell by its `2^r` children.
pub fn subdivide_complex(complex: &Complex) -> Result<Complex> {
    let r = complex.dimension;
    let keys = enumerate_children(r);
    let labels: Vec<_> = keys.iter().map(child_vertex_labels).collect();

    let mut pairs = BTreeSet::new();
    for cell in &complex.cells {
        let ids = &cell.vertex_ids;
        for i in 0..=r {
            for j in i..=r {
                pairs.insert((ids[i], ids[j]));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(n, &p)| (p, n)).collect();
    let vertices: Vec<Point> = pairs
        .iter()
        .map(|&(a, b)| {
            if a == b {
                complex.vertices[a].clone()
            } else {
                Point::midpoint(&complex.vertices[a], &complex.vertices[b])
            }
        })
        .collect();

    let mut cells = Vec::with_capacity(complex.cells.len() << r);
    let mut cell_parents = Vec::with_capacity(cells.capacity());
    for (parent, cell) in complex.cells.iter().enumerate() {
        let ids = &cell.vertex_ids;
        if complex.vertices.is_empty() || gram_det(&edge_vectors(&complex.vertices, ids))?.is_zero() {
            return Err(Error::DegenerateCell(parent));
        }
        for (key, path) in keys.iter().zip(&labels) {
            let child: Vec<usize> = path.iter().map(|l| index[&(ids[l.i], ids[l.j])]).collect();
            debug_assert!(child.windows(2).all(|w| w[0] < w[1]));
            cells.push(Simplex::new(child));
            cell_parents.push(CellOrigin { parent, key: key.clone() });
        }
    }
    Ok(Complex {
        vertices,
        cells,
        dimension: r,
        generation: complex.generation + 1,
        provenance: Some(Provenance { vertex_parents: pairs.into_iter().collect(), cell_parents }),
    })
}

/// `k`-fold [`subdivide_complex`]; `k = 0` returns a copy.
pub fn iterate_subdivision(complex: &Complex, k: usize) -> Result<Complex> {
    let mut current = complex.clone();
    for _ in 0..k {
        current = subdivide_complex(&current)?;
    }
    Ok(current)
}

fn edge_vectors(table: &[Point], ids: &[usize]) -> Vec<Point> {
    ids[1..].iter().map(|&id| table[id].sub(&table[ids[0]])).collect()
}

fn structural_violations(complex: &Complex) -> Vec<Violation> {
    let mut out = Vec::new();
    let r = complex.dimension;
    let d = complex.ambient_dim();
    for (vertex, p) in complex.vertices.iter().enumerate() {
        if p.dim() != d {
            out.push(Violation::AmbientDimension { vertex, expected: d, found: p.dim() });
        }
    }
    if !complex.cells.is_empty() && d < r {
        out.push(Violation::AmbientTooSmall { ambient: d, dimension: r });
    }
    if !out.is_empty() {
        return out;
    }

    let mut seen: HashMap<&Point, usize> = HashMap::new();
    for (id, p) in complex.vertices.iter().enumerate() {
        if let Some(&first) = seen.get(p) {
            out.push(Violation::DuplicatePoint { first, second: id });
        } else {
            seen.insert(p, id);
        }
    }

    let mut by_ids: HashMap<&[usize], usize> = HashMap::new();
    for (n, cell) in complex.cells.iter().enumerate() {
        let ids = &cell.vertex_ids;
        if ids.len() != r + 1 {
            out.push(Violation::WrongArity { cell: n, expected: r + 1, found: ids.len() });
            continue;
        }
        if let Some(&id) = ids.iter().find(|&&id| id >= complex.vertices.len()) {
            out.push(Violation::VertexOutOfRange { cell: n, id });
            continue;
        }
        if !cell.is_strictly_increasing() {
            out.push(Violation::UnsortedCell { cell: n });
            continue;
        }
        match gram_det(&edge_vectors(&complex.vertices, ids)) {
            Ok(g) if !g.is_zero() => {}
            _ => out.push(Violation::DegenerateCell { cell: n }),
        }
        if let Some(&first) = by_ids.get(ids.as_slice()) {
            out.push(Violation::DuplicateCell { first, second: n });
        } else {
            by_ids.insert(ids, n);
        }
    }

    if let Some(prov) = &complex.provenance {
        if prov.vertex_parents.len() != complex.vertices.len() {
            out.push(Violation::Provenance(format!(
                "{} vertex parents for {} vertices",
                prov.vertex_parents.len(),
                complex.vertices.len()
            )));
        }
        if prov.cell_parents.len() != complex.cells.len() {
            out.push(Violation::Provenance(format!(
                "{} cell parents for {} cells",
                prov.cell_parents.len(),
                complex.cells.len()
            )));
        }
        if prov.cell_parents.iter().any(|c| c.key.r() != r) {
            out.push(Violation::Provenance("child key of the wrong dimension".into()));
        }
    }
    out
}

/// Checks id ordering, affine independence and that every two cells meet
/// in a common face. Returns all violations found; empty means valid.
pub fn validate_complex(complex: &Complex) -> Vec<Violation> {
    let mut out = structural_violations(complex);
    if !out.is_empty() {
        return out;
    }
    out.extend(intersection_violations(complex));
    out
}

struct CellGeometry {
    ids: Vec<usize>,
    /// Coordinates times a power of two shared by the whole complex.
    scaled: Vec<Vec<BigInt>>,
    lo: Vec<Dyadic>,
    hi: Vec<Dyadic>,
    /// For a full-dimensional cell, one plane `n·x = c` per omitted vertex,
    /// oriented so that vertex lies on the positive side.
    facets: Vec<(Vec<BigInt>, BigInt)>,
    /// `scaled` again, zero padded, when d ≤ 3 and it fits comfortably in
    /// machine integers.
    small: Option<Vec<Small>>,
    small_box: Option<(Small, Small)>,
}

type Small = [i128; 3];

/// Bound on scaled coordinates for the machine-integer fast path; products
/// of three differences stay far below `i128::MAX`.
const SMALL_COORD: i128 = 1 << 30;

fn scale_to_int(x: &Dyadic, exponent: u32) -> BigInt {
    x.mantissa() << (exponent - x.exponent()) as usize
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Facet planes of a simplex with `d + 1` vertices in R^d, from cofactors.
fn facet_planes(pts: &[Vec<BigInt>]) -> Vec<(Vec<BigInt>, BigInt)> {
    let d = pts.len() - 1;
    (0..=d)
        .map(|omit| {
            let facet: Vec<&Vec<BigInt>> = pts.iter().enumerate().filter(|&(k, _)| k != omit).map(|(_, p)| p).collect();
            let rows: Vec<Vec<BigInt>> =
                facet[1..].iter().map(|p| p.iter().zip(facet[0]).map(|(x, y)| x - y).collect()).collect();
            let mut normal: Vec<BigInt> = (0..d)
                .map(|col| {
                    let minor: Vec<Vec<BigRational>> = rows
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|&(c, _)| c != col)
                                .map(|(_, x)| BigRational::from_integer(x.clone()))
                                .collect()
                        })
                        .collect();
                    let m = determinant(minor).to_integer();
                    if col % 2 == 0 {
                        m
                    } else {
                        -m
                    }
                })
                .collect();
            let mut offset = int_dot(&normal, facet[0]);
            if int_dot(&normal, &pts[omit]) < offset {
                normal.iter_mut().for_each(|x| *x = -&*x);
                offset = -offset;
            }
            (normal, offset)
        })
        .collect()
}

fn cell_geometry(ids: &[usize], pts: &[&Point], exponent: u32) -> CellGeometry {
    let d = pts[0].dim();
    let lo = (0..d).map(|c| pts.iter().map(|p| &p.coords()[c]).min().cloned().unwrap_or_default()).collect();
    let hi = (0..d).map(|c| pts.iter().map(|p| &p.coords()[c]).max().cloned().unwrap_or_default()).collect();
    let scaled: Vec<Vec<BigInt>> =
        pts.iter().map(|p| p.coords().iter().map(|x| scale_to_int(x, exponent)).collect()).collect();
    let small: Option<Vec<Small>> = if d <= 3 {
        scaled
            .iter()
            .map(|p| {
                let mut out = [0i128; 3];
                for (slot, x) in out.iter_mut().zip(p) {
                    *slot = i128::try_from(x).ok().filter(|v| v.abs() < SMALL_COORD)?;
                }
                Some(out)
            })
            .collect()
    } else {
        None
    };
    let small_box = small.as_ref().map(|ps| {
        let (mut lo, mut hi) = (ps[0], ps[0]);
        for p in ps {
            for c in 0..3 {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        (lo, hi)
    });
    let facets = if small.is_none() && d + 1 == pts.len() { facet_planes(&scaled) } else { Vec::new() };
    CellGeometry { ids: ids.to_vec(), scaled, lo, hi, facets, small, small_box }
}

fn intersection_violations(complex: &Complex) -> Vec<Violation> {
    let exponent = complex.max_exponent();
    let geoms: Vec<CellGeometry> = complex
        .cells
        .iter()
        .map(|cell| {
            let pts: Vec<&Point> = cell.vertex_ids.iter().map(|&id| &complex.vertices[id]).collect();
            cell_geometry(&cell.vertex_ids, &pts, exponent)
        })
        .collect();
    if geoms.is_empty() || geoms[0].lo.is_empty() {
        return Vec::new();
    }

    // sweep along the first axis, boxes compared exactly
    let mut order: Vec<usize> = (0..geoms.len()).collect();
    order.sort_by(|&a, &b| geoms[a].lo[0].cmp(&geoms[b].lo[0]));
    let mut out = Vec::new();
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            if geoms[b].lo[0] > geoms[a].hi[0] {
                break;
            }
            let overlap = match (&geoms[a].small_box, &geoms[b].small_box) {
                (Some((alo, ahi)), Some((blo, bhi))) => (1..3).all(|c| blo[c] <= ahi[c] && alo[c] <= bhi[c]),
                _ => {
                    (1..geoms[a].lo.len()).all(|c| geoms[b].lo[c] <= geoms[a].hi[c] && geoms[a].lo[c] <= geoms[b].hi[c])
                }
            };
            if overlap && !meets_in_common_face(&geoms[a], &geoms[b]) {
                let (first, second) = (a.min(b), a.max(b));
                out.push(Violation::NonComplexIntersection { first, second });
            }
        }
    }
    out.sort_by_key(|v| match v {
        Violation::NonComplexIntersection { first, second } => (*first, *second),
        _ => (0, 0),
    });
    out
}

fn meets_in_common_face(a: &CellGeometry, b: &CellGeometry) -> bool {
    if let (Some(pa), Some(pb)) = (&a.small, &b.small) {
        if spanned_plane_certificate(a, pa, b, pb, a.lo.len()) {
            return true;
        }
    }
    if facet_certificate(a, b) || facet_certificate(b, a) {
        return true;
    }
    !lp_improper(a, b)
}

/// Looks for a facet hyperplane of `a` with `a` on one side, `b` on the other,
/// touching `b` only in shared vertices. Such a plane proves the two cells
/// meet in their common face.
fn facet_certificate(a: &CellGeometry, b: &CellGeometry) -> bool {
    'facets: for (omit, (normal, offset)) in a.facets.iter().enumerate() {
        if b.ids.contains(&a.ids[omit]) {
            continue;
        }
        for (id, p) in b.ids.iter().zip(&b.scaled) {
            // shared vertices other than the omitted one lie on the facet
            if !a.ids.contains(id) && int_dot(normal, p) >= *offset {
                continue 'facets;
            }
        }
        return true;
    }
    false
}

/// Tries every plane whose normal is spanned by vertex differences of the two
/// cells (d ≤ 3). A plane through the shared vertices with `a` and `b` on
/// opposite closed sides, one of them meeting it only in shared vertices,
/// proves the cells meet in their common face.
fn spanned_plane_certificate(a: &CellGeometry, pa: &[Small], b: &CellGeometry, pb: &[Small], d: usize) -> bool {
    let mut pool: Vec<Small> = pa.to_vec();
    let lone_b: Vec<Small> = b.ids.iter().zip(pb).filter(|(id, _)| !a.ids.contains(id)).map(|(_, p)| *p).collect();
    pool.extend(&lone_b);
    let shared: Vec<Small> = a.ids.iter().zip(pa).filter(|(id, _)| b.ids.contains(id)).map(|(_, p)| *p).collect();
    let lone_a: Vec<Small> = a.ids.iter().zip(pa).filter(|(id, _)| !b.ids.contains(id)).map(|(_, p)| *p).collect();
    let dot = |n: &Small, p: &Small| n[0] * p[0] + n[1] * p[1] + n[2] * p[2];

    let works = |n: &Small| -> bool {
        if *n == [0; 3] {
            return false;
        }
        let range = |pts: &[Small]| {
            pts.iter().map(|p| dot(n, p)).fold((i128::MAX, i128::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
        };
        let (a_lo, a_hi) = range(&lone_a);
        let (b_lo, b_hi) = range(&lone_b);
        match shared.split_first() {
            Some((first, rest)) => {
                let c = dot(n, first);
                // one cell may touch the plane outside the shared face as
                // long as the other stays strictly off it
                rest.iter().all(|p| dot(n, p) == c)
                    && ((a_lo >= c && b_hi < c)
                        || (a_lo > c && b_hi <= c)
                        || (a_hi <= c && b_lo > c)
                        || (a_hi < c && b_lo >= c))
            }
            None => a_hi < b_lo || b_hi < a_lo,
        }
    };

    let mut dirs: Vec<Small> = Vec::with_capacity(pool.len() * pool.len() / 2);
    for (k, p) in pool.iter().enumerate() {
        for q in &pool[k + 1..] {
            dirs.push([p[0] - q[0], p[1] - q[1], p[2] - q[2]]);
        }
    }
    match d {
        1 => works(&[1, 0, 0]),
        2 => dirs.iter().any(|v| works(&[-v[1], v[0], 0])),
        _ => dirs.iter().enumerate().any(|(k, u)| {
            dirs[k + 1..]
                .iter()
                .any(|v| works(&[u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]))
        }),
    }
}

/// True iff some common point of the two cells has positive weight on a
/// vertex of `a` that `b` does not share.
fn lp_improper(a: &CellGeometry, b: &CellGeometry) -> bool {
    // the constraints are homogeneous in the coordinates, so the common
    // scale factor of `scaled` drops out
    let d = a.lo.len();
    let (na, nb) = (a.scaled.len(), b.scaled.len());
    let n = na + nb;
    let zero = BigRational::zero;
    let one = || BigRational::from_integer(1.into());
    let mut rows = Vec::with_capacity(d + 2);
    for c in 0..d {
        let mut row: Vec<BigRational> = a.scaled.iter().map(|p| BigRational::from_integer(p[c].clone())).collect();
        row.extend(b.scaled.iter().map(|p| BigRational::from_integer(-&p[c])));
        rows.push(row);
    }
    rows.push((0..n).map(|k| if k < na { one() } else { zero() }).collect());
    rows.push((0..n).map(|k| if k >= na { one() } else { zero() }).collect());
    let mut rhs = vec![zero(); d];
    rhs.extend([one(), one()]);
    let cost: Vec<BigRational> =
        (0..n).map(|k| if k < na && !b.ids.contains(&a.ids[k]) { one() } else { zero() }).collect();
    match maximize(&rows, &rhs, &cost) {
        LpOutcome::Infeasible => false,
        LpOutcome::Optimal(v) => v.is_positive(),
        LpOutcome::Unbounded => unreachable!("weights are bounded by the sum constraints"),
    }
}

/// Parent-id pairs of the vertices of `cell`, from the complex's provenance.
pub fn cell_parent_pairs(complex: &Complex, cell: usize) -> Option<Vec<(usize, usize)>> {
    let prov = complex.provenance.as_ref()?;
    Some(complex.cells[cell].vertex_ids.iter().map(|&id| prov.vertex_parents[id]).collect())
}

/// Exact squared volume of every cell.
pub fn cell_volumes_sq(complex: &Complex) -> Vec<BigRational> {
    let r = complex.dimension;
    let fact: BigRational = BigRational::from_integer((1..=r as i64).product::<i64>().into());
    let denom = &fact * &fact;
    complex
        .cells
        .iter()
        .map(|c| gram_det(&edge_vectors(&complex.vertices, &c.vertex_ids)).map(|g| g / &denom).unwrap_or_default())
        .collect()
}

/// Child cell indices grouped by parent cell.
pub fn children_by_parent(complex: &Complex) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    if let Some(prov) = &complex.provenance {
        for (n, origin) in prov.cell_parents.iter().enumerate() {
            out.entry(origin.parent).or_default().push(n);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(coords: &[&[i64]]) -> Vec<Point> {
        coords.iter().map(|c| Point::from_ints(c)).collect()
    }

    fn geometry(ids: &[usize], pts: &[Point]) -> CellGeometry {
        let refs: Vec<&Point> = pts.iter().collect();
        let e = pts.iter().map(Point::max_exponent).max().unwrap_or(0);
        cell_geometry(ids, &refs, e)
    }

    fn tri_pair() -> impl Strategy<Value = (Vec<Point>, Vec<Point>, usize)> {
        let coord = proptest::collection::vec(-3i64..4, 2);
        (proptest::collection::vec(coord.clone(), 3), proptest::collection::vec(coord, 3), 0usize..3)
            .prop_map(|(a, b, shared)| {
                let a: Vec<Point> = a.iter().map(|c| Point::from_ints(c)).collect();
                let mut b: Vec<Point> = b.iter().map(|c| Point::from_ints(c)).collect();
                b[..shared].clone_from_slice(&a[..shared]);
                (a, b, shared)
            })
            .prop_filter("non-degenerate, distinct points", |(a, b, shared)| {
                let all: BTreeSet<&Point> = a.iter().chain(&b[*shared..]).collect();
                all.len() == 6 - shared
                    && !gram_det(&edge_vectors(a, &[0, 1, 2])).unwrap().is_zero()
                    && !gram_det(&edge_vectors(b, &[0, 1, 2])).unwrap().is_zero()
            })
    }

    proptest! {
        #[test]
        fn plane_certificate_agrees_with_lp((a, b, shared) in tri_pair()) {
            let ga = geometry(&[0, 1, 2], &a);
            let ids_b: Vec<usize> = (0..3).map(|k| if k < shared { k } else { k + 3 }).collect();
            let gb = geometry(&ids_b, &b);
            let proper = !lp_improper(&ga, &gb) && !lp_improper(&gb, &ga);
            let (pa, pb) = (ga.small.clone().unwrap(), gb.small.clone().unwrap());
            if spanned_plane_certificate(&ga, &pa, &gb, &pb, 2) {
                prop_assert!(proper);
            }
        }
    }

    fn square() -> Complex {
        build_complex(pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), vec![vec![0, 1, 3], vec![0, 2, 3]]).unwrap()
    }

    #[test]
    fn build_examples() {
        let tri = build_complex(pts(&[&[0, 0], &[1, 0], &[1, 1]]), vec![vec![2, 0, 1]]).unwrap();
        assert_eq!(tri.vertices().len(), 3);
        assert_eq!(tri.cells(), &[Simplex::new(vec![0, 1, 2])]);
        let sq = square();
        assert_eq!((sq.vertices().len(), sq.num_cells()), (4, 2));
        assert!(sq.faces(1).contains(&vec![0, 3]));
    }

    #[test]
    fn overlapping_triangles_rejected() {
        // second triangle covers half of the first
        let err = build_complex(pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1]]), vec![vec![0, 1, 2], vec![0, 1, 3]]);
        assert_eq!(err, Err(Error::NonComplexIntersection { first: 0, second: 1 }));
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            build_complex(pts(&[&[0, 0], &[1, 0], &[0, 0]]), vec![vec![0, 1, 2]]),
            Err(Error::DuplicatePoint { first: 0, second: 2 })
        );
        assert_eq!(
            build_complex(pts(&[&[0, 0], &[1, 1], &[2, 2]]), vec![vec![0, 1, 2]]),
            Err(Error::DegenerateCell(0))
        );
    }

    #[test]
    fn partial_edge_sharing_detected() {
        // triangles on either side of the x-axis, sharing only part of an edge
        let c = Complex {
            vertices: pts(&[&[0, 0], &[2, 0], &[0, 1], &[1, 0], &[3, 0], &[1, -1]]),
            cells: vec![Simplex::new(vec![0, 1, 2]), Simplex::new(vec![3, 4, 5])],
            dimension: 2,
            generation: 0,
            provenance: None,
        };
        assert_eq!(validate_complex(&c), vec![Violation::NonComplexIntersection { first: 0, second: 1 }]);
    }

    #[test]
    fn unsorted_cell_reported() {
        let mut c = square();
        c.cells[1].vertex_ids.swap(0, 1);
        assert_eq!(validate_complex(&c), vec![Violation::UnsortedCell { cell: 1 }]);
    }

    #[test]
    fn vertex_contact_and_disjoint_cells_are_fine() {
        // touching at a vertex, then far apart
        let c = build_complex(
            pts(&[&[0, 0], &[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[5, 5], &[6, 5], &[5, 6]]),
            vec![vec![0, 1, 2], vec![0, 3, 4], vec![5, 6, 7]],
        );
        assert!(c.is_ok());
    }

    #[test]
    fn four_dimensional_cells_use_exact_planes() {
        // beyond three coordinates only facet planes and the LP are available
        let c = iterate_subdivision(&crate::fixtures::kuhn_simplex(4), 1).unwrap();
        assert!(c.cells[0].points(&c.vertices).unwrap()[0].dim() == 4);
        assert!(validate_complex(&c).is_empty());
        // a second 4-simplex on the facet x4 = 0, on the same or the other side
        let mut points = crate::fixtures::kuhn_simplex_points(4);
        points.push(Point::from_ints(&[1, 1, 1, 2]));
        let same_side = build_complex(points.clone(), vec![vec![0, 1, 2, 3, 4], vec![0, 1, 2, 3, 5]]);
        assert_eq!(same_side.unwrap_err(), Error::NonComplexIntersection { first: 0, second: 1 });
        points[5] = Point::from_ints(&[1, 1, 1, -2]);
        assert!(build_complex(points, vec![vec![0, 1, 2, 3, 4], vec![0, 1, 2, 3, 5]]).is_ok());
    }

    #[test]
    fn surface_complex_in_r3() {
        // two triangles folded along a shared edge in R^3
        let c =
            build_complex(pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), vec![vec![0, 1, 2], vec![0, 1, 3]]);
        assert!(c.is_ok());
        // coplanar overlap in R^3
        let bad =
            build_complex(pts(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[1, 1, 0]]), vec![vec![0, 1, 2], vec![0, 1, 3]]);
        assert!(matches!(bad, Err(Error::NonComplexIntersection { .. })));
    }

    #[test]
    fn subdivide_examples() {
        let seg = build_complex(pts(&[&[0], &[1]]), vec![vec![0, 1]]).unwrap();
        let s1 = subdivide_complex(&seg).unwrap();
        assert_eq!((s1.vertices().len(), s1.num_cells()), (3, 2));
        assert_eq!(s1.generation(), 1);

        let sq1 = subdivide_complex(&square()).unwrap();
        assert_eq!((sq1.vertices().len(), sq1.num_cells()), (9, 8));
        assert!(validate_complex(&sq1).is_empty());
        // diagonal midpoint appears once
        let mid = Point::new(vec![Dyadic::new(1, 1), Dyadic::new(1, 1)]);
        assert_eq!(sq1.vertices().iter().filter(|p| **p == mid).count(), 1);

        let tet =
            build_complex(pts(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]), vec![vec![0, 1, 2, 3]]).unwrap();
        let t1 = subdivide_complex(&tet).unwrap();
        assert_eq!((t1.vertices().len(), t1.num_cells()), (10, 8));
    }

    #[test]
    fn new_order_is_lexicographic_on_parent_pairs() {
        let sq1 = subdivide_complex(&square()).unwrap();
        let prov = sq1.provenance().unwrap();
        assert!(prov.vertex_parents.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(prov.vertex_parents[0], (0, 0));
        assert_eq!(prov.vertex_parents[1], (0, 1));
        for n in 0..sq1.num_cells() {
            let pairs = cell_parent_pairs(&sq1, n).unwrap();
            assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn iterate_counts_and_volume() {
        let tri = build_complex(pts(&[&[0, 0], &[1, 0], &[1, 1]]), vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(iterate_subdivision(&tri, 0).unwrap(), tri);
        let t3 = iterate_subdivision(&tri, 3).unwrap();
        assert_eq!(t3.num_cells(), 64);
        assert!(t3.max_exponent() <= 3);

        let tet =
            build_complex(pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), vec![vec![0, 1, 2, 3]]).unwrap();
        let t2 = iterate_subdivision(&tet, 2).unwrap();
        assert_eq!(t2.num_cells(), 64);
        // every cell has volume (1/6)/64; squared: 1/(36·4096)
        let expected = BigRational::new(1.into(), (36 * 4096).into());
        assert!(cell_volumes_sq(&t2).iter().all(|v| *v == expected));
    }

    #[test]
    fn subdivision_is_deterministic() {
        let a = iterate_subdivision(&square(), 2).unwrap();
        let b = iterate_subdivision(&square(), 2).unwrap();
        assert_eq!(a, b);
    }
}
