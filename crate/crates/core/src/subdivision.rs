//! Geometric subdivision of a single simplex into its `2^r` children.
//!
//! The children can be generated three ways, which the tests require to
//! agree exactly:
//!
//! * from the child keys `(σ, π)` with `π^σ = id` ([`crate::kernel`]),
//! * as monotone lattice paths of midpoint labels ([`path_children`]),
//! * as maximal cliques of the label adjacency relation ([`clique_children`]).
//!
//! [`barycentric_subdivide`] is the classical alternative whose simplices
//! flatten under iteration, kept as a baseline.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{gram_det, gram_det_rational, rational_sub, Point, RationalPoint};
use crate::error::{Error, Result};
use crate::kernel::{child_vertex_labels, enumerate_children, ChildKey, MidpointLabel, Permutation};

/// An ordered list of vertex ids into some vertex table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex {
    pub vertex_ids: Vec<usize>,
}

impl Simplex {
    pub fn new(vertex_ids: Vec<usize>) -> Self {
        Self { vertex_ids }
    }

    /// Simplex dimension `r` (one less than the vertex count).
    pub fn dim(&self) -> usize {
        self.vertex_ids.len().saturating_sub(1)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.vertex_ids.windows(2).all(|w| w[0] < w[1])
    }

    pub fn points(&self, table: &[Point]) -> Result<Vec<Point>> {
        self.vertex_ids
            .iter()
            .map(|&id| table.get(id).cloned().ok_or(Error::VertexOutOfRange { id, len: table.len() }))
            .collect()
    }
}

/// One child of `Z(T)`: its vertex labels (ascending `i + j`) and the key
/// that produced it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChildSimplex {
    pub labels: Vec<MidpointLabel>,
    pub key: ChildKey,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubdivisionResult {
    pub new_vertices: BTreeMap<MidpointLabel, Point>,
    pub children: Vec<ChildSimplex>,
}

impl SubdivisionResult {
    /// Vertex table in lexicographic label order.
    pub fn vertex_table(&self) -> Vec<Point> {
        self.new_vertices.values().cloned().collect()
    }

    /// Children as id lists into [`Self::vertex_table`].
    pub fn child_simplices(&self) -> Vec<Simplex> {
        let index: BTreeMap<MidpointLabel, usize> =
            self.new_vertices.keys().enumerate().map(|(n, l)| (*l, n)).collect();
        self.children.iter().map(|c| Simplex::new(c.labels.iter().map(|l| index[l]).collect())).collect()
    }

    pub fn child_points(&self, child: usize) -> Vec<Point> {
        self.children[child].labels.iter().map(|l| self.new_vertices[l].clone()).collect()
    }

    pub fn all_child_points(&self) -> Vec<Vec<Point>> {
        (0..self.children.len()).map(|k| self.child_points(k)).collect()
    }
}

pub(crate) fn ensure_nondegenerate(points: &[Point]) -> Result<()> {
    let Some((first, rest)) = points.split_first() else {
        return Err(Error::Degenerate);
    };
    let edges: Vec<Point> = rest.iter().map(|p| p.sub(first)).collect();
    if gram_det(&edges)?.is_zero() {
        return Err(Error::Degenerate);
    }
    Ok(())
}

/// Subdivides the simplex (in the given vertex order) into `2^r` children,
/// ordered by [`ChildKey::ordinal`].
pub fn subdivide_simplex(simplex: &Simplex, table: &[Point]) -> Result<SubdivisionResult> {
    subdivide_points(&simplex.points(table)?)
}

pub fn subdivide_points(vertices: &[Point]) -> Result<SubdivisionResult> {
    ensure_nondegenerate(vertices)?;
    let r = vertices.len() - 1;
    let new_vertices =
        MidpointLabel::all(r).into_iter().map(|l| (l, Point::midpoint(&vertices[l.i], &vertices[l.j]))).collect();
    let children =
        enumerate_children(r).into_iter().map(|key| ChildSimplex { labels: child_vertex_labels(&key), key }).collect();
    Ok(SubdivisionResult { new_vertices, children })
}

/// True iff the label pairs interleave (`i ≤ i' ≤ j ≤ j'` up to swapping the
/// two labels), i.e. the two midpoints span an edge of `Z(T)`.
pub fn labels_adjacent(a: MidpointLabel, b: MidpointLabel) -> bool {
    if a == b {
        return false;
    }
    let chain = |x: MidpointLabel, y: MidpointLabel| x.i <= y.i && y.i <= x.j && x.j <= y.j;
    chain(a, b) || chain(b, a)
}

/// For each `u` in `0..=r`, every monotone lattice path from `(0, u)` to
/// `(u, r)`.
pub fn path_children(r: usize) -> Vec<Vec<MidpointLabel>> {
    assert!(r >= 1, "dimension must be at least 1");
    fn extend(u: usize, r: usize, path: &mut Vec<MidpointLabel>, out: &mut Vec<Vec<MidpointLabel>>) {
        let last = *path.last().expect("path starts non-empty");
        if last.i == u && last.j == r {
            out.push(path.clone());
            return;
        }
        if last.i < u {
            path.push(MidpointLabel { i: last.i + 1, j: last.j });
            extend(u, r, path, out);
            path.pop();
        }
        if last.j < r {
            path.push(MidpointLabel { i: last.i, j: last.j + 1 });
            extend(u, r, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for u in 0..=r {
        extend(u, r, &mut vec![MidpointLabel { i: 0, j: u }], &mut out);
    }
    out
}

/// Maximal cliques of [`labels_adjacent`] over all labels `i ≤ j ≤ r`, each
/// sorted by ascending `i + j`.
pub fn clique_children(r: usize) -> Vec<Vec<MidpointLabel>> {
    assert!(r >= 1, "dimension must be at least 1");
    let labels = MidpointLabel::all(r);
    let n = labels.len();
    let adj: Vec<Vec<bool>> = labels.iter().map(|&a| labels.iter().map(|&b| labels_adjacent(a, b)).collect()).collect();

    // Bron–Kerbosch with pivoting
    fn bk(
        adj: &[Vec<bool>],
        clique: &mut Vec<usize>,
        mut candidates: Vec<usize>,
        mut excluded: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if candidates.is_empty() && excluded.is_empty() {
            out.push(clique.clone());
            return;
        }
        let pivot = candidates
            .iter()
            .chain(&excluded)
            .copied()
            .max_by_key(|&p| candidates.iter().filter(|&&c| adj[p][c]).count())
            .expect("non-empty");
        let branch: Vec<usize> = candidates.iter().copied().filter(|&c| !adj[pivot][c]).collect();
        for v in branch {
            clique.push(v);
            let next_c = candidates.iter().copied().filter(|&c| adj[v][c]).collect();
            let next_x = excluded.iter().copied().filter(|&x| adj[v][x]).collect();
            bk(adj, clique, next_c, next_x, out);
            clique.pop();
            candidates.retain(|&c| c != v);
            excluded.push(v);
        }
    }

    let mut raw = Vec::new();
    bk(&adj, &mut Vec::new(), (0..n).collect(), Vec::new(), &mut raw);
    let mut cliques: Vec<Vec<MidpointLabel>> = raw
        .into_iter()
        .map(|c| {
            let mut ls: Vec<MidpointLabel> = c.into_iter().map(|k| labels[k]).collect();
            ls.sort_by_key(|l| (l.weight(), l.i));
            ls
        })
        .collect();
    cliques.sort();
    cliques
}

/// A simplex given directly by rational vertex coordinates.
pub type RationalSimplex = Vec<RationalPoint>;

/// Classical barycentric subdivision into `(r+1)!` children. Child `τ` has
/// vertex `k` at the barycenter of `v_{τ_0}, …, v_{τ_k}`; children follow the
/// lexicographic order of `τ`.
pub fn barycentric_subdivide(vertices: &[RationalPoint]) -> Result<Vec<RationalSimplex>> {
    let (first, rest) = vertices.split_first().ok_or(Error::Degenerate)?;
    let edges: Vec<RationalPoint> = rest.iter().map(|v| rational_sub(v, first)).collect();
    if gram_det_rational(&edges)?.is_zero() {
        return Err(Error::Degenerate);
    }
    let n = vertices.len();
    let dim = first.len();
    let children = Permutation::all(n)
        .into_iter()
        .map(|tau| {
            let mut sum = vec![BigRational::zero(); dim];
            tau.as_slice()
                .iter()
                .enumerate()
                .map(|(k, &p)| {
                    for (s, c) in sum.iter_mut().zip(&vertices[p - 1]) {
                        *s += c;
                    }
                    let count = BigRational::from_integer((k as i64 + 1).into());
                    sum.iter().map(|s| s / &count).collect()
                })
                .collect()
        })
        .collect();
    Ok(children)
}

/// `depth`-fold barycentric subdivision.
pub fn barycentric_iterate(vertices: &[RationalPoint], depth: usize) -> Result<Vec<RationalSimplex>> {
    let mut cells = vec![vertices.to_vec()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(cells.len() * (1..=vertices.len()).product::<usize>());
        for cell in &cells {
            next.extend(barycentric_subdivide(cell)?);
        }
        cells = next;
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{BarycentricFrame, Dyadic};
    use crate::kernel::constructive_child;
    use crate::kernel::edge_frame;
    use std::collections::BTreeSet;

    fn l(i: usize, j: usize) -> MidpointLabel {
        MidpointLabel::new(i, j)
    }

    fn right_triangle() -> Vec<Point> {
        vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0]), Point::from_ints(&[1, 1])]
    }

    fn kuhn(r: usize) -> Vec<Point> {
        (0..=r).map(|k| Point::from_ints(&(0..r).map(|c| i64::from(c < k)).collect::<Vec<_>>())).collect()
    }

    fn volume_sq(points: &[Point]) -> BigRational {
        let (_, edges) = edge_frame(points);
        let fact: i64 = (1..=edges.len() as i64).product();
        gram_det(&edges).unwrap() / BigRational::from_integer((fact * fact).into())
    }

    #[test]
    fn interval_halving() {
        let seg = vec![Point::from_ints(&[0]), Point::from_ints(&[1])];
        let res = subdivide_points(&seg).unwrap();
        assert_eq!(res.children.len(), 2);
        assert_eq!(res.child_points(0), vec![Point::from_ints(&[0]), Point::new(vec![Dyadic::new(1, 1)])]);
        assert_eq!(res.child_points(1), vec![Point::new(vec![Dyadic::new(1, 1)]), Point::from_ints(&[1])]);
    }

    #[test]
    fn triangle_children_labels() {
        let res = subdivide_points(&right_triangle()).unwrap();
        let got: Vec<Vec<MidpointLabel>> = res.children.iter().map(|c| c.labels.clone()).collect();
        assert_eq!(
            got,
            vec![
                vec![l(0, 0), l(0, 1), l(0, 2)],
                vec![l(0, 1), l(1, 1), l(1, 2)],
                vec![l(0, 1), l(0, 2), l(1, 2)],
                vec![l(0, 2), l(1, 2), l(2, 2)],
            ]
        );
        let ids = res.child_simplices();
        assert!(ids.iter().all(Simplex::is_strictly_increasing));
    }

    #[test]
    fn tetrahedron_children_volumes() {
        let t = kuhn(3);
        let res = subdivide_points(&t).unwrap();
        assert_eq!(res.children.len(), 8);
        // parent volume 1/6, children 1/48
        assert_eq!(volume_sq(&t), BigRational::new(1.into(), 36.into()));
        for k in 0..8 {
            assert_eq!(volume_sq(&res.child_points(k)), BigRational::new(1.into(), 2304.into()));
        }
    }

    #[test]
    fn children_match_constructive_route() {
        let t = vec![
            Point::from_ints(&[0, 0, 0, 0]),
            Point::from_ints(&[3, 1, 0, 0]),
            Point::from_ints(&[1, 4, 1, 0]),
            Point::from_ints(&[2, 2, 5, 1]),
        ];
        let (base, edges) = edge_frame(&t);
        let res = subdivide_points(&t).unwrap();
        for (k, child) in res.children.iter().enumerate() {
            assert_eq!(res.child_points(k), constructive_child(&base, &edges, &child.key).unwrap());
        }
    }

    #[test]
    fn degenerate_rejected() {
        let flat = vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1]), Point::from_ints(&[2, 2])];
        assert_eq!(subdivide_points(&flat), Err(Error::Degenerate));
        let table = right_triangle();
        assert_eq!(
            subdivide_simplex(&Simplex::new(vec![0, 1, 7]), &table),
            Err(Error::VertexOutOfRange { id: 7, len: 3 })
        );
    }

    #[test]
    fn adjacency_examples() {
        assert!(labels_adjacent(l(0, 1), l(1, 2)));
        assert!(!labels_adjacent(l(0, 0), l(1, 1)));
        assert!(labels_adjacent(l(0, 2), l(1, 3)));
        assert!(!labels_adjacent(l(0, 1), l(2, 3)));
        assert!(!labels_adjacent(l(1, 2), l(1, 2)));
        assert!(!labels_adjacent(l(0, 3), l(1, 2)));
    }

    /// Brute force: two labels are adjacent iff some child path contains both.
    #[test]
    fn adjacency_matches_path_co_membership() {
        for r in 1..=5 {
            let paths = path_children(r);
            for a in MidpointLabel::all(r) {
                for b in MidpointLabel::all(r) {
                    let together = a != b && paths.iter().any(|p| p.contains(&a) && p.contains(&b));
                    assert_eq!(labels_adjacent(a, b), together, "r={r} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn path_examples() {
        assert_eq!(path_children(1), vec![vec![l(0, 0), l(0, 1)], vec![l(0, 1), l(1, 1)]]);
        let p4 = path_children(4);
        assert_eq!(p4.len(), 16);
        let mut by_u = [0usize; 5];
        for p in &p4 {
            by_u[p[0].j] += 1;
        }
        assert_eq!(by_u, [1, 4, 6, 4, 1]);
    }

    #[test]
    fn generators_agree() {
        for r in 1..=5 {
            let keyed: BTreeSet<_> = enumerate_children(r).iter().map(child_vertex_labels).collect();
            let paths: BTreeSet<_> = path_children(r).into_iter().collect();
            let cliques: BTreeSet<_> = clique_children(r).into_iter().collect();
            assert_eq!(keyed.len(), 1 << r);
            assert_eq!(keyed, paths, "r = {r}");
            assert_eq!(keyed, cliques, "r = {r}");
            for child in &keyed {
                for (x, a) in child.iter().enumerate() {
                    for b in &child[x + 1..] {
                        assert!(labels_adjacent(*a, *b));
                        assert!(a.weight() < b.weight());
                    }
                }
            }
        }
    }

    #[test]
    fn clique_sizes() {
        assert_eq!(clique_children(1), vec![vec![l(0, 0), l(0, 1)], vec![l(0, 1), l(1, 1)]]);
        let c3 = clique_children(3);
        assert_eq!(c3.len(), 8);
        assert!(c3.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn children_stay_inside_parent() {
        let t = kuhn(4);
        let frame = BarycentricFrame::from_points(&t).unwrap();
        let res = subdivide_points(&t).unwrap();
        for p in res.new_vertices.values() {
            let lambda = frame.locate_point(p).unwrap();
            let one = BigRational::from_integer(1.into());
            assert!(lambda.iter().all(|x| *x >= BigRational::zero() && *x <= one));
        }
    }

    #[test]
    fn barycentric_counts_and_areas() {
        let seg: Vec<RationalPoint> = vec![Point::from_ints(&[0]).to_rational(), Point::from_ints(&[1]).to_rational()];
        let halves = barycentric_subdivide(&seg).unwrap();
        assert_eq!(halves.len(), 2);

        let tri: Vec<RationalPoint> = right_triangle().iter().map(Point::to_rational).collect();
        let children = barycentric_subdivide(&tri).unwrap();
        assert_eq!(children.len(), 6);
        for child in &children {
            let edges: Vec<RationalPoint> = child[1..].iter().map(|v| rational_sub(v, &child[0])).collect();
            // area² = gram/4 = (1/12)², parent area 1/2
            assert_eq!(
                gram_det_rational(&edges).unwrap() / BigRational::from_integer(4.into()),
                BigRational::new(1.into(), 144.into())
            );
        }
        assert_eq!(barycentric_iterate(&tri, 2).unwrap().len(), 36);
    }
}
