//! Flatness `c^r / v` of simplices, kept squared so that everything stays
//! rational: `q² = c^{2r} / v²` with `c` the longest edge and `v` the volume.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arithmetic::{dot, gram_det_rational, rational_sub, Point, RationalPoint, RationalSq};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::kernel::{conjugate_vertices, edge_frame, Permutation};

pub fn squared_edge_lengths(vertices: &[RationalPoint]) -> Vec<RationalSq> {
    let mut out = Vec::with_capacity(vertices.len() * vertices.len().saturating_sub(1) / 2);
    for (k, a) in vertices.iter().enumerate() {
        for b in &vertices[k + 1..] {
            let diff = rational_sub(a, b);
            out.push(dot(&diff, &diff));
        }
    }
    out
}

/// Squared length of the longest edge.
pub fn diameter_sq(vertices: &[RationalPoint]) -> RationalSq {
    squared_edge_lengths(vertices).into_iter().max().unwrap_or_else(BigRational::zero)
}

/// Squared volume `det(GᵀG) / (r!)²`; zero iff degenerate.
pub fn volume_sq(vertices: &[RationalPoint]) -> RationalSq {
    let Some((first, rest)) = vertices.split_first() else {
        return BigRational::zero();
    };
    let edges: Vec<RationalPoint> = rest.iter().map(|v| rational_sub(v, first)).collect();
    let fact: i64 = (1..=edges.len() as i64).product();
    let gram = gram_det_rational(&edges).unwrap_or_else(|_| BigRational::zero());
    gram / BigRational::from_integer((fact * fact).into())
}

/// `q² = c^{2r} / v²`.
pub fn flatness_sq(vertices: &[RationalPoint]) -> Result<RationalSq> {
    let v2 = volume_sq(vertices);
    if v2.is_zero() {
        return Err(Error::Degenerate);
    }
    let r = vertices.len() - 1;
    Ok(num_traits::pow(diameter_sq(vertices), r) / v2)
}

/// Sorted squared edge lengths divided by the squared diameter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Signature(pub Vec<BigRational>);

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn similarity_signature(vertices: &[RationalPoint]) -> Result<Signature> {
    if volume_sq(vertices).is_zero() {
        return Err(Error::Degenerate);
    }
    let c2 = diameter_sq(vertices);
    let mut lengths: Vec<BigRational> = squared_edge_lengths(vertices).into_iter().map(|l| l / &c2).collect();
    lengths.sort();
    Ok(Signature(lengths))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QualityRecord {
    pub diameter_sq: RationalSq,
    pub volume_sq: RationalSq,
    pub flatness_sq: RationalSq,
    pub signature: Signature,
}

pub fn quality_record(vertices: &[RationalPoint]) -> Result<QualityRecord> {
    let volume_sq = volume_sq(vertices);
    if volume_sq.is_zero() {
        return Err(Error::Degenerate);
    }
    let diameter_sq = diameter_sq(vertices);
    let r = vertices.len() - 1;
    let flatness_sq = num_traits::pow(diameter_sq.clone(), r) / &volume_sq;
    let mut lengths: Vec<BigRational> = squared_edge_lengths(vertices).into_iter().map(|l| l / &diameter_sq).collect();
    lengths.sort();
    Ok(QualityRecord { diameter_sq, volume_sq, flatness_sq, signature: Signature(lengths) })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QualityReport {
    pub dimension: usize,
    pub generation: u32,
    pub records: Vec<QualityRecord>,
    /// Distinct signatures and how many cells carry each.
    pub census: BTreeMap<Signature, usize>,
    pub max_flatness_sq: RationalSq,
}

impl QualityReport {
    pub fn from_records(dimension: usize, generation: u32, records: Vec<QualityRecord>) -> Self {
        let mut census = BTreeMap::new();
        let mut max_flatness_sq = BigRational::zero();
        for rec in &records {
            *census.entry(rec.signature.clone()).or_insert(0) += 1;
            if rec.flatness_sq > max_flatness_sq {
                max_flatness_sq = rec.flatness_sq.clone();
            }
        }
        Self { dimension, generation, records, census, max_flatness_sq }
    }

    pub fn signatures(&self) -> BTreeSet<Signature> {
        self.census.keys().cloned().collect()
    }
}

pub fn quality_report(complex: &Complex) -> Result<QualityReport> {
    let records = (0..complex.num_cells())
        .map(|n| quality_record(&complex.cell_rational_points(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(QualityReport::from_records(complex.dimension(), complex.generation(), records))
}

/// Largest `q²` over a list of simplices.
pub fn max_flatness_sq(cells: &[Vec<RationalPoint>]) -> Result<RationalSq> {
    cells.iter().try_fold(BigRational::zero(), |acc, c| {
        let q = flatness_sq(c)?;
        Ok(if q > acc { q } else { acc })
    })
}

/// Signatures of the `r!` conjugates of the ordered simplex.
pub fn conjugate_signatures(vertices: &[Point]) -> Result<BTreeSet<Signature>> {
    let (base, edges) = edge_frame(vertices);
    Permutation::all(edges.len())
        .iter()
        .map(|pi| {
            let conj = conjugate_vertices(&base, &edges, pi)?;
            let rational: Vec<RationalPoint> = conj.iter().map(Point::to_rational).collect();
            similarity_signature(&rational)
        })
        .collect()
}

/// Smallest possible `q²` in dimension `r`, attained by the regular simplex
/// with unit edges: `v² = (r+1) / (2^r (r!)²)`.
pub fn regular_simplex_flatness_sq(r: usize) -> RationalSq {
    let fact: i64 = (1..=r as i64).product();
    let v2 = BigRational::new((r as i64 + 1).into(), ((1i64 << r) * fact * fact).into());
    BigRational::one() / v2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::Dyadic;
    use crate::subdivision::subdivide_points;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rat(points: &[&[i64]]) -> Vec<RationalPoint> {
        points.iter().map(|p| Point::from_ints(p).to_rational()).collect()
    }

    fn right_triangle() -> Vec<RationalPoint> {
        rat(&[&[0, 0], &[1, 0], &[1, 1]])
    }

    /// Regular triangle with side √2 (a side-1 one has irrational coordinates).
    fn equilateral_sqrt2() -> Vec<RationalPoint> {
        rat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter_sq(&right_triangle()), q(2, 1));
        assert_eq!(diameter_sq(&rat(&[&[0], &[1]])), q(1, 1));
        let child =
            subdivide_points(&[Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0]), Point::from_ints(&[1, 1])])
                .unwrap();
        let pts: Vec<RationalPoint> = child.child_points(0).iter().map(Point::to_rational).collect();
        assert_eq!(diameter_sq(&pts), q(1, 2));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume_sq(&right_triangle()), q(1, 4));
        assert_eq!(volume_sq(&rat(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), q(1, 36));
        assert_eq!(volume_sq(&rat(&[&[0, 0], &[1, 1], &[2, 2]])), q(0, 1));
    }

    #[test]
    fn flatness_examples() {
        assert_eq!(flatness_sq(&right_triangle()).unwrap(), q(16, 1));
        // side √2 equilateral: c² = 2, v² = 3/4; q² = 4 / (3/4) = 16/3, the
        // same as for side 1 since q is scale invariant
        assert_eq!(flatness_sq(&equilateral_sqrt2()).unwrap(), q(16, 3));
        assert_eq!(regular_simplex_flatness_sq(2), q(16, 3));
        assert_eq!(flatness_sq(&rat(&[&[0, 0], &[1, 1], &[2, 2]])), Err(Error::Degenerate));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(similarity_signature(&right_triangle()).unwrap(), Signature(vec![q(1, 2), q(1, 2), q(1, 1)]));
        assert_eq!(similarity_signature(&equilateral_sqrt2()).unwrap(), Signature(vec![q(1, 1); 3]));
    }

    #[test]
    fn triangle_children_are_conjugate_shaped() {
        let t = vec![Point::from_ints(&[0, 0]), Point::from_ints(&[3, 0]), Point::from_ints(&[1, 2])];
        let conj = conjugate_signatures(&t).unwrap();
        // the two conjugates of a triangle are point reflections of each other
        assert_eq!(conj.len(), 1);
        let res = subdivide_points(&t).unwrap();
        let parent_q: BTreeSet<RationalSq> = Permutation::all(2)
            .iter()
            .map(|pi| {
                let (b, e) = edge_frame(&t);
                let v: Vec<RationalPoint> =
                    conjugate_vertices(&b, &e, pi).unwrap().iter().map(Point::to_rational).collect();
                flatness_sq(&v).unwrap()
            })
            .collect();
        for k in 0..4 {
            let pts: Vec<RationalPoint> = res.child_points(k).iter().map(Point::to_rational).collect();
            assert!(conj.contains(&similarity_signature(&pts).unwrap()));
            assert!(parent_q.contains(&flatness_sq(&pts).unwrap()));
        }
    }

    fn triangle_strategy() -> impl Strategy<Value = Vec<Point>> {
        proptest::collection::vec(-8i64..9, 6)
            .prop_map(|c| c.chunks(2).map(Point::from_ints).collect::<Vec<_>>())
            .prop_filter("non-degenerate", |t| {
                !volume_sq(&t.iter().map(Point::to_rational).collect::<Vec<_>>()).is_zero()
            })
    }

    proptest! {
        #[test]
        fn flatness_is_scale_invariant(t in triangle_strategy(), m in 1i64..16, e in 0u32..5) {
            let factor = Dyadic::new(m, e);
            let scaled: Vec<RationalPoint> = t.iter().map(|p| p.scale(&factor).to_rational()).collect();
            let orig: Vec<RationalPoint> = t.iter().map(Point::to_rational).collect();
            prop_assert_eq!(flatness_sq(&scaled).unwrap(), flatness_sq(&orig).unwrap());
            prop_assert_eq!(similarity_signature(&scaled).unwrap(), similarity_signature(&orig).unwrap());
            prop_assert!(flatness_sq(&orig).unwrap() >= regular_simplex_flatness_sq(2));
        }

        #[test]
        fn measures_ignore_vertex_order(t in triangle_strategy(), rot in 0usize..3) {
            let orig: Vec<RationalPoint> = t.iter().map(Point::to_rational).collect();
            let mut permuted = orig.clone();
            permuted.rotate_left(rot);
            permuted.swap(0, 1);
            prop_assert_eq!(diameter_sq(&permuted), diameter_sq(&orig));
            prop_assert_eq!(volume_sq(&permuted), volume_sq(&orig));
        }
    }
}
