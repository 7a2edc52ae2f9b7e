//! Brute-force verification independent of the subdivision code.
//!
//! Membership is decided exactly in two ways: through barycentric
//! coordinates (`λ ≥ 0, Σλ = 1`) and through the ordered-coefficient
//! description of a conjugate simplex (`1 ≥ α_1 ≥ … ≥ α_r ≥ 0`). Partition
//! checks combine an exact relative-volume sum with seeded dyadic sampling,
//! so no tolerance appears anywhere.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arithmetic::{
    determinant, dot, gram_matrix, invert, rational_sub, BarycentricFrame, Dyadic, Point, RationalPoint,
};
use crate::error::{Error, Result};
use crate::kernel::{child_vertex_labels, conjugate_vertices, enumerate_children, MidpointLabel, Permutation};
use crate::subdivision::{clique_children, labels_adjacent, path_children};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipStatus {
    Interior,
    Boundary,
    Outside,
    NotInAffineHull,
}

impl MembershipStatus {
    pub fn is_member(self) -> bool {
        matches!(self, MembershipStatus::Interior | MembershipStatus::Boundary)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipResult {
    pub status: MembershipStatus,
    pub coordinates: Option<Vec<BigRational>>,
}

fn classify(lambda: Option<Vec<BigRational>>) -> MembershipResult {
    let Some(lambda) = lambda else {
        return MembershipResult { status: MembershipStatus::NotInAffineHull, coordinates: None };
    };
    let status = if lambda.iter().any(Signed::is_negative) {
        MembershipStatus::Outside
    } else if lambda.iter().any(Zero::is_zero) {
        MembershipStatus::Boundary
    } else {
        MembershipStatus::Interior
    };
    MembershipResult { status, coordinates: Some(lambda) }
}

/// A simplex prepared for many membership queries.
#[derive(Debug, Clone)]
pub struct SimplexLocator {
    frame: BarycentricFrame,
}

impl SimplexLocator {
    pub fn new(vertices: &[Point]) -> Result<Self> {
        Ok(Self { frame: BarycentricFrame::from_points(vertices)? })
    }

    pub fn classify(&self, p: &Point) -> MembershipResult {
        classify(self.frame.locate_point(p))
    }

    fn classify_rational(&self, p: &[BigRational]) -> MembershipResult {
        classify(self.frame.locate(p))
    }
}

pub fn point_in_simplex(p: &Point, simplex: &[Point]) -> Result<MembershipResult> {
    let locator = SimplexLocator::new(simplex)?;
    if p.dim() != simplex[0].dim() {
        return Err(Error::DimensionMismatch { expected: simplex[0].dim(), found: p.dim() });
    }
    Ok(locator.classify(p))
}

/// Coordinates of points in the edge basis `x_1 … x_r` anchored at `x_0`.
#[derive(Debug, Clone)]
pub struct EdgeBasis {
    base: RationalPoint,
    edges: Vec<RationalPoint>,
    /// `(XᵀX)^{-1}`
    gram_inverse: Vec<Vec<BigRational>>,
}

impl EdgeBasis {
    pub fn new(base: &Point, edges: &[Point]) -> Result<Self> {
        let edges: Vec<RationalPoint> = edges.iter().map(Point::to_rational).collect();
        if let Some(e) = edges.iter().find(|e| e.len() != base.dim()) {
            return Err(Error::DimensionMismatch { expected: base.dim(), found: e.len() });
        }
        let gram_inverse = invert(&gram_matrix(&edges)).ok_or(Error::Degenerate)?;
        Ok(Self { base: base.to_rational(), edges, gram_inverse })
    }

    /// `β` with `p = x_0 + Σ β_a x_a`, or `None` when `p` is off the span.
    pub fn coefficients(&self, p: &[BigRational]) -> Option<Vec<BigRational>> {
        let rel = rational_sub(p, &self.base);
        let rhs: Vec<BigRational> = self.edges.iter().map(|e| dot(e, &rel)).collect();
        let beta: Vec<BigRational> = self.gram_inverse.iter().map(|row| dot(row, &rhs)).collect();
        for (c, target) in rel.iter().enumerate() {
            let recon = beta.iter().zip(&self.edges).fold(BigRational::zero(), |acc, (b, e)| acc + b * &e[c]);
            if &recon != target {
                return None;
            }
        }
        Some(beta)
    }
}

/// True iff `p = x_0 + Σ α_ν x_{p_ν}` with `1 ≥ α_1 ≥ … ≥ α_r ≥ 0`.
pub fn chain_membership(p: &Point, base: &Point, edges: &[Point], pi: &Permutation) -> Result<bool> {
    if pi.len() != edges.len() {
        return Err(Error::DimensionMismatch { expected: edges.len(), found: pi.len() });
    }
    let basis = EdgeBasis::new(base, edges)?;
    Ok(chain_test(&basis, pi, &p.to_rational()))
}

fn chain_test(basis: &EdgeBasis, pi: &Permutation, p: &[BigRational]) -> bool {
    let Some(beta) = basis.coefficients(p) else { return false };
    let alpha: Vec<&BigRational> = pi.as_slice().iter().map(|&a| &beta[a - 1]).collect();
    let one = BigRational::one();
    let zero = BigRational::zero();
    let upper = alpha.first().is_none_or(|a| **a <= one);
    let lower = alpha.last().is_none_or(|a| **a >= zero);
    upper && lower && alpha.windows(2).all(|w| w[0] >= w[1])
}

/// Deterministic generator of exact dyadic sample points.
pub struct DyadicSampler {
    rng: ChaCha8Rng,
    bits: u32,
}

impl DyadicSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), bits: 20 }
    }

    /// A point with strictly positive dyadic barycentric weights, hence in
    /// the interior of the simplex.
    pub fn interior_point(&mut self, vertices: &[Point]) -> Point {
        let n = vertices.len();
        let total = 1u64 << self.bits;
        let mut cuts = BTreeSet::new();
        while cuts.len() < n - 1 {
            cuts.insert(self.rng.gen_range(1..total));
        }
        let mut prev = 0;
        let mut p = Point::origin(vertices[0].dim());
        for (k, v) in vertices.iter().enumerate() {
            let next = cuts.iter().nth(k).copied().unwrap_or(total);
            let w = Dyadic::new(BigInt::from(next - prev), self.bits);
            p = p.add(&v.scale(&w));
            prev = next;
        }
        p
    }

    /// A dyadic value strictly inside `(0, 1)` (odd numerator).
    pub fn open_unit(&mut self) -> Dyadic {
        let m = self.rng.gen_range(0..1u64 << (self.bits - 1)) * 2 + 1;
        Dyadic::new(BigInt::from(m), self.bits)
    }

    /// A dyadic value in `[-1/4, 5/4]`; with `coarse` the denominator is 8,
    /// so ties and exact boundary hits are frequent.
    pub fn around_unit(&mut self, coarse: bool) -> Dyadic {
        let bits = if coarse { 3 } else { self.bits };
        let span = 1i64 << bits;
        let m = self.rng.gen_range(-(span / 4)..=span + span / 4);
        Dyadic::new(m, bits)
    }
}

fn parallelepiped_point(base: &Point, edges: &[Point], alpha: &[Dyadic]) -> Point {
    edges.iter().zip(alpha).fold(base.clone(), |acc, (e, a)| acc.add(&e.scale(a)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    /// Σ child volume / parent volume, exact.
    pub volume_ratio_sum: BigRational,
    pub samples: usize,
    pub uncovered: usize,
    pub interior_overlaps: usize,
    pub failures: Vec<String>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `children` tile `parent`: exact volumes sum to the parent's,
/// and `samples` seeded interior points of the parent each lie in some child,
/// lying in several only on shared boundaries.
pub fn partition_check(parent: &[Point], children: &[Vec<Point>], samples: usize, seed: u64) -> PartitionReport {
    let mut failures = Vec::new();
    let frame = match BarycentricFrame::from_points(parent) {
        Ok(f) => f,
        Err(e) => {
            return PartitionReport {
                volume_ratio_sum: BigRational::zero(),
                samples: 0,
                uncovered: 0,
                interior_overlaps: 0,
                failures: vec![format!("parent: {e}")],
            }
        }
    };

    // |det| of the children's barycentric coordinate matrix is their volume
    // relative to the parent
    let mut volume_ratio_sum = BigRational::zero();
    for (k, child) in children.iter().enumerate() {
        let rows: Option<Vec<Vec<BigRational>>> = child.iter().map(|v| frame.locate_point(v)).collect();
        match rows {
            Some(rows) if rows.len() == parent.len() => volume_ratio_sum += determinant(rows).abs(),
            Some(_) => failures.push(format!("child {k}: wrong vertex count")),
            None => failures.push(format!("child {k}: vertex outside the parent's affine hull")),
        }
    }
    match volume_ratio_sum.cmp(&BigRational::one()) {
        std::cmp::Ordering::Less => {
            failures.push(format!("volume deficit: children cover {volume_ratio_sum} of the parent"))
        }
        std::cmp::Ordering::Greater => {
            failures.push(format!("volume excess: children cover {volume_ratio_sum} of the parent"))
        }
        std::cmp::Ordering::Equal => {}
    }

    let locators: Vec<Option<SimplexLocator>> = children.iter().map(|c| SimplexLocator::new(c).ok()).collect();
    for (k, l) in locators.iter().enumerate() {
        if l.is_none() {
            failures.push(format!("child {k}: degenerate"));
        }
    }
    let mut sampler = DyadicSampler::new(seed);
    let mut uncovered = 0;
    let mut interior_overlaps = 0;
    for _ in 0..samples {
        let p = sampler.interior_point(parent).to_rational();
        let statuses: Vec<MembershipStatus> =
            locators.iter().flatten().map(|l| l.classify_rational(&p).status).collect();
        let members = statuses.iter().filter(|s| s.is_member()).count();
        if members == 0 {
            uncovered += 1;
        } else if members > 1 && statuses.contains(&MembershipStatus::Interior) {
            interior_overlaps += 1;
        }
    }
    if uncovered > 0 {
        failures.push(format!("{uncovered} of {samples} samples lie in no child"));
    }
    if interior_overlaps > 0 {
        failures.push(format!("{interior_overlaps} of {samples} samples are interior to overlapping children"));
    }
    PartitionReport { volume_ratio_sum, samples, uncovered, interior_overlaps, failures }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingReport {
    pub conjugates: usize,
    /// Σ conjugate volume / parallelepiped volume, exact.
    pub volume_ratio_sum: BigRational,
    pub samples: usize,
    pub uncovered: usize,
    pub interior_overlaps: usize,
}

impl TilingReport {
    pub fn passed(&self) -> bool {
        self.volume_ratio_sum.is_one() && self.uncovered == 0 && self.interior_overlaps == 0
    }
}

/// Checks that the `r!` conjugates tile the parallelepiped spanned by `edges`.
pub fn tiling_check(base: &Point, edges: &[Point], samples: usize, seed: u64) -> Result<TilingReport> {
    let r = edges.len();
    let basis = EdgeBasis::new(base, edges)?;
    let fact: i64 = (1..=r as i64).product();
    let conjugates: Vec<Vec<Point>> =
        Permutation::all(r).iter().map(|pi| conjugate_vertices(base, edges, pi)).collect::<Result<_>>()?;

    // volume of a simplex relative to the parallelepiped is |det β| / r!
    let mut volume_ratio_sum = BigRational::zero();
    for conj in &conjugates {
        let rows: Vec<Vec<BigRational>> =
            conj[1..].iter().map(|v| basis.coefficients(&v.to_rational()).expect("vertex lies in the span")).collect();
        volume_ratio_sum += determinant(rows).abs() / BigRational::from_integer(fact.into());
    }

    let locators: Vec<SimplexLocator> = conjugates.iter().map(|c| SimplexLocator::new(c)).collect::<Result<_>>()?;
    let mut sampler = DyadicSampler::new(seed);
    let mut uncovered = 0;
    let mut interior_overlaps = 0;
    for _ in 0..samples {
        let alpha: Vec<Dyadic> = (0..r).map(|_| sampler.open_unit()).collect();
        let p = parallelepiped_point(base, edges, &alpha).to_rational();
        let statuses: Vec<MembershipStatus> = locators.iter().map(|l| l.classify_rational(&p).status).collect();
        let members = statuses.iter().filter(|s| s.is_member()).count();
        if members == 0 {
            uncovered += 1;
        } else if members > 1 && statuses.contains(&MembershipStatus::Interior) {
            interior_overlaps += 1;
        }
    }
    Ok(TilingReport { conjugates: conjugates.len(), volume_ratio_sum, samples, uncovered, interior_overlaps })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub samples: usize,
    pub members: usize,
    pub disagreements: usize,
}

/// Compares [`chain_membership`] with [`point_in_simplex`] on the conjugate
/// `T^π` for seeded points in and around the parallelepiped; half of the
/// points sit on a coarse grid so boundary cases are exercised.
pub fn membership_agreement(
    base: &Point,
    edges: &[Point],
    pi: &Permutation,
    samples: usize,
    seed: u64,
) -> Result<AgreementReport> {
    let basis = EdgeBasis::new(base, edges)?;
    let locator = SimplexLocator::new(&conjugate_vertices(base, edges, pi)?)?;
    let mut sampler = DyadicSampler::new(seed);
    let mut members = 0;
    let mut disagreements = 0;
    for n in 0..samples {
        let alpha: Vec<Dyadic> = (0..edges.len()).map(|_| sampler.around_unit(n % 2 == 0)).collect();
        let p = parallelepiped_point(base, edges, &alpha).to_rational();
        let by_chain = chain_test(&basis, pi, &p);
        let by_lambda = locator.classify_rational(&p).status.is_member();
        members += usize::from(by_lambda);
        disagreements += usize::from(by_chain != by_lambda);
    }
    Ok(AgreementReport { samples, members, disagreements })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub r: usize,
    pub keyed: usize,
    pub paths: usize,
    pub cliques: usize,
    pub violations: Vec<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares the keyed, path and clique descriptions of the children and
/// checks the adjacency relation against co-membership in a child.
pub fn enumeration_equivalence(r: usize) -> EquivalenceReport {
    assert!((1..=6).contains(&r), "enumeration equivalence is checked for 1 ≤ r ≤ 6");
    let keyed: BTreeSet<Vec<MidpointLabel>> = enumerate_children(r).iter().map(child_vertex_labels).collect();
    let paths: BTreeSet<Vec<MidpointLabel>> = path_children(r).into_iter().collect();
    let cliques: BTreeSet<Vec<MidpointLabel>> = clique_children(r).into_iter().collect();
    let mut violations = Vec::new();
    if keyed != paths {
        violations.push("keyed children differ from lattice paths".to_string());
    }
    if keyed != cliques {
        violations.push("keyed children differ from maximal cliques".to_string());
    }
    if keyed.len() != 1 << r {
        violations.push(format!("{} children, expected {}", keyed.len(), 1 << r));
    }
    let mut together = BTreeSet::new();
    for child in &keyed {
        for (x, a) in child.iter().enumerate() {
            for b in &child[x + 1..] {
                together.insert((*a, *b));
                together.insert((*b, *a));
            }
        }
    }
    for a in MidpointLabel::all(r) {
        for b in MidpointLabel::all(r) {
            if labels_adjacent(a, b) != together.contains(&(a, b)) {
                violations.push(format!("adjacency of {a} and {b} disagrees with the children"));
            }
        }
    }
    EquivalenceReport { r, keyed: keyed.len(), paths: paths.len(), cliques: cliques.len(), violations }
}
