//! Combinatorics of conjugate simplices and their half-scale children.
//!
//! A simplex `T = (e_0, …, e_r)` is described by its base `x_0 = e_0` and the
//! edge vectors `x_i = e_i - e_{i-1}`. Summing the edge vectors in the order
//! given by a permutation `π` yields the conjugate simplex `T^π`; the `r!`
//! conjugates tile the parallelepiped spanned by the edges.
//!
//! Halving every edge of the parallelepiped gives `2^r` cells indexed by a
//! sign vector `σ`. The conjugate `(T_σ)^π` of such a cell lies inside the
//! full-size conjugate `T^{π^σ}`, and the children of `T` itself are the
//! pairs `(σ, π)` with `π^σ = id`.
//!
//! Vertex ordinals run `0..=r`, permutation entries and edge indices `1..=r`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{gram_det, Point};
use crate::error::{Error, Result};

/// A bijection on `{1, …, r}` written as the sequence `p_1 … p_r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(seq: Vec<usize>) -> Result<Self> {
        let r = seq.len();
        let mut seen = vec![false; r + 1];
        for &p in &seq {
            if p == 0 || p > r || seen[p] {
                return Err(Error::InvalidPermutation(seq));
            }
            seen[p] = true;
        }
        Ok(Self(seq))
    }

    pub fn identity(r: usize) -> Self {
        Self((1..=r).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &p)| p == k + 1)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `p_ν` for `ν` in `1..=r`.
    pub fn at(&self, nu: usize) -> usize {
        self.0[nu - 1]
    }

    /// All `r!` permutations in lexicographic order.
    pub fn all(r: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(r);
        let mut used = vec![false; r + 1];
        fn rec(r: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == r {
                out.push(Permutation(current.clone()));
                return;
            }
            for p in 1..=r {
                if !used[p] {
                    used[p] = true;
                    current.push(p);
                    rec(r, current, used, out);
                    current.pop();
                    used[p] = false;
                }
            }
        }
        rec(r, &mut current, &mut used, &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(seq: Vec<usize>) -> Result<Self> {
        Self::new(seq)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A 0/1 vector `(s_1, …, s_r)` selecting one half-scale parallelepiped.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct SignVector(Vec<u8>);

impl SignVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidSignVector(bits));
        }
        Ok(Self(bits))
    }

    pub fn zeros(r: usize) -> Self {
        Self(vec![0; r])
    }

    pub fn ones(r: usize) -> Self {
        Self(vec![1; r])
    }

    /// The sign vector whose bit `a` is bit `a - 1` of `mask`.
    pub fn from_mask(r: usize, mask: u64) -> Self {
        Self((0..r).map(|a| ((mask >> a) & 1) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `s_a` for `a` in `1..=r`.
    pub fn bit(&self, a: usize) -> u8 {
        self.0[a - 1]
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Number of ones.
    pub fn u(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

impl TryFrom<Vec<u8>> for SignVector {
    type Error = Error;
    fn try_from(bits: Vec<u8>) -> Result<Self> {
        Self::new(bits)
    }
}

impl From<SignVector> for Vec<u8> {
    fn from(s: SignVector) -> Self {
        s.0
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Identifies the child `(T_σ)^π`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ChildKey {
    pub sigma: SignVector,
    pub pi: Permutation,
}

impl ChildKey {
    pub fn new(sigma: SignVector, pi: Permutation) -> Result<Self> {
        if sigma.len() != pi.len() {
            return Err(Error::InvalidKey(format!(
                "sign vector has length {} but permutation has length {}",
                sigma.len(),
                pi.len()
            )));
        }
        Ok(Self { sigma, pi })
    }

    pub fn r(&self) -> usize {
        self.pi.len()
    }

    pub fn u(&self) -> usize {
        self.sigma.u()
    }

    /// The bits `s_{p_1}, …, s_{p_r}` met along the child's edge path.
    pub fn path_word(&self) -> Vec<u8> {
        self.pi.as_slice().iter().map(|&p| self.sigma.bit(p)).collect()
    }

    /// The path word read as a binary number, `s_{p_1}` least significant.
    pub fn ordinal(&self) -> u64 {
        self.path_word().iter().rev().fold(0, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// The conjugate frame `π^σ` the child lives in.
    pub fn frame(&self) -> Permutation {
        sigma_refine(&self.pi, &self.sigma)
    }
}

impl fmt::Display for ChildKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ={} π={}", self.sigma, self.pi)
    }
}

/// Names the point `½(e_i + e_j)`; `(i, i)` is the vertex `e_i` itself.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct MidpointLabel {
    pub i: usize,
    pub j: usize,
}

impl MidpointLabel {
    /// Canonicalizes the pair so that `i <= j`.
    pub fn new(a: usize, b: usize) -> Self {
        Self { i: a.min(b), j: a.max(b) }
    }

    pub fn is_vertex(&self) -> bool {
        self.i == self.j
    }

    pub fn weight(&self) -> usize {
        self.i + self.j
    }

    /// Every label with `i <= j <= r`, in lexicographic order.
    pub fn all(r: usize) -> Vec<MidpointLabel> {
        (0..=r).flat_map(|i| (i..=r).map(move |j| MidpointLabel { i, j })).collect()
    }
}

impl fmt::Display for MidpointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i, self.j)
    }
}

fn check_frame(base: &Point, edges: &[Point], r: usize) -> Result<()> {
    if edges.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: edges.len() });
    }
    if let Some(e) = edges.iter().find(|e| e.dim() != base.dim()) {
        return Err(Error::DimensionMismatch { expected: base.dim(), found: e.dim() });
    }
    if gram_det(edges)?.is_zero() {
        return Err(Error::Degenerate);
    }
    Ok(())
}

/// Vertices of `T^π`: `e_i = x_0 + Σ_{ν ≤ i} x_{p_ν}`.
pub fn conjugate_vertices(base: &Point, edges: &[Point], pi: &Permutation) -> Result<Vec<Point>> {
    check_frame(base, edges, pi.len())?;
    let mut out = Vec::with_capacity(edges.len() + 1);
    out.push(base.clone());
    let mut current = base.clone();
    for &p in pi.as_slice() {
        current = current.add(&edges[p - 1]);
        out.push(current.clone());
    }
    Ok(out)
}

/// Base vertex and edge vectors `x_1 … x_r` of an ordered simplex.
pub fn edge_frame(vertices: &[Point]) -> (Point, Vec<Point>) {
    let edges = vertices.windows(2).map(|w| w[1].sub(&w[0])).collect();
    (vertices[0].clone(), edges)
}

/// Vertices of `(T_σ)^π` built directly from the halved parallelepiped:
/// base `x_0 + ½ Σ s_ν x_ν`, then half-steps along `x_{p_1}, x_{p_2}, …`.
pub fn constructive_child(base: &Point, edges: &[Point], key: &ChildKey) -> Result<Vec<Point>> {
    check_frame(base, edges, key.r())?;
    let mut start = base.clone();
    for (a, x) in edges.iter().enumerate() {
        if key.sigma.bit(a + 1) == 1 {
            start = start.add(&x.halve());
        }
    }
    let mut out = Vec::with_capacity(edges.len() + 1);
    out.push(start.clone());
    for &p in key.pi.as_slice() {
        start = start.add(&edges[p - 1].halve());
        out.push(start.clone());
    }
    Ok(out)
}

/// `π^σ`: the entries of `π` with `s = 1` (in `π` order) followed by those
/// with `s = 0` (in `π` order).
pub fn sigma_refine(pi: &Permutation, sigma: &SignVector) -> Permutation {
    assert_eq!(pi.len(), sigma.len(), "permutation and sign vector lengths differ");
    let ones = pi.as_slice().iter().copied().filter(|&a| sigma.bit(a) == 1);
    let zeros = pi.as_slice().iter().copied().filter(|&a| sigma.bit(a) == 0);
    Permutation(ones.chain(zeros).collect())
}

/// Labels of the child's vertices in the frame of `π^σ`. Vertex `k` is
/// `(k', u + k'')` where `k'` and `k''` count the ones and zeros among
/// `s_{p_1}, …, s_{p_k}`.
pub fn child_vertex_labels(key: &ChildKey) -> Vec<MidpointLabel> {
    let u = key.u();
    let mut ones = 0;
    let mut zeros = 0;
    let mut labels = Vec::with_capacity(key.r() + 1);
    labels.push(MidpointLabel { i: 0, j: u });
    for bit in key.path_word() {
        if bit == 1 {
            ones += 1;
        } else {
            zeros += 1;
        }
        labels.push(MidpointLabel { i: ones, j: u + zeros });
    }
    labels
}

/// The `2^r` keys `(σ, π)` with `π^σ = id`, ordered by their path word read
/// as a binary number with `s_{p_1}` least significant.
///
/// Such a key has `σ = (1, …, 1, 0, …, 0)` with `u` ones, and `π` is a shuffle
/// of `1 … u` with `u+1 … r`; the path word records the shuffle.
pub fn enumerate_children(r: usize) -> Vec<ChildKey> {
    assert!(r >= 1, "dimension must be at least 1");
    assert!(r < 64, "dimension too large to enumerate");
    (0..1u64 << r)
        .map(|word| {
            let u = word.count_ones() as usize;
            let sigma = SignVector((0..r).map(|a| u8::from(a < u)).collect());
            let mut next_one = 1;
            let mut next_zero = u + 1;
            let pi = (0..r)
                .map(|nu| {
                    if (word >> nu) & 1 == 1 {
                        next_one += 1;
                        next_one - 1
                    } else {
                        next_zero += 1;
                        next_zero - 1
                    }
                })
                .collect();
            ChildKey { sigma, pi: Permutation(pi) }
        })
        .collect()
}
