//! Dense two-phase simplex method over the rationals, Bland's rule.
//! Small problems only (a few dozen variables).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(BigRational),
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    fn objective(&self, cost: &[BigRational]) -> BigRational {
        self.basis.iter().zip(&self.rows).fold(BigRational::zero(), |acc, (&b, row)| acc + &cost[b] * &row[self.rhs])
    }

    /// Maximizes `cost · x` over columns for which `allowed` holds.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.rhs).filter(|&j| allowed(j)).find(|&j| {
                let reduced =
                    self.basis.iter().zip(&self.rows).fold(cost[j].clone(), |acc, (&b, row)| acc - &cost[b] * &row[j]);
                reduced.is_positive()
            });
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, BigRational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((row, _)) = best else { return false };
            self.pivot(row, col);
        }
    }
}

/// Maximizes `c · x` subject to `A x = b`, `x ≥ 0`.
pub(crate) fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let rhs = n + m;
    let rows: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let flip = bi.is_negative();
            let mut out: Vec<BigRational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
            out.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            out.push(if flip { -bi } else { bi.clone() });
            out
        })
        .collect();
    let mut tab = Tableau { rows, basis: (n..n + m).collect(), rhs };

    let phase1: Vec<BigRational> =
        (0..rhs).map(|j| if j >= n { -BigRational::one() } else { BigRational::zero() }).collect();
    tab.optimize(&phase1, |_| true);
    if tab.objective(&phase1).is_negative() {
        return LpOutcome::Infeasible;
    }
    // drive zero-valued artificials out of the basis where possible
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, col);
            }
        }
    }
    let mut cost: Vec<BigRational> = c.to_vec();
    cost.extend((0..m).map(|_| BigRational::zero()));
    if !tab.optimize(&cost, |j| j < n) {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal(tab.objective(&cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_programs() {
        // max x + y, x + y + s = 4, x + 3y + t = 6
        let a = vec![vec![q(1), q(1), q(1), q(0)], vec![q(1), q(3), q(0), q(1)]];
        let out = maximize(&a, &[q(4), q(6)], &[q(1), q(1), q(0), q(0)]);
        assert_eq!(out, LpOutcome::Optimal(q(4)));

        // max 2x + y with x + y = 1
        let out = maximize(&[vec![q(1), q(1)]], &[q(1)], &[q(2), q(1)]);
        assert_eq!(out, LpOutcome::Optimal(q(2)));

        // x - y = -1 with y ≤ 0 impossible: x - y = -1, y + s = 0
        let a = vec![vec![q(1), q(-1), q(0)], vec![q(0), q(1), q(1)]];
        assert_eq!(maximize(&a, &[q(-1), q(0)], &[q(0), q(0), q(0)]), LpOutcome::Infeasible);

        // unbounded: max x with x - y = 0
        assert_eq!(maximize(&[vec![q(1), q(-1)]], &[q(0)], &[q(1), q(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        let out = maximize(&a, &[q(1), q(2)], &[q(0), q(3)]);
        assert_eq!(out, LpOutcome::Optimal(q(3)));
    }
}
