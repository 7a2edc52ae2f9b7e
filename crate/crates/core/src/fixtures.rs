//! Small complexes used by the CLI `demo` command, tests and the web demo.

use crate::arithmetic::Point;
use crate::complex::{build_complex, Complex};
use crate::kernel::{conjugate_vertices, Permutation};

/// The path simplex `0, e_1, e_1 + e_2, …, e_1 + … + e_r` (for `r = 2` the
/// right triangle `(0,0), (1,0), (1,1)`).
pub fn kuhn_simplex_points(r: usize) -> Vec<Point> {
    (0..=r).map(|k| Point::from_ints(&(0..r).map(|c| i64::from(c < k)).collect::<Vec<_>>())).collect()
}

/// The corner simplex `0, e_1, …, e_r`.
pub fn corner_simplex_points(r: usize) -> Vec<Point> {
    (0..=r).map(|k| Point::from_ints(&(0..r).map(|c| i64::from(c + 1 == k)).collect::<Vec<_>>())).collect()
}

pub fn kuhn_simplex(r: usize) -> Complex {
    build_complex(kuhn_simplex_points(r), vec![(0..=r).collect()]).expect("kuhn simplex is valid")
}

pub fn corner_simplex(r: usize) -> Complex {
    build_complex(corner_simplex_points(r), vec![(0..=r).collect()]).expect("corner simplex is valid")
}

/// The unit cube `[0,1]^r` split into its `r!` Kuhn simplices.
pub fn unit_cube(r: usize) -> Complex {
    let points: Vec<Point> = (0..1u64 << r)
        .map(|mask| Point::from_ints(&(0..r).map(|c| ((mask >> c) & 1) as i64).collect::<Vec<_>>()))
        .collect();
    let edges: Vec<Point> =
        (0..r).map(|a| Point::from_ints(&(0..r).map(|c| i64::from(c == a)).collect::<Vec<_>>())).collect();
    let base = Point::origin(r);
    let cells = Permutation::all(r)
        .iter()
        .map(|pi| {
            conjugate_vertices(&base, &edges, pi)
                .expect("unit edges are independent")
                .iter()
                .map(|v| points.iter().position(|p| p == v).expect("cube corner"))
                .collect()
        })
        .collect();
    build_complex(points, cells).expect("cube triangulation is valid")
}

/// The unit square as two triangles sharing the diagonal `(0,0)–(1,1)`.
pub fn square() -> Complex {
    let points = vec![
        Point::from_ints(&[0, 0]),
        Point::from_ints(&[1, 0]),
        Point::from_ints(&[0, 1]),
        Point::from_ints(&[1, 1]),
    ];
    build_complex(points, vec![vec![0, 1, 3], vec![0, 2, 3]]).expect("square is valid")
}

/// Two tetrahedra glued along the triangle `{0, 1, 2}`.
pub fn two_tetrahedra() -> Complex {
    let points = vec![
        Point::from_ints(&[0, 0, 0]),
        Point::from_ints(&[1, 0, 0]),
        Point::from_ints(&[0, 1, 0]),
        Point::from_ints(&[0, 0, 1]),
        Point::from_ints(&[1, 1, -1]),
    ];
    build_complex(points, vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4]]).expect("two tetrahedra are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        assert_eq!(
            kuhn_simplex(2).vertices(),
            &[Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0]), Point::from_ints(&[1, 1])]
        );
        for r in 1..=4 {
            assert_eq!(unit_cube(r).num_cells(), (1..=r).product::<usize>());
            assert_eq!(corner_simplex(r).num_cells(), 1);
        }
        assert_eq!(square().num_cells(), 2);
        assert_eq!(two_tetrahedra().num_cells(), 2);
    }
}
