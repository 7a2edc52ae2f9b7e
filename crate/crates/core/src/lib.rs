//! Exact Freudenthal subdivision of simplices and simplicial complexes.
//!
//! Every `r`-simplex splits into `2^r` children, each a half-scale copy of
//! one of the simplex's conjugates. Iterating therefore never produces
//! flatter simplices than the conjugates of the input, which this crate
//! checks with exact dyadic and rational arithmetic.
//!
//! * [`arithmetic`]: dyadic scalars, points, Gram determinants, barycentric solves
//! * [`kernel`]: permutations, sign vectors, conjugates and child labels
//! * [`subdivision`]: children of one simplex, three ways, plus barycentric subdivision
//! * [`complex`]: complexes with a global vertex order, subdivided repeatedly
//! * [`quality`]: flatness `c^r/v` and similarity signatures
//! * [`oracle`]: brute-force membership, partition and tiling checks
//! * [`io`]: OFF, legacy VTK and JSON mesh files
//! * [`cli`]: the `freudenthal` command line
//!
//! ```
//! use freudenthal::{fixtures, iterate_subdivision, quality::quality_report};
//!
//! let complex = iterate_subdivision(&fixtures::kuhn_simplex(3), 2)?;
//! let report = quality_report(&complex)?;
//! assert_eq!(complex.num_cells(), 64);
//! assert_eq!(report.census.len(), 1);
//! # Ok::<(), freudenthal::Error>(())
//! ```

pub mod arithmetic;
pub mod cli;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod kernel;
mod lp;
pub mod oracle;
pub mod quality;
pub mod subdivision;

pub use arithmetic::{Dyadic, Point, RationalSq};
pub use complex::{build_complex, iterate_subdivision, subdivide_complex, validate_complex, Complex};
pub use error::{Error, Result};
pub use kernel::{ChildKey, MidpointLabel, Permutation, SignVector};
pub use subdivision::{subdivide_simplex, Simplex, SubdivisionResult};
