//! Blocking sets of points and hyperplanes in finite projective spaces.
//!
//! The crate is layered bottom-up:
//!
//! - [`gf`]: table-driven GF(p^e) arithmetic.
//! - [`geometry`]: canonical points and subspaces of PG(n, q), span, meet,
//!   duality, enumeration and projection.
//! - [`counting`]: exact Gaussian coefficients and the bound formulas.
//! - [`blocking`]: the blocking-set model, verification and the computable
//!   structural checks for the middle case `n = 2k + 1`.
//! - [`constructions`]: generators and recognizers for the extremal examples.
//! - [`search`]: exhaustive and branch-and-bound search for all minimum
//!   blocking sets, and classification against the main size bound.
//! - [`json`]: the JSON interchange format used by the command-line tool.

pub mod bitset;
pub mod blocking;
pub mod constructions;
pub mod counting;
pub mod geometry;
pub mod gf;
pub mod json;
pub mod search;

pub use blocking::{BlockingSet, Incidence};
pub use counting::{main_theorem_bound, TheoremBound};
pub use geometry::{GeometryContext, Point, Subspace};
pub use gf::{Fe, FieldSpec};
