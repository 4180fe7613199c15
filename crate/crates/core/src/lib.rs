//! Extremal ranks of `A + BXC` when the variable `X` has a prescribed rank.
//!
//! The crate evaluates the closed-form maximal and minimal ranks from the rank
//! profile `(r(A), r[A, B], r[A; C], r[[A, B], [C, 0]])`, builds the simultaneous
//! decomposition of `(A, B, C)`, constructs verified witness matrices attaining
//! both extremes, and checks every formula against exhaustive enumeration over
//! small prime fields.
//!
//! All arithmetic is exact: matrices live over ℚ or GF(p).

pub mod decomposition;
pub mod error;
pub mod field;
pub mod formulas;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod profile;
pub mod random;
pub mod text;
pub mod witness;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::Matrix;
pub use profile::{assemble, rank_profile, Assembled, Dims, RankProfile};
pub use text::{format_matrix, parse_matrix, AnyMatrix};
