//! Exact algebra in the matrix rings `M_n(K)` over a prime field or the
//! rationals, viewed as rank-metric regular rings.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`], [`poly`], [`matrix`]: exact scalars, polynomials with
//!   factorization over `F_p`, dense matrices with rank, kernels, the
//!   quasi-inverse and the minimal polynomial.
//! * [`lattice`]: principal right and left ideals as canonical subspaces,
//!   idempotent generators, annihilators, complements and independence.
//! * [`conjugacy`]: conjugators for idempotents, square-zero elements and
//!   involutions, involution splittings and the Boolean embedding.
//! * [`matricial`]: matrix-unit families, independence under an element,
//!   decomposition of an element into full matrix blocks, blow-up, merging,
//!   the doubling tower and determinant-one approximation.
//! * [`width`]: corner subgroups, support shrinking and self-certifying
//!   factorizations into involutions, commutators and truncated
//!   locally-special products.
//! * [`io`]: the JSON file formats.

pub mod conjugacy;
pub mod error;
pub mod field;
pub mod io;
pub mod lattice;
pub mod matricial;
pub mod matrix;
pub mod poly;
pub mod rng;
pub mod width;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use lattice::{Idempotent, LeftIdeal, RightIdeal};
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use rng::RandomSource;
