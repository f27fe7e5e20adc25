//! Exact domino tiling counts for `2n x 2n` squares and the 2-adic study of
//! their odd square-root factor `f(n)`.
//!
//! Every count of a `2n x 2n` square has the shape `2^n * f(n)^2` with `f(n)`
//! odd. The crate computes `f(n)` three independent ways:
//!
//! * [`grid_count`]: broken-profile dynamic programming over the board,
//! * [`cyclotomic`]: the cosine product evaluated exactly in `Z[z]/Phi_{2n+1}`,
//! * [`series`]: `f(n) mod 2^K` from power sums of reciprocals, via Newton's
//!   identities and a 2-adic square root ([`padics`]).
//!
//! [`quasipoly`] fits the power sums as quasi-polynomials in `n`, which
//! extends `f mod 2^K` to negative and very large arguments and lets the
//! functional equation `f(-1-n) = +-f(n)` be checked directly.

pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod grid_count;
pub mod padics;
pub mod poly;
pub mod quasipoly;
pub mod series;

pub use error::{Error, Result};
