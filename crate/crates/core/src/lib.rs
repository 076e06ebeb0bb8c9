//! Dynamics of the Hurwitz equation `Σ x_k² − ∏ x_k = μ` on the Cayley tree of
//! the free product of `n` copies of `Z/2`.
//!
//! The crate is organised bottom-up:
//!
//! - [`tree`]: vertex and geodesic addresses, the Fibonacci function,
//!   multiplicities, Sierpinski vectors and circular sets.
//! - [`group`]: the extended group `Γ_n ⋊ (Υ_n ⋊ S_n)` in normal form.
//! - [`hurwitz`]: the map `Φ` from vertices to solutions, geodesic weights,
//!   growth classes, orbit listings and positive integer solutions.
//! - [`bowditch`]: edge directions, sink descent, the finite set `A_φ(K)`,
//!   attracting trees and the membership test for the Bowditch domain.
//! - [`identity`]: edge weights, the finite-tree identity and the truncated
//!   McShane-type series.
//! - [`slice`]: rasterising the diagonal slice `(z, …, z)`.
//!
//! Most workflows are shown as runnable programs:
//!
//! ```text
//! cargo run --example orbit
//! cargo run --example markoff
//! cargo run --example group_action
//! cargo run --example membership
//! cargo run --example identity
//! cargo run --example fibonacci
//! cargo run --release --example diagonal_slice
//! ```
//!
//! The `hurwitz` binary wraps the same calls behind subcommands.

// `!(x <= y)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bowditch;
pub mod group;
pub mod hurwitz;
pub mod identity;
pub mod slice;
pub mod sum;
pub mod tree;

mod cplx;

pub use num_complex::Complex64 as C64;
pub use cplx::{parse_complex, ComplexPair};
