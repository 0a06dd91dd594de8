//! Trace sets of products of matrix conjugacy classes over finite fields.
//!
//! Given two nonscalar similarity classes of `M(n, K)`, or two nonscalar
//! conjugacy classes of `SL(n, K)`, and a target `τ ∈ K`, [`witness::witness`]
//! builds an explicit pair `(W, Q)` in the two classes with `tr(WQ) = τ` and
//! checks it before returning. [`oracle`] computes the same sets by brute force.

pub mod field;
pub mod linalg;
pub mod poly;
pub mod classes;
pub mod witness;
pub mod oracle;
