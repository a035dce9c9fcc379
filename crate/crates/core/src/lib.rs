//! Finite-alphabet f-divergences and the inequalities built on them: strong
//! data-processing gap and ratio bounds, the `f_α` family, maxima over
//! ratio-constrained simplices, list-decoding error bounds and Tunstall-tree
//! guarantees. All quantities are in nats unless stated otherwise.

// `!(x > 0.0)` style guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod divergence;
pub mod error;
pub mod ext;
pub mod f_alpha;
pub mod generator;
pub mod io;
pub mod list_decoding;
pub mod majorization;
pub mod numerics;
pub mod pmf;
pub mod random;
pub mod reports;
pub mod sdpi;
pub mod tunstall;

pub use error::{Error, Result};
pub use ext::{ExtendedReal, Limit};
pub use generator::{DivergenceKind, Generator};
pub use pmf::{JointPMF, ProbVec};
