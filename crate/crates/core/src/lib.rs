//! A Reed-Muller code laboratory over F₂.
//!
//! The crate provides RM(m, r) codes and their polynomial representation,
//! discrete derivatives and the majority-of-derivatives approximators, exact
//! and Monte Carlo weight-distribution oracles together with evaluators for
//! the weight-distribution bounds, and erasure/error channel simulation with
//! exhaustive decoders.
//!
//! Point and monomial encoding is little-endian throughout: bit `i−1` of an
//! index stands for variable `xᵢ`.

pub mod bits;
pub mod channels;
pub mod combinatorics;
pub mod derivatives;
pub mod error;
pub mod gf2;
pub mod gf2poly;
pub mod rmcode;
pub mod seed;
pub mod weightdist;

pub use bits::BitVec;
pub use error::{Error, Result};
pub use gf2poly::{anf_to_eval, eval_to_anf, EvalVec, PolyAnf};
pub use rmcode::CodeParams;
