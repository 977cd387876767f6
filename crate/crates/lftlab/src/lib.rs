//! Discrete Legendre-Fenchel transforms with exact arithmetic.
//!
//! * [`lft`], [`witness`]: one-dimensional transforms and the diagnostics that
//!   govern post-selection success.
//! * [`multi`]: d-dimensional transforms by nested one-dimensional passes.
//! * [`qsim`]: register-level simulation of the quantum transform algorithms.
//! * [`hardness`]: hidden-string instances and the rescaling invariance of `W`.
//! * [`io`], [`cli`]: instance/result documents and the command-line surface.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod function;
pub mod grid;
pub mod hardness;
pub mod io;
pub mod lft;
pub mod multi;
pub mod qsim;
pub mod scalar;
pub mod witness;

pub use error::{LftError, Result};
pub use function::{discrete_gradients, nontrivial_dual_range, FunctionSpec, GradientVector};
pub use grid::{regular_dual_grid, DualGrid, RegularGrid};
pub use lft::{lft_adaptive, lft_brute, lft_regular, optimizer_map, AdaptiveVariant, ConjugateResult};
pub use scalar::{int, rat, Rational, Scalar};
pub use witness::{convergence_gap, dual_index_j, membership_a, witness_params, WitnessReport};
