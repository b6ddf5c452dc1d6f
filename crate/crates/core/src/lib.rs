//! Fomin–Zelevinsky style mutation for noncrystallographic root systems.
//!
//! * [`rank2`]: the exchange sequence `x_{i-1} x_{i+1} = x_i^w + 1` with
//!   alternating weights, its even subsequence, and the periodic
//!   approximation `Y_i` driven by the sequence `g_i`.
//! * [`mutation`]: real-entry skew-symmetrizable matrix mutation, canonical
//!   forms under simultaneous permutation and BFS enumeration of mutation
//!   classes (H3, H4, rank 2).
//! * [`scalars`]: exact arithmetic in ℤ[a], `a = (3+√5)/2`, plus doubles.
//! * [`verify`]: the end-to-end checks shared by the acceptance tests and the
//!   `verify` CLI command.

pub mod error;
pub mod mutation;
pub mod rank2;
pub mod scalars;
pub mod verify;

pub use error::{Error, Result};
pub use scalars::{GoldenInt, GoldenRational, Mode, Scalar, Sign};
