//! Desk-scale algorithmic information theory.
//!
//! Everything here is measured relative to three fixed, total prefix
//! machines (see [`machines`]). Because the machines always halt, exhaustive
//! enumeration of programs up to a length bound is a decision procedure:
//! complexities reported as exact really are exact for that machine.
//!
//! * [`machines`]: bit-exact interpreters for machines A, B and Acond.
//! * [`complexity`]: program enumeration, K, universal probability, Kraft
//!   sums, conditional complexity and information.
//! * [`shannon`]: entropy and Shannon-Fano codes over finite distributions.
//! * [`structure`]: structure functions and sufficient statistics over
//!   finite-set models of `{0,1}^n`.
//! * [`estimator`]: a bit-exact LZ78 coder used as a computable upper bound
//!   for long inputs.

pub mod bits;
pub mod complexity;
pub mod corpus;
pub mod dyadic;
pub mod error;
pub mod estimator;
pub mod machines;
pub mod rng;
pub mod shannon;
pub mod structure;

pub use bits::BitString;
pub use dyadic::Dyadic;
pub use error::{Error, ErrorKind, Result};
pub use machines::{ExecutionOutcome, Instruction, MachineId, StepLimits};
