//! Overpartition numbers, theta series and half-integral weight Hecke
//! operators on truncated q-series, with a verifier for congruences of
//! `p̄(n)` modulo small integers.
//!
//! Modules, bottom-up:
//!
//! * [`qseries`]: truncated power series over `Z` or `Z/mZ`.
//! * [`theta`]: `φ(±q)`, `ψ(q)` and the 2-dissection check.
//! * [`squares`]: `c_k(n)`, ordered representations by positive squares.
//! * [`overpartition`]: `p̄(n)` tables by four independent methods.
//! * [`hecke`]: Legendre/Jacobi symbols and `T_{k/2,N}(ℓ²)`.
//! * [`congruence`]: the family registry and sweep engine.
//! * [`cache`]: on-disk table cache.

pub mod arith;
pub mod cache;
pub mod congruence;
pub mod error;
pub mod hecke;
pub mod overpartition;
pub mod qseries;
pub mod squares;
pub mod theta;

pub use error::{Error, Result};
pub use overpartition::{overpartition_table, CoeffTable, Method};
pub use qseries::{CoefficientRing, Series};
pub use theta::{theta_series, ThetaKind};
