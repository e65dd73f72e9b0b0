//! Verification engine for identities linking Mahler measures, WZ pairs,
//! Bloch–Wigner and elliptic dilogarithms, theta functions and elliptic curves.
//!
//! The crate is split along the lines of the work it does:
//!
//! - [`numkernel`]: precision contexts, high-precision real/complex values and
//!   the special functions (Gamma, Li₂, D, ζ, AGM) everything else builds on.
//! - [`symbolic`]: exact bivariate rational functions, hypergeometric terms in
//!   Gamma-product form and WZ-certificate verification.
//! - [`modular`]: theta functions, the cubic eta quotient `x(q)`, q-inversion
//!   and the J/β relations.
//! - [`elliptic`]: exact group law on `y² = 4x³ − g₂x − g₃`, periods, ℘ and
//!   elliptic dilogarithms.
//! - [`mahler`]: series and quadrature evaluators for `m(α)` and `n(α)`.
//! - [`registry`]: the identity registry, the runner and report formats.

pub mod elliptic;
pub mod error;
pub mod mahler;
pub mod modular;
pub mod numkernel;
pub mod registry;
pub mod symbolic;

pub use error::{Error, Result};
pub use numkernel::{ComplexHp, PrecisionCtx, Rational, RealHp};
