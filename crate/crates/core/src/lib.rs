//! Exact computations for the genus-1 Gromov-Witten theory of `Hilb^n(C^2)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`kernel`]: exact rationals, polynomials, rational functions and series.
//! * [`combinatorics`]: partitions, divisor sums, Bernoulli numbers, Eisenstein series.
//! * [`qmodular`]: cotangent expansions under `-q = e^{iu}` and the series `B(u, Q)`.
//! * [`hilb`]: the Nakajima-basis operator `M_D` and its traces.
//! * [`genus1`]: the genus-1 series, Hodge integrals and tabulated one-point series.
//! * [`spectrum`]: eigenvalue lifting, Wronskian certificates and idempotent norms.
//! * [`symfun`]: symmetric differential polynomials in abstract roots.
//! * [`cli`]: the `hilbgw` command-line front end.

pub mod combinatorics;
pub mod genus1;
pub mod hilb;
pub mod kernel;
pub mod qmodular;
pub mod spectrum;
pub mod symfun;
pub mod cli;

pub use kernel::{rat, Rat};
