//! Exact arithmetic for ideal class monoids of split integer orders.
//!
//! For strictly increasing integers `a_1 < a_2 < ... < a_n` the ring
//! `R = Z[x]/((x-a_1)...(x-a_n))` is an order in a product of `n` copies
//! of `Q`. This crate computes the ideal class monoid `ICM(R)` and the
//! ideal class group `Cl(R)` of such rings by several independent routes
//! and cross-checks them against each other:
//!
//! * closed counting formulas in the root differences,
//! * canonical forms of integer matrices under `GL_n(Z)`-conjugacy
//!   (the Latimer--MacDuffee correspondence) with Burnside orbit counts,
//! * exact fractional-ideal lattice arithmetic (Hermite normal form,
//!   ideal products, colon ideals, invertibility).
//!
//! Everything is integer-exact: arbitrary-precision arithmetic throughout,
//! no floating point outside of presentation-only decimal rendering.
//!
//! The `classmonoid` binary exposes each capability as a subcommand; the
//! `examples/` directory shows the library API for every major feature.

pub mod abelian;
pub mod arith;
pub mod budget;
pub mod classgroup;
pub mod error;
pub mod hnf;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod omega;
pub mod quadratic;
pub mod roots;
pub mod snf;
pub mod sweep;

pub use budget::Budget;
pub use error::Error;
pub use roots::RootConfig;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
