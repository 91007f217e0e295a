//! Thermal Casimir free energy between two identical metal half-spaces.
//!
//! The crate evaluates the Lifshitz free energy as a Matsubara sum over
//! imaginary frequencies, its zero-temperature limit as a double integral,
//! and the cancellation-safe thermal correction `ΔF(T) = F(T) − F(0)`.
//! Alongside the numerics sit the analytic low-temperature expansions of
//! the TE contribution for Drude metals (the `T²` and `T^{5/2}` terms) and
//! the comparison machinery that checks the entropy vanishes at `T = 0`.
//!
//! Everything here is `no_std` with `alloc`. File formats, the command line
//! and thread pools live in the companion `casimir` crate, which plugs a
//! parallel [`exec::Executor`] into the summation drivers.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod asymptotics;
pub mod dispersion;
pub mod error;
pub mod exec;
pub mod lifshitz;
pub mod numeric;
pub mod reflection;
pub mod units;

pub use error::{Error, Result};
