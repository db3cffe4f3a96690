//! Quantum feedback network calculus for bidirectional transport networks.
//!
//! The crate covers two layers:
//!
//! * operator-level SLH models on truncated Hilbert spaces ([`opalg`], [`slh`]):
//!   parallel sum, series product, feedback reduction, the Redheffer star
//!   product for two-lead devices, Evans–Hudson generators and the Lindblad
//!   right-hand side;
//! * linear passive models `(S, C, Ω)` ([`linpass`]) and the chain-scattering
//!   machinery built on their transfer functions ([`chainscat`],
//!   [`termination`], [`delaynet`]).
//!
//! Everything is `no_std` with `alloc`; file formats and the command-line
//! driver live in the companion `slhnet` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod chainscat;
pub mod delaynet;
pub mod error;
pub mod linpass;
pub mod opalg;
pub mod slh;
pub mod termination;

pub use error::{Error, Result};
pub use opalg::{c64, CMatrix, C64, DEFAULT_TOL};
