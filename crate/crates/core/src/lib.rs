//! Microwave resonator coupling analysis.
//!
//! This crate models how lumped and distributed microwave resonators couple
//! to transmission lines and to each other. It provides:
//!
//! - a travelling-mode description of an LC resonator and its exact and
//!   rotating-wave equations of motion ([`resonator`]),
//! - input-output (Langevin) dynamics for resonators loaded by one or many
//!   semi-infinite lines, including reduced scattering through an arbitrary
//!   linear junction network ([`langevin`]),
//! - exact and rotating-wave dynamics of two reactively coupled lumped
//!   resonators ([`coupled_pair`]),
//! - even/odd-mode analysis of uniformly coupled transmission lines and the
//!   closed-form backward-coupler response ([`coupled_lines`]),
//! - external-coupling formulas for distributed (quarter/half-wave)
//!   resonators measured through couplers ([`distributed`]),
//! - a nodal-admittance network solver with S-parameter sweeps, complex-mode
//!   search, and time-domain-equivalent ringdown extraction ([`netlist`],
//!   [`solver`]),
//! - resonance-feature extraction from swept traces ([`extract`]),
//! - CSV output helpers ([`csvout`]) used by the `resonet` command-line
//!   front end (this crate's bin target).

// `!(v > 0.0)` rejects NaN along with non-positive values; the positive
// comparison clippy suggests would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Matrix stamping and modal mixing index several arrays by row/column at
// once; explicit indices read better than zipped iterators there.
#![allow(clippy::needless_range_loop)]

pub mod coupled_lines;
pub mod coupled_pair;
pub mod csvout;
pub mod distributed;
pub mod error;
pub mod extract;
pub mod langevin;
pub mod netlist;
pub mod numerics;
pub mod resonator;
pub mod solver;

pub use error::{Error, ErrorClass, Result};
pub use numerics::{AxisUnit, ComplexMatrix, ComplexTrace, C64};
