//! Rigorous brackets on the zero-error capacity of nearest-neighbor-error
//! channels.
//!
//! A `(d, n)` channel carries `d`-tuples of levels in `[0, n-1]` and may
//! shift one coordinate of a symbol by one level. This crate builds the
//! channel's confusion graph, constructs and verifies perfect Lee codes
//! whose windows yield guaranteed independent sets, solves the fractional
//! clique-cover LP in exact rational arithmetic, and assembles the results
//! into certified capacity brackets. A block codec demonstrates the lower
//! bound operationally over a seeded channel simulator.
//!
//! Everything on the certification path is integer or rational; floating
//! point appears only in display fields.

pub mod arith;
pub mod bitset;
pub mod bounds;
pub mod cli;
pub mod codec;
pub mod error;
pub mod graph;
pub mod lee;
pub mod solver;

pub use error::{Error, Result};
