//! Oriented colourings of random digraphs.
//!
//! The crate is `no_std` with `alloc`. Floating-point transcendental functions
//! go through [`libm`] so results do not depend on the platform libm.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod birkhoff;
pub mod bounds;
pub mod colouring;
pub mod graph;
pub mod linalg;
pub mod moments;
pub mod product;
pub mod randmodels;
pub mod rng;
pub mod tournament;

mod math;

pub use graph::{Digraph, Obstruction, OrientedMultigraph};
pub use product::ProductGraph;
pub use tournament::Tournament;
