//! Physarum-inspired oscillatory simulator implementing a quantitative
//! single-bit full adder.
//!
//! Binary adder inputs are encoded as their '1'-bit count, which selects
//! how far a lattice arena is geometrically constrained. A population of
//! simple chemotactic particles self-organises inside the arena into a
//! reciprocating oscillation whose dominant frequency rises as the arena
//! shrinks; thresholding that frequency recovers the adder's output bin
//! and hence (Sum, Carry). The crate also ships the pure-logic adder and
//! ripple cascade, the spectral tooling, and the regression pipeline for
//! externally recorded voltage traces.

pub mod adder;
pub mod analysis;
pub mod config;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod particle;
pub mod plot;
pub mod spectral;

pub use error::{Error, Result};
