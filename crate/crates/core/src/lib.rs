#![allow(clippy::needless_range_loop, clippy::type_complexity)]

//! Oriented cohomology of complete flag varieties and split groups.
//!
//! Classes are stored through their restrictions to torus-fixed points: a
//! class on `G/B` is a tuple of truncated power series indexed by the Weyl
//! group. Everything else (push-pull operators, Bott–Samelson classes,
//! structure constants, topological filtrations, the ring of the group
//! itself) is built on that representation.

pub mod acceptance;
pub mod artifact;
pub mod chevalley;
pub mod coeff;
pub mod correspondence;
pub mod decimal;
pub mod error;
pub mod expr;
pub mod fgl;
pub mod filtration;
pub mod group;
pub mod lattice;
pub mod lazard;
pub mod par;
pub mod roots;
pub mod schubert;
pub mod series;

pub use error::{Error, Result};
