//! Exact differential calculus for Cartesian differential categories.
//!
//! Two models are provided: polynomial maps over a commutative semiring
//! ([`PolyModel`]) and pointed power-series jets over ℚ truncated at a fixed
//! order. Derived operations are written once against [`Model`].

pub mod combinatorics;
pub mod diffcomb;
pub mod dsl;
pub mod error;
pub mod jets;
pub mod metric;
pub mod model;
pub mod poly;
pub mod random;
pub mod report;
pub mod scalars;
pub mod suite;
pub mod taylor;

pub use diffcomb::{diff, PolyModel};
pub use error::{Error, Pos, Result};
pub use model::{Model, SampleModel};
pub use poly::{compose, Monomial, Poly, PolyMap};
pub use report::{AxiomReport, Status, Witness};
pub use scalars::{Scalar, Semiring};
