//! Exact predicates and search procedures for higher-order monotone
//! subsets of planar point sequences.

pub mod bounds;
pub mod coloring;
pub mod combin;
pub mod construction;
pub mod error;
pub mod geometry;
pub mod lifts;
pub mod matrix;
pub mod numeric;
pub mod par;
pub mod poly;
pub mod sampling;
pub mod search;
pub mod signs;

pub use error::{Error, Result};
pub use geometry::{PlanarPoint, PointSequence, TupleSign};
pub use numeric::Rational;
