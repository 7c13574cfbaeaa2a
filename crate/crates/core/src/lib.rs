//! Exact, finitely-described models of unbounded decompositions of the grid
//! plane, together with the order-theoretic structure they induce at
//! infinity: ends of unbounded continua, circular orders on those ends,
//! dyadic circle embeddings and order completions, an end compactification
//! of the plane, and fixed-point analysis of induced circle maps.
//!
//! Everything is computed with exact integer / rational arithmetic; there is
//! no floating point anywhere on a decision path.

pub mod circular_order;
pub mod compactification;
pub mod completion_circle;
pub mod dynamics;
pub mod ends;
pub mod error;
pub mod generate;
pub mod oracle;
pub mod plane_model;
pub mod region;
pub mod scenario_io;
pub mod triad_order;

pub use error::Error;
