//! Exact combinatorics of pants graphs near a product of Farey graphs.
//!
//! * [`slopes`]: the Farey graph, its metric, geodesics and subgraph checks.
//! * [`orbifold`]: flat models of the one-holed torus and the four-holed
//!   sphere with a brute-force geometric intersection oracle.
//! * [`pieces`]: subsurface projections, associated seams, special couples
//!   and the lemma sweeps built on the oracle.
//! * [`shadows`]: traces of pants decompositions on the complexity-one
//!   pieces, the projection to the product of Farey graphs and path audits.
//! * [`flats`]: rank arithmetic, the product metric and certified flats.

pub mod error;
pub mod flats;
pub mod orbifold;
pub mod pieces;
pub mod shadows;
pub mod slopes;

pub use error::{Error, Result};
pub use orbifold::{PieceKind, PieceObject};
pub use slopes::Slope;
