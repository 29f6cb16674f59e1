//! Kinetic stable Delaunay graphs over exact arithmetic.
//!
//! The crate maintains the α-stable subgraph of the Delaunay triangulation
//! (SDG) of planar points moving along polynomial trajectories, with three
//! maintenance schemes:
//!
//! * `baseline` — per-point directional kinetic tournaments (quadratic space),
//! * `kinetic_qdt` — the full Delaunay triangulation under a regular-polygon
//!   norm, with stable edges selected by breakpoint count,
//! * `rangetree` — near-linear-space candidate filtering through kinetic
//!   range trees feeding reduced tournaments.
//!
//! Every predicate is decided exactly: coordinates are big rationals, the
//! direction/polygon constants live in small real algebraic number fields,
//! and event times are isolated real roots of polynomials over those fields.

pub mod analysis;
pub mod angle;
pub mod baseline;
pub mod direction;
pub mod error;
pub mod euclid;
pub mod field;
pub mod geom;
pub mod gon;
pub mod harness;
pub mod kinetic_qdt;
pub mod num;
pub mod poly;
pub mod qdt;
pub mod rangetree;
pub mod roots;
pub mod scenario;
pub mod svg;
pub mod tournament;
pub mod trace;

pub use error::Error;
pub use field::{NumberField, Scalar};
pub use num::{Int, Rat};
