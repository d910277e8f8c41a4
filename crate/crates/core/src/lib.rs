//! Exact machinery for lenses in arrangements of circles.
//!
//! A *lens* is a pair of distinct points together with every circle of the
//! arrangement passing through both. This crate enumerates lenses exactly
//! (all coordinates live in quadratic fields over the rationals), selects and
//! certifies pairwise non-overlapping families, cuts circles into arcs so no
//! `k`-rich lens survives, lifts circles and lenses into three dimensions and
//! audits the incidence structure there, and evaluates the closed-form bounds
//! that govern all of the above.
//!
//! Geometry is exact throughout; only [`bounds`] uses floating point.

pub mod bounds;
pub mod cli;
pub mod cutting;
pub mod dual;
pub mod error;
pub mod exact;
pub mod family;
pub mod generators;
pub mod incidence;
pub mod io;
pub mod par;
pub mod pencil;
pub mod scene;
pub mod slope;

pub use error::{Error, Result};
pub use exact::{Circle, Point, QuadNum, QuadPoint, Rational};
pub use family::{LensFamily, SelectMode};
pub use par::Exec;
pub use pencil::Lens;
pub use scene::Scene;
