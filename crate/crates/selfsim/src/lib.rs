//! Self-similar groupoid actions on finite directed graphs.
//!
//! The crate represents an action `(G, E)` of a finite groupoid (or a finite
//! behavioral stand-in for one) on the path space of a finite graph, decides
//! the combinatorial conditions Fin, Evr, Cyc, Sla, Rec, Min and Con,
//! implements the inverse semigroup `S(G,E)`, exact germ calculus over
//! eventually periodic boundary points, and `T`-valued twists with exact
//! rational phases.

pub mod action;
pub mod boundary;
pub mod cli;
pub mod dot;
pub mod error;
pub mod germ;
pub mod graph;
pub mod groupoid;
pub mod invsemi;
pub mod io;
pub mod props;
pub mod twist;
pub mod validation;

pub use action::SelfSimilarAction;
pub use boundary::BoundaryPoint;
pub use error::{Error, Result};
pub use graph::{Graph, Path};
pub use groupoid::{Model, Status, Verdict};
pub use invsemi::SemigroupElement;
pub use io::System;
