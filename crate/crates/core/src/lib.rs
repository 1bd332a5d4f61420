//! Simplification of polyline bundles: polylines over a common set of bends
//! that must be simplified consistently wherever they share bends.
//!
//! The crate provides the segment-versus-chain Fréchet decision, shortcut
//! graphs, a star-cover approximation, two exact solvers, and a generator
//! of hard instances from graphs together with a numerical certifier.

pub mod exact;
pub mod frechet;
pub mod io;
pub mod model;
pub mod reduction;
pub mod shortcut;
pub mod star_cover;

pub use model::{BendId, ModelError, Point, PolylineBundle, Simplification, ToleranceSpec};
