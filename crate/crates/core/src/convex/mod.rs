//! Exact rational polytopes, concave piecewise-linear functions on them,
//! superlevel volumes and mixed volumes.

mod hull;
pub mod linalg;
mod mixed;
mod plfunction;
mod polytope;
mod superlevel;

pub use linalg::Point;
pub use mixed::mixed_volume;
pub use plfunction::{AffinePiece, Cell, PLFunction};
pub use polytope::{Facet, LatticePolytope};
pub use superlevel::{superlevel_volume, superlevel_volume_at, SuperlevelVolume};
