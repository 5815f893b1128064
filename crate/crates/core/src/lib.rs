pub mod error;
pub mod exactnum;
pub mod convex;
pub mod filtration;
pub mod measures;
pub mod functionals;
pub mod testconfig;

pub use error::{Error, Result};
pub use exactnum::Rat;
