pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod gallery;
pub mod instance;
pub mod poly;
pub mod roots;
pub mod solver;
pub mod winding;
pub mod workflow;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use poly::{Polynomial, RationalFunction};
