//! Exact computer algebra for hypergeometric series on GL_n.
//!
//! - `weights`: dominant weights, shifted weights, graded enumeration
//! - `symfunc`: Schur calculus, Littlewood-Richardson products, the operator D
//! - `gammafn`: matrix gamma function, Pochhammer symbols, divided powers
//! - `groupmodel`: pairs (H, A) of a reductive group and representations
//! - `polytope`: weight polytopes, face orbits, degree integrals, resonance
//! - `haarint`: integration over unitary groups and Euler-integral oracles
//! - `gammaseries`: matrix Gamma-series and the special matrix series
//! - `gl2`: Gelfand-Cetlin matrix elements, 3j-symbols, Appell-type series

pub mod error;
pub mod gammafn;
pub mod gammaseries;
pub mod gl2;
pub mod groupmodel;
pub mod haarint;
pub mod polytope;
pub mod poly;
pub mod rational;
pub mod symfunc;
pub mod weights;

pub use error::{Error, Result};
pub use rational::Q;
pub use weights::{DominantWeight, ShiftedWeight};

/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
