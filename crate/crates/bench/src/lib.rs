//! Fixtures shared by the criterion benches.
//!
//! - Schur class functions of a given degree for Littlewood-Richardson products
//! - rational exponent vectors for the Gauss series

use hypergamma::rational::qf;
use hypergamma::symfunc::{power_trace_expand, ClassFunction};
use hypergamma::Q;

/// tr(x)^m expanded in Schur functions on GL_n.
pub fn trace_power(m: u64, n: usize) -> ClassFunction {
    power_trace_expand(m, n)
}

/// Generic non-integral exponents for the matrix Gauss data.
pub fn gauss_exponents() -> Vec<Q> {
    vec![qf(1, 3), qf(2, 7), qf(0, 1), qf(-3, 5)]
}
