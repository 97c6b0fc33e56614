//! Self-intersections and winding invariants of trigonometric curves
//! `t ↦ p(e^{it})` traced by Laurent polynomials.

pub mod chebyshev;
pub mod config;
pub mod curve;
pub mod error;
pub mod extremal;
pub mod intersect;
pub mod laurent;
pub mod pairsys;
pub mod poly;
pub mod preimage;
pub mod rational;
pub mod topology;
pub mod trig2;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use laurent::{ExceptionalClass, LaurentPoly};
pub use num_complex::Complex64;
