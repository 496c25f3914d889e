//! Numerical laboratory for epistemic inference.
//!
//! The crate pairs classical statistical machinery (sufficiency, ancillarity,
//! the Birnbaum mixture, REML, confidence distributions, entropy
//! correlation, finite group actions) with the Hilbert-space side of the same
//! story: effects and density operators, Born probabilities, Busch's
//! reconstruction of a density operator from a generalized probability
//! measure, spin-½ correlations, the CHSH and Mermin experiments and Nelson's
//! stochastic mechanics.
//!
//! Every stochastic routine takes an explicit seed.

pub mod continuous;
pub mod error;
pub mod groups;
pub mod hilbert;
pub mod inference;
pub mod linalg;
pub mod random;
pub mod report;
pub mod spin;

pub use error::{Error, Result};
