//! Exact, desk-scale oracles for learning against a test-time evasion
//! adversary: corrupted hypotheses, adversarial empirical risk, adversarial
//! ERM, and shattering / adversarial VC-dimension computations.

pub mod aerm;
pub mod corruption;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod experiments;
pub mod hypotheses;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod risk;
pub mod shattering;

pub use error::{Error, Result};
