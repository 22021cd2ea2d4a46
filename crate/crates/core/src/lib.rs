//! Exponential families on finite sample spaces, their exact marginal and
//! moment polytopes, and numerical checks of the toric Kähler structure of
//! their torifications.
//!
//! - [`expfam`]: log-partition, mean parameters, Fisher metric, fullness.
//! - [`polytope`]: exact rational V-polytopes.
//! - [`moment`]: torification data and the exact polytope identities.
//! - [`kahler`]: Dombrowski tube, Fubini–Study geometry, Veronese checks.
//! - [`io`]: JSON family files.

pub mod error;
pub mod expfam;
pub mod fd;
pub mod io;
pub mod kahler;
pub mod lp;
pub mod moment;
pub mod polytope;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use expfam::{ExponentialFamily, NaturalParameter, ProbabilityDistribution, SampleSpace};
pub use moment::TorificationData;
pub use polytope::{AffineMap, Polytope, Units};
pub use rational::{RationalMatrix, RationalVector};
pub use report::{VerificationReport, Witness};
