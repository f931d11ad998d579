//! Certified bounds for holomorphic quadratic differentials on thin parts of
//! hyperbolic surfaces, and the Weil-Petersson curvature bounds that follow.

pub mod bounds;
pub mod certify;
pub mod curvature;
pub mod domains;
pub mod error;
pub mod exec;
pub mod export;
pub mod harness;
pub mod interval;
pub mod qd;
pub mod quadrature;
pub mod report;
pub mod roots;

pub use error::{Error, Result};
pub use exec::Execution;
pub use interval::{Dual, Interval, Scalar};
