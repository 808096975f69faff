//! Distances between points of large lattice sets, compared with the limiting
//! density `P_n(λ)` of normalized distances in the unit ball.
//!
//! - [`theory`]: density, distribution function, mode and moments.
//! - [`pointsets`]: integer and primitive lattice points in a ball.
//! - [`empirical`]: exact and sampled pair-distance histograms with KS and χ² comparisons.
//! - [`oracle`]: Monte Carlo estimates of the analytic volumes.
//! - [`specfun`]: incomplete beta, gamma and zeta functions.
//!
//! ```
//! use paircorr::theory::{cdf, pdf, DistributionSpec, Lambda};
//!
//! let spec = DistributionSpec::new(3)?;
//! assert!((pdf(&spec, Lambda::new(1.0)?) - 0.9375).abs() < 1e-12);
//! assert!((cdf(&spec, Lambda::MAX) - 1.0).abs() < 1e-12);
//! # Ok::<(), paircorr::Error>(())
//! ```

pub mod empirical;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod pointsets;
pub mod report;
pub mod specfun;
pub mod streams;
pub mod theory;

pub use error::{Error, Result};
