//! Coefficient-bounded Lagrange polynomials for scattered nodes in the unit
//! ball, the explicit right inverse of the monomial Vandermonde matrix they
//! assemble into, and numerical certificates for the resulting stability
//! bounds.

pub mod error;
pub mod geometry;
pub mod linalg;
pub mod multiindex;
pub mod multivariate;
pub mod oracle;
pub mod report;
pub mod sampling;
pub mod univariate;
pub mod vandermonde;

pub use error::{Error, Result};
pub use geometry::{kappa_lower_bound, DirectionCertificate, NodeSet, SearchConfig};
pub use linalg::DenseMatrix;
pub use multiindex::{MonomialOrder, MultiIndex};
pub use multivariate::MultivariatePolynomial;
pub use report::Inequality;
pub use univariate::{CoeffVector, UnivariateNodes};
pub use vandermonde::{analyze, AnalysisConfig, Limits, StabilityReport};
