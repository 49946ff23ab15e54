//! Quantum periods of Fano manifolds computed from convenient weak
//! Landau–Ginzburg models, together with numerical diagnostics for the
//! exponential and superpolynomial concentration of power-series summands.
//!
//! The crate is organised bottom-up:
//!
//! * [`laurent`] : exact sparse Laurent polynomials, constant terms of powers,
//!   Newton polytopes and the index of a model.
//! * [`conifold`] : the conifold point and value via Newton's method in
//!   logarithmic coordinates.
//! * [`walk`] : the random-walk reading of constant terms and local-CLT fits.
//! * [`series`] : quantum period assembly, `T_{A,con}` estimation and
//!   certified evaluation of absolutely monotonic series.
//! * [`concentration`] : window measurements of head/tail mass and the
//!   associated fits and verdicts.
//! * [`hypergeom`] : modified hypergeometric series and their predicted
//!   concentration location.
//! * [`catalog`] : built-in weak LG models.
//! * [`pipeline`] : the end-to-end walk and concentration runs used by the
//!   command-line tool.

pub mod catalog;
pub mod concentration;
pub mod conifold;
pub mod hypergeom;
pub mod laurent;
pub mod lp;
pub mod mp;
pub mod pipeline;
pub mod series;
pub mod walk;

pub use concentration::{ConcentrationConfig, ConcentrationReport, LocationPolynomial, Verdict};
pub use conifold::{find_conifold, ConifoldConfig, ConifoldResult};
pub use hypergeom::{HypergeomSpec, Modifier};
pub use laurent::{LaurentPolynomial, NewtonPolytopeInfo};
pub use series::{CoefficientOracle, PeriodSequence, SeriesEvaluation, TruncationPolicy};
pub use walk::{LcltFit, StepDistribution};

/// Error type for the end-to-end pipelines that cross module boundaries.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("laurent: {0}")]
    Laurent(#[from] laurent::LaurentError),
    #[error("model file: {0}")]
    ModelFile(#[from] laurent::ModelFileError),
    #[error("conifold: {0}")]
    Conifold(#[from] conifold::ConifoldError),
    #[error("walk: {0}")]
    Walk(#[from] walk::WalkError),
    #[error("series: {0}")]
    Series(#[from] series::SeriesError),
    #[error("concentration: {0}")]
    Concentration(#[from] concentration::ConcentrationError),
    #[error("hypergeom: {0}")]
    Hypergeom(#[from] hypergeom::HypergeomError),
}
