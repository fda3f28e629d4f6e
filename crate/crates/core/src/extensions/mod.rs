//! Generalizations of the robust Choquet integral: bipolar scales,
//! level-dependent capacities, the concave integral and m-point intervals.

mod bipolar;
mod concave;
mod level;
mod mpoint;

pub use bipolar::{bipolar_rci, BipolarIntervalCapacity, BipolarQuad};
pub use concave::{concave_robust, concave_robust_exact, ConcaveResult, Decomposition};
pub use level::{rci_level_dependent, LevelDependentCapacity};
pub use mpoint::{mpoint_rci, MPointCapacity, MPointVector};

use crate::capacity::CapacityError;
use crate::integrals::IntegralError;
use crate::lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Integral(#[from] IntegralError),
    #[error("vector has {got} components, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the possible-positive and possible-negative coalitions overlap")]
    OverlappingPoles,
    #[error("quadruple coalitions are not properly nested")]
    NotNestedQuad,
    #[error("bipolar value {0} outside [-1, 1]")]
    OutOfBipolarRange(f64),
    #[error("bipolar entries are not monotone: {0}")]
    NotMonotoneBipolar(String),
    #[error("endpoint value {value} outside the capacity domain ({lo}, {hi})")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("level breakpoints must be strictly increasing")]
    BadBreakpoints,
    #[error("capacity pieces disagree with the breakpoint list")]
    PieceCountMismatch,
    #[error("negative pessimistic endpoint {value} at criterion {criterion}")]
    NegativeInput { criterion: usize, value: f64 },
    #[error("criterion {criterion} evaluations are not nondecreasing")]
    NotChainOrdered { criterion: usize },
    #[error("points-per-criterion must be at least 1")]
    BadPointCount,
    #[error("the decomposition program failed unexpectedly: {0}")]
    SolverInconsistency(String),
}
