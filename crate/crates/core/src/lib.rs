//! Robust non-additive integrals over interval capacities.
//!
//! Classical non-additive integrals (Choquet, Sugeno, Shilkret) aggregate a
//! vector of exact scores against a capacity on the subsets of the criteria
//! set. This crate implements their *robust* counterparts, which aggregate
//! interval-valued scores against an *interval capacity*: a monotone,
//! normalized weight function on the lattice of nested coalition pairs
//! `(A, B)` with `A ⊆ B ⊆ N` ("A satisfied for sure, B possibly").
//!
//! The main pieces:
//!
//! - [`lattice`]: bitmask-backed criteria sets, the nested-pair lattice and a
//!   dense base-3 index for `3^n`-entry tables.
//! - [`capacity`]: interval capacities, the classical capacities derived from
//!   them, and separable (mixture) capacities.
//! - [`mobius`]: Möbius/zeta transforms on the pair lattice and on `2^N`,
//!   plus the characterization of interval capacities in Möbius coordinates.
//! - [`integrals`]: interval score vectors and the robust Choquet, Sugeno
//!   and Shilkret integrals in all their equivalent forms.
//! - [`extensions`]: bipolar, level-dependent, concave and m-point
//!   generalizations.
//! - `lpsolve`: the exact two-phase simplex backing the concave integral
//!   (public under the `diagnostics` feature).
//! - [`formats`]: JSON/CSV schemas for capacities and alternatives.
//! - [`sample`]: seeded random generators for capacities and score vectors.

pub mod capacity;
pub mod extensions;
pub mod formats;
pub mod integrals;
pub mod lattice;
#[cfg(any(test, feature = "diagnostics"))]
pub mod lpsolve;
#[cfg(not(any(test, feature = "diagnostics")))]
pub(crate) mod lpsolve;
pub mod mobius;
pub mod numeric;
pub mod sample;

pub use capacity::{Capacity, CapacityError, IntervalCapacity, SeparableDecomposition};
pub use integrals::{Interval, IntervalVector};
pub use lattice::{CriterionSet, LatticeError, QIndex, QPair};
pub use mobius::MobiusRepresentation;
