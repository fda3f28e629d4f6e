//! Robust concave integral: the best capacity-weighted decomposition of a
//! nonnegative score vector into generalized indicator vectors.
//!
//! Writing `x = Σ α_(A,B) · 1_(A,B)` with `α ≥ 0` pins, for every criterion
//! `i`, the pessimistic endpoint to the total weight of pairs with `i` sure
//! and the optimistic endpoint to the total weight of pairs with `i`
//! possible. Maximizing `Σ α_(A,B) μ(A,B)` over these `2n` equality
//! constraints is a linear program in `3^n - 1` variables (the bottom pair
//! has an all-zero column and contributes nothing). Feasibility is
//! guaranteed for nonnegative vectors: the sorted-cut decomposition used by
//! the robust Choquet integral is itself a feasible point.

use super::ExtensionError;
use crate::capacity::IntervalCapacity;
use crate::integrals::IntervalVector;
use crate::lattice::{q_count, QPair};
use crate::lpsolve::{lp_maximize, LpProblem};
use crate::numeric::Scalar;
use num_rational::BigRational;

/// A nonnegative weighting of nested pairs; the certificate returned by the
/// concave integral.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<T = f64> {
    terms: Vec<(QPair, T)>,
}

impl<T: Scalar> Decomposition<T> {
    pub fn terms(&self) -> &[(QPair, T)] {
        &self.terms
    }

    /// Re-sums the weighted indicators into endpoint totals
    /// `(pessimistic, optimistic)` per criterion.
    pub fn resummed(&self, n: usize) -> (Vec<T>, Vec<T>) {
        let mut lo = vec![T::zero(); n];
        let mut hi = vec![T::zero(); n];
        for (pair, weight) in &self.terms {
            for i in 0..n {
                if pair.sure().contains(i) {
                    lo[i] = lo[i].clone() + weight.clone();
                }
                if pair.possible().contains(i) {
                    hi[i] = hi[i].clone() + weight.clone();
                }
            }
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveResult<T = f64> {
    pub value: T,
    pub certificate: Decomposition<T>,
}

fn build_program<T: Scalar>(x: &IntervalVector, mu: &IntervalCapacity) -> LpProblem<T> {
    let n = x.n();
    let nvars = q_count(n) - 1;
    let mut objective = Vec::with_capacity(nvars);
    let mut columns: Vec<QPair> = Vec::with_capacity(nvars);
    for code in 1..=nvars {
        columns.push(QPair::from_code(code, n).expect("valid code"));
        objective.push(T::from_f64(mu.value_at_code(code)));
    }
    let mut constraints = vec![vec![T::zero(); nvars]; 2 * n];
    for (col, pair) in columns.iter().enumerate() {
        for i in 0..n {
            if pair.sure().contains(i) {
                constraints[i][col] = T::one();
            }
            if pair.possible().contains(i) {
                constraints[n + i][col] = T::one();
            }
        }
    }
    let mut rhs = Vec::with_capacity(2 * n);
    for iv in x.items() {
        rhs.push(T::from_f64(iv.lo()));
    }
    for iv in x.items() {
        rhs.push(T::from_f64(iv.hi()));
    }
    LpProblem { objective, constraints, rhs }
}

fn solve<T: Scalar>(
    x: &IntervalVector,
    mu: &IntervalCapacity,
) -> Result<ConcaveResult<T>, ExtensionError> {
    if x.n() != mu.n() {
        return Err(ExtensionError::LengthMismatch { expected: mu.n(), got: x.n() });
    }
    for (i, iv) in x.items().iter().enumerate() {
        if iv.lo() < 0.0 {
            return Err(ExtensionError::NegativeInput { criterion: i, value: iv.lo() });
        }
    }
    let program = build_program::<T>(x, mu);
    let sol = lp_maximize(&program)
        .map_err(|e| ExtensionError::SolverInconsistency(e.to_string()))?;
    let n = x.n();
    let terms = sol
        .solution
        .into_iter()
        .enumerate()
        .filter(|(_, w)| *w != T::zero())
        .map(|(col, w)| (QPair::from_code(col + 1, n).expect("valid code"), w))
        .collect();
    Ok(ConcaveResult { value: sol.optimum, certificate: Decomposition { terms } })
}

/// Concave integral in `f64` arithmetic.
pub fn concave_robust(
    x: &IntervalVector,
    mu: &IntervalCapacity,
) -> Result<ConcaveResult<f64>, ExtensionError> {
    solve::<f64>(x, mu)
}

/// Concave integral in exact rational arithmetic. The certificate re-sums to
/// the input endpoints exactly.
pub fn concave_robust_exact(
    x: &IntervalVector,
    mu: &IntervalCapacity,
) -> Result<ConcaveResult<BigRational>, ExtensionError> {
    solve::<BigRational>(x, mu)
}
