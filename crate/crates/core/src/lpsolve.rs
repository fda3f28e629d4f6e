//! Equality-form linear programming: `max c·x` subject to `Ex = b`, `x ≥ 0`,
//! by two-phase primal simplex with Bland's anti-cycling rule.
//!
//! The solver is generic over [`Scalar`], so it runs exactly on big
//! rationals (zero tolerance) and approximately on `f64` (a small
//! feasibility tolerance). Optima are always attained at vertices, which is
//! what makes the returned solutions usable as sparse decomposition
//! certificates.

use crate::numeric::Scalar;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("objective, constraint matrix and rhs dimensions disagree")]
    DimensionMismatch,
}

/// A linear program in equality form.
#[derive(Debug, Clone)]
pub struct LpProblem<T> {
    /// Objective coefficients, one per variable.
    pub objective: Vec<T>,
    /// Constraint rows, each the length of the objective.
    pub constraints: Vec<Vec<T>>,
    /// Right-hand sides, one per constraint row.
    pub rhs: Vec<T>,
}

/// Exact-arithmetic instantiation.
pub type RationalLp = LpProblem<BigRational>;

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub optimum: T,
    pub solution: Vec<T>,
}

struct Tableau<T> {
    /// `m` rows of `ncols + 1` entries; the last entry is the rhs.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, row: usize) -> &T {
        &self.rows[row][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let factor = self.rows[row][col].clone();
        for entry in self.rows[row].iter_mut() {
            *entry = entry.clone() / factor.clone();
        }
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let scale = self.rows[r][col].clone();
            if scale == T::zero() {
                continue;
            }
            for c in 0..=self.ncols {
                let delta = scale.clone() * self.rows[row][c].clone();
                self.rows[r][c] = self.rows[r][c].clone() - delta;
            }
        }
        self.basis[row] = col;
    }

    /// Bland iteration loop for `max Σ cost_j x_j` over columns `0..limit`.
    fn optimize(&mut self, cost: &[T], limit: usize) -> Result<(), LpError> {
        let tol = T::tolerance();
        loop {
            // Reduced costs against the current basis.
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if cost[b] != T::zero() {
                        reduced = reduced - cost[b].clone() * self.rows[i][j].clone();
                    }
                }
                if reduced > tol {
                    entering = Some(j);
                    break; // Bland: smallest improving index.
                }
            }
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col].clone();
                if a > tol {
                    let ratio = self.rhs(i).clone() / a;
                    let better = match &leaving {
                        None => true,
                        Some((best_row, best_ratio)) => {
                            ratio < *best_ratio
                                || (ratio == *best_ratio && self.basis[i] < self.basis[*best_row])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Err(LpError::Unbounded);
            };
            self.pivot(row, col);
        }
    }
}

/// Maximizes the program and returns the optimum with an optimal vertex.
pub fn lp_maximize<T: Scalar>(lp: &LpProblem<T>) -> Result<LpSolution<T>, LpError> {
    let nvars = lp.objective.len();
    let m = lp.rhs.len();
    if lp.constraints.len() != m || lp.constraints.iter().any(|row| row.len() != nvars) {
        return Err(LpError::DimensionMismatch);
    }
    let ncols = nvars + m;
    let mut rows = Vec::with_capacity(m);
    for (i, row) in lp.constraints.iter().enumerate() {
        let negate = lp.rhs[i] < T::zero();
        let mut out = Vec::with_capacity(ncols + 1);
        for v in row {
            out.push(if negate { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            out.push(if k == i { T::one() } else { T::zero() });
        }
        out.push(if negate { -lp.rhs[i].clone() } else { lp.rhs[i].clone() });
        rows.push(out);
    }
    let mut tab = Tableau { rows, basis: (nvars..nvars + m).collect(), ncols };

    // Phase 1: drive the artificial variables to zero.
    let mut phase1 = vec![T::zero(); ncols];
    for c in phase1.iter_mut().skip(nvars) {
        *c = -T::one();
    }
    tab.optimize(&phase1, ncols)?;
    let tol = T::tolerance();
    let mut infeasibility = T::zero();
    for (i, &b) in tab.basis.iter().enumerate() {
        if b >= nvars {
            infeasibility = infeasibility + tab.rhs(i).clone();
        }
    }
    if infeasibility > tol {
        return Err(LpError::Infeasible);
    }

    // Pivot leftover artificials out of the basis; rows where no original
    // column is available are linearly dependent and get dropped.
    let mut row = 0;
    while row < tab.rows.len() {
        if tab.basis[row] >= nvars {
            let col = (0..nvars).find(|&j| tab.rows[row][j].abs_val() > tol);
            match col {
                Some(j) => tab.pivot(row, j),
                None => {
                    tab.rows.remove(row);
                    tab.basis.remove(row);
                    continue;
                }
            }
        }
        row += 1;
    }

    // Phase 2: the real objective, artificial columns excluded.
    let mut phase2 = lp.objective.clone();
    phase2.extend(std::iter::repeat_n(T::zero(), m));
    tab.optimize(&phase2, nvars)?;

    let mut solution = vec![T::zero(); nvars];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < nvars {
            solution[b] = tab.rhs(i).clone();
        }
    }
    let mut optimum = T::zero();
    for (c, x) in lp.objective.iter().zip(&solution) {
        optimum = optimum + c.clone() * x.clone();
    }
    Ok(LpSolution { optimum, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(v: f64) -> BigRational {
        BigRational::from_f64(v)
    }

    fn rational_lp(obj: &[f64], rows: &[&[f64]], rhs: &[f64]) -> RationalLp {
        LpProblem {
            objective: obj.iter().map(|&v| rat(v)).collect(),
            constraints: rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect(),
            rhs: rhs.iter().map(|&v| rat(v)).collect(),
        }
    }

    #[test]
    fn simplex_on_a_segment() {
        let lp = rational_lp(&[1.0, 0.0], &[&[1.0, 1.0]], &[1.0]);
        let sol = lp_maximize(&lp).unwrap();
        assert_eq!(sol.optimum, rat(1.0));
        assert_eq!(sol.solution, vec![rat(1.0), rat(0.0)]);
    }

    #[test]
    fn degenerate_objective_on_a_segment() {
        let lp = rational_lp(&[1.0, 1.0], &[&[1.0, 1.0]], &[1.0]);
        let sol = lp_maximize(&lp).unwrap();
        assert_eq!(sol.optimum, rat(1.0));
    }

    #[test]
    fn infeasible_program_is_reported() {
        let lp = rational_lp(&[1.0], &[&[1.0], &[1.0]], &[1.0, 2.0]);
        assert_eq!(lp_maximize(&lp).unwrap_err(), LpError::Infeasible);
    }

    #[test]
    fn unbounded_program_is_reported() {
        let lp = rational_lp(&[1.0, 1.0], &[&[1.0, -1.0]], &[0.0]);
        assert_eq!(lp_maximize(&lp).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let lp = rational_lp(&[1.0, 2.0], &[&[1.0, 1.0], &[2.0, 2.0]], &[1.0, 2.0]);
        let sol = lp_maximize(&lp).unwrap();
        assert_eq!(sol.optimum, rat(2.0));
    }

    #[test]
    fn negative_rhs_is_canonicalized() {
        // -x1 - x2 = -1 is the same segment.
        let lp = rational_lp(&[3.0, 1.0], &[&[-1.0, -1.0]], &[-1.0]);
        let sol = lp_maximize(&lp).unwrap();
        assert_eq!(sol.optimum, rat(3.0));
    }

    #[test]
    fn bland_terminates_on_the_classic_cycling_program() {
        // Beale's cycling example in equality form (three slacks appended);
        // most-negative pivoting cycles on it, Bland's rule must not.
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let lp = LpProblem {
            objective: vec![q(3, 4), q(-150, 1), q(1, 50), q(-6, 1), q(0, 1), q(0, 1), q(0, 1)],
            constraints: vec![
                vec![q(1, 4), q(-60, 1), q(-1, 25), q(9, 1), q(1, 1), q(0, 1), q(0, 1)],
                vec![q(1, 2), q(-90, 1), q(-1, 50), q(3, 1), q(0, 1), q(1, 1), q(0, 1)],
                vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
            ],
            rhs: vec![q(0, 1), q(0, 1), q(1, 1)],
        };
        let sol = lp_maximize(&lp).unwrap();
        assert_eq!(sol.optimum, q(1, 20));
    }

    /// Exhaustive vertex enumeration: solve every square basis system by
    /// Gaussian elimination, keep the nonnegative ones, take the best.
    fn vertex_enumeration_optimum(lp: &RationalLp) -> Option<BigRational> {
        let m = lp.rhs.len();
        let nvars = lp.objective.len();
        let mut best: Option<BigRational> = None;
        let mut combo: Vec<usize> = (0..m).collect();
        loop {
            if let Some(xb) = solve_square(lp, &combo) {
                if xb.iter().all(|v| *v >= BigRational::zero()) {
                    let mut value = BigRational::zero();
                    for (k, &j) in combo.iter().enumerate() {
                        value += lp.objective[j].clone() * xb[k].clone();
                    }
                    if best.as_ref().is_none_or(|b| value > *b) {
                        best = Some(value);
                    }
                }
            }
            // next combination of size m from 0..nvars
            let mut i = m;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if combo[i] != i + nvars - m {
                    combo[i] += 1;
                    for k in i + 1..m {
                        combo[k] = combo[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn solve_square(lp: &RationalLp, cols: &[usize]) -> Option<Vec<BigRational>> {
        let m = cols.len();
        let mut a: Vec<Vec<BigRational>> = (0..m)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    cols.iter().map(|&j| lp.constraints[i][j].clone()).collect();
                row.push(lp.rhs[i].clone());
                row
            })
            .collect();
        for col in 0..m {
            let pivot = (col..m).find(|&r| a[r][col] != BigRational::zero())?;
            a.swap(col, pivot);
            let p = a[col][col].clone();
            for c in col..=m {
                a[col][c] = a[col][c].clone() / p.clone();
            }
            for r in 0..m {
                if r != col && a[r][col] != BigRational::zero() {
                    let f = a[r][col].clone();
                    for c in col..=m {
                        let delta = f.clone() * a[col][c].clone();
                        a[r][c] = a[r][c].clone() - delta;
                    }
                }
            }
        }
        Some((0..m).map(|r| a[r][m].clone()).collect())
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn random_programs_match_vertex_enumeration() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..40 {
            let m = rng.random_range(2..=4);
            let nvars = rng.random_range(m + 1..=8);
            // Nonnegative matrix with nonzero columns keeps the program
            // bounded; rhs from a random feasible point keeps it feasible;
            // a leading diagonal block keeps the rows independent so the
            // basis enumeration below always sees a nonsingular system.
            let mut constraints = vec![vec![0.0f64; nvars]; m];
            for (i, row) in constraints.iter_mut().enumerate() {
                row[i] = rng.random_range(1..=4) as f64;
            }
            for j in m..nvars {
                let hits = rng.random_range(1..=m);
                for _ in 0..hits {
                    let i = rng.random_range(0..m);
                    constraints[i][j] = rng.random_range(1..=4) as f64;
                }
            }
            let feasible: Vec<f64> = (0..nvars).map(|_| rng.random_range(0..=3) as f64).collect();
            let rhs: Vec<f64> = constraints
                .iter()
                .map(|row| row.iter().zip(&feasible).map(|(c, f)| c * f).sum())
                .collect();
            let objective: Vec<f64> =
                (0..nvars).map(|_| rng.random_range(-3..=6) as f64).collect();
            let lp = rational_lp(
                &objective,
                &constraints.iter().map(|r| r.as_slice()).collect::<Vec<_>>(),
                &rhs,
            );
            let sol = lp_maximize(&lp).unwrap();
            let oracle = vertex_enumeration_optimum(&lp).expect("feasible by construction");
            assert_eq!(sol.optimum, oracle);

            // The returned vertex satisfies the constraints exactly.
            for i in 0..m {
                let mut lhs = BigRational::zero();
                for j in 0..nvars {
                    lhs += lp.constraints[i][j].clone() * sol.solution[j].clone();
                }
                assert_eq!(lhs, lp.rhs[i]);
            }
            assert!(sol.solution.iter().all(|v| *v >= BigRational::zero()));
            let mut value = BigRational::zero();
            for (c, x) in lp.objective.iter().zip(&sol.solution) {
                value += c.clone() * x.clone();
            }
            assert_eq!(value, sol.optimum);
        }
    }

    #[test]
    fn float_mode_agrees_on_small_programs() {
        let lp = LpProblem {
            objective: vec![0.75, -150.0, 0.02, -6.0, 0.0, 0.0, 0.0],
            constraints: vec![
                vec![0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0],
                vec![0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            ],
            rhs: vec![0.0, 0.0, 1.0],
        };
        let sol = lp_maximize(&lp).unwrap();
        assert!((sol.optimum - 0.05).abs() < 1e-9);
    }
}
