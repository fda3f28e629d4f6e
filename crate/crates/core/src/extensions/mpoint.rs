//! m-point generalization: each criterion carries `m` nondecreasing
//! evaluations (e.g. pessimistic / realistic / optimistic for `m = 3`)
//! instead of the two interval endpoints, and the capacity lives on chains
//! `A_1 ⊆ … ⊆ A_m` of coalitions.
//!
//! The chain lattice is encoded densely in base `m + 1`: the digit of a
//! criterion is how many chain sets contain it. For `m = 2` the encoding —
//! and so the whole machinery — coincides bit-for-bit with the nested-pair
//! lattice; for `m = 1` it collapses to `2^N`.

use super::ExtensionError;
use crate::capacity::{Capacity, CapacityError, IntervalCapacity};
use crate::integrals::IntervalVector;
use crate::lattice::{CriterionSet, MAX_CRITERIA};

/// Scores with `m` ordered evaluations per criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct MPointVector {
    points: usize,
    rows: Vec<Vec<f64>>,
}

impl MPointVector {
    pub fn new(points: usize, rows: Vec<Vec<f64>>) -> Result<Self, ExtensionError> {
        if points == 0 {
            return Err(ExtensionError::BadPointCount);
        }
        if rows.is_empty() || rows.len() > MAX_CRITERIA {
            return Err(ExtensionError::LengthMismatch {
                expected: MAX_CRITERIA,
                got: rows.len(),
            });
        }
        for (criterion, row) in rows.iter().enumerate() {
            if row.len() != points
                || row.iter().any(|v| !v.is_finite())
                || row.windows(2).any(|w| w[0] > w[1])
            {
                return Err(ExtensionError::NotChainOrdered { criterion });
            }
        }
        Ok(Self { points, rows })
    }

    /// The two-point vector carrying an interval vector's endpoints.
    pub fn from_interval_vector(x: &IntervalVector) -> Self {
        Self {
            points: 2,
            rows: x.items().iter().map(|iv| vec![iv.lo(), iv.hi()]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// A capacity on chains of `m` nested coalitions, stored densely in base
/// `m + 1` digit order.
#[derive(Debug, Clone, PartialEq)]
pub struct MPointCapacity {
    n: usize,
    points: usize,
    top: f64,
    values: Vec<f64>,
}

impl MPointCapacity {
    pub fn new(
        n: usize,
        points: usize,
        top: f64,
        values: Vec<f64>,
    ) -> Result<Self, ExtensionError> {
        if points == 0 {
            return Err(ExtensionError::BadPointCount);
        }
        CriterionSet::empty(n)?;
        if !top.is_finite() || top <= 0.0 {
            return Err(CapacityError::BadTop(top).into());
        }
        let base = points + 1;
        let expected = base.pow(n as u32);
        if values.len() != expected {
            return Err(CapacityError::WrongLength { expected, got: values.len() }.into());
        }
        if values[0] != 0.0 {
            return Err(CapacityError::BadBoundary {
                at: "(∅,…,∅)".to_string(),
                expected: 0.0,
                got: values[0],
            }
            .into());
        }
        if values[expected - 1] != top {
            return Err(CapacityError::BadBoundary {
                at: "(N,…,N)".to_string(),
                expected: top,
                got: values[expected - 1],
            }
            .into());
        }
        let mut weight = 1usize;
        for _ in 0..n {
            for code in 0..expected {
                let v = values[code];
                if !v.is_finite() || v < 0.0 || v > top {
                    return Err(CapacityError::OutOfRange {
                        at: format!("chain code {code}"),
                        value: v,
                        top,
                    }
                    .into());
                }
                if !(code / weight).is_multiple_of(base) && values[code - weight] > v {
                    return Err(CapacityError::NotMonotone {
                        lower: format!("chain code {}", code - weight),
                        upper: format!("chain code {code}"),
                        lower_value: values[code - weight],
                        upper_value: v,
                    }
                    .into());
                }
            }
            weight *= base;
        }
        Ok(Self { n, points, top, values })
    }

    /// Two-point capacity with the same dense table as the interval
    /// capacity (the encodings agree).
    pub fn from_interval_capacity(mu: &IntervalCapacity) -> Self {
        Self { n: mu.n(), points: 2, top: mu.top(), values: mu.values().to_vec() }
    }

    /// One-point capacity: the chain lattice is `2^N` and the table is the
    /// classical one.
    pub fn from_capacity(nu: &Capacity) -> Self {
        Self { n: nu.n(), points: 1, top: nu.top(), values: nu.values().to_vec() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Looks up the chain whose `i`-th digit is `levels[i]`, the number of
    /// chain sets containing criterion `i`.
    pub fn value_at_levels(&self, levels: &[usize]) -> f64 {
        assert_eq!(levels.len(), self.n, "criteria counts differ");
        let base = self.points + 1;
        let mut code = 0usize;
        let mut weight = 1usize;
        for &l in levels {
            assert!(l <= self.points, "level exceeds points-per-criterion");
            code += l * weight;
            weight *= base;
        }
        self.values[code]
    }
}

/// m-point robust Choquet integral: exact step-function integration over the
/// `n·m` evaluation breakpoints, each segment weighted by the capacity of
/// the chain of threshold cuts.
pub fn mpoint_rci(x: &MPointVector, mu: &MPointCapacity) -> Result<f64, ExtensionError> {
    if x.n() != mu.n() {
        return Err(ExtensionError::LengthMismatch { expected: mu.n(), got: x.n() });
    }
    if x.points() != mu.points() {
        return Err(ExtensionError::BadPointCount);
    }
    let mut values: Vec<f64> = x.rows().iter().flatten().copied().collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let start = x
        .rows()
        .iter()
        .map(|row| row[0])
        .fold(f64::INFINITY, f64::min);
    let mut acc = start;
    let mut prev = start;
    for &t in values.iter().filter(|&&t| t > start) {
        let levels: Vec<usize> =
            x.rows().iter().map(|row| row.iter().filter(|&&v| v >= t).count()).collect();
        acc += (t - prev) * mu.value_at_levels(&levels);
        prev = t;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::{choquet, rci};
    use crate::sample;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn two_point_case_is_the_robust_choquet_integral() {
        let mut rng = StdRng::seed_from_u64(503);
        for _ in 0..30 {
            let n = rng.random_range(1..=4);
            let mu = sample::random_interval_capacity(&mut rng, n, 1.0);
            let x = sample::random_interval_vector(&mut rng, n, -2.0, 4.0);
            let mm = MPointCapacity::from_interval_capacity(&mu);
            let mx = MPointVector::from_interval_vector(&x);
            assert_eq!(mpoint_rci(&mx, &mm).unwrap(), rci(&x, &mu).unwrap());
        }
    }

    #[test]
    fn one_point_case_is_the_choquet_integral() {
        let mut rng = StdRng::seed_from_u64(509);
        for _ in 0..30 {
            let n = rng.random_range(1..=4);
            let nu = sample::random_capacity(&mut rng, n, 1.0);
            let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..4.0)).collect();
            let mm = MPointCapacity::from_capacity(&nu);
            let mx = MPointVector::new(1, xs.iter().map(|&v| vec![v]).collect()).unwrap();
            assert_eq!(mpoint_rci(&mx, &mm).unwrap(), choquet(&xs, &nu).unwrap());
        }
    }

    #[test]
    fn three_point_constant_vector_is_idempotent() {
        let mut rng = StdRng::seed_from_u64(521);
        let mm = sample::random_mpoint_capacity(&mut rng, 3, 3, 1.0);
        let k = 2.5;
        let mx = MPointVector::new(3, vec![vec![k; 3]; 3]).unwrap();
        assert_eq!(mpoint_rci(&mx, &mm).unwrap(), k);
    }

    #[test]
    fn chain_order_is_enforced() {
        assert!(matches!(
            MPointVector::new(3, vec![vec![1.0, 0.5, 2.0]]),
            Err(ExtensionError::NotChainOrdered { criterion: 0 })
        ));
    }

    #[test]
    fn capacity_monotonicity_is_enforced() {
        // 1 criterion, 2 points: chain codes 0,1,2 must be nondecreasing.
        let err = MPointCapacity::new(1, 2, 1.0, vec![0.0, 0.8, 0.5]);
        assert!(err.is_err());
        let err = MPointCapacity::new(1, 2, 1.0, vec![0.0, 0.8, 0.5, 1.0]);
        assert!(matches!(
            err,
            Err(ExtensionError::Capacity(CapacityError::WrongLength { .. }))
        ));
    }
}
