//! Seeded random generators for capacities, score vectors and related
//! fixtures. Values land on a dyadic grid so that exact-rational checks see
//! clean inputs.

use crate::capacity::{Capacity, IntervalCapacity, SeparableDecomposition};
use crate::extensions::{LevelDependentCapacity, MPointCapacity};
use crate::integrals::{Interval, IntervalVector};
use crate::lattice::q_count;
use rand::seq::SliceRandom;
use rand::Rng;

const GRID: u32 = 64;

fn grid_value<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let k = rng.random_range(0..=GRID);
    lo + (hi - lo) * (k as f64 / GRID as f64)
}

/// Random interval capacity: a running-max repair of grid noise, so both
/// totally monotone and non-totally-monotone shapes occur.
pub fn random_interval_capacity<R: Rng>(rng: &mut R, n: usize, top: f64) -> IntervalCapacity {
    let size = q_count(n);
    let mut values: Vec<f64> = (0..size).map(|_| grid_value(rng, 0.0, top * 0.98)).collect();
    let mut weight = 1usize;
    values[0] = 0.0;
    for _ in 0..n {
        for code in 0..size {
            if !(code / weight).is_multiple_of(3) {
                values[code] = values[code].max(values[code - weight]);
            }
        }
        weight *= 3;
    }
    values[size - 1] = top;
    IntervalCapacity::new(n, top, values).expect("running-max repair yields a valid capacity")
}

/// Random classical capacity on `2^N`, same construction.
pub fn random_capacity<R: Rng>(rng: &mut R, n: usize, top: f64) -> Capacity {
    let size = 1usize << n;
    let mut values: Vec<f64> = (0..size).map(|_| grid_value(rng, 0.0, top * 0.98)).collect();
    values[0] = 0.0;
    for i in 0..n {
        for mask in 0..size {
            if mask & (1 << i) != 0 {
                values[mask] = values[mask].max(values[mask ^ (1 << i)]);
            }
        }
    }
    values[size - 1] = top;
    Capacity::new(n, top, values).expect("running-max repair yields a valid capacity")
}

/// Random mixture presentation: a weight in `[0,1]` and two random
/// classical capacities.
pub fn random_separable<R: Rng>(rng: &mut R, n: usize, top: f64) -> SeparableDecomposition {
    let alpha = grid_value(rng, 0.0, 1.0);
    SeparableDecomposition::new(alpha, random_capacity(rng, n, top), random_capacity(rng, n, top))
        .expect("components share n and top")
}

/// Random interval vector with endpoints on the grid inside `[lo, hi]`.
pub fn random_interval_vector<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> IntervalVector {
    let items = (0..n)
        .map(|_| {
            let a = grid_value(rng, lo, hi);
            let b = grid_value(rng, lo, hi);
            Interval::new(a.min(b), a.max(b)).expect("ordered bounds")
        })
        .collect();
    IntervalVector::new(items).expect("n validated by caller")
}

/// Random vector with every interval inside `[0, hi]`.
pub fn random_nonnegative_vector<R: Rng>(rng: &mut R, n: usize, hi: f64) -> IntervalVector {
    random_interval_vector(rng, n, 0.0, hi)
}

/// Random vector dominating `x` in the componentwise interval order.
pub fn random_dominating_vector<R: Rng>(
    rng: &mut R,
    x: &IntervalVector,
    max_shift: f64,
) -> IntervalVector {
    let items = x
        .items()
        .iter()
        .map(|iv| {
            let width = iv.hi() - iv.lo();
            let a = grid_value(rng, 0.0, max_shift);
            let b = grid_value(rng, (a - width).max(0.0), max_shift.max(a - width));
            Interval::new(iv.lo() + a, iv.hi() + b).expect("shift keeps bounds ordered")
        })
        .collect();
    IntervalVector::new(items).expect("same length as x")
}

/// A comonotone pair of interval vectors, built by assigning two sorted
/// value lists through one shared rank permutation. Ranks are swapped within
/// each (lo, hi) slot pair so both vectors stay valid interval vectors.
pub fn random_comonotone_pair<R: Rng>(
    rng: &mut R,
    n: usize,
    lo: f64,
    hi: f64,
) -> (IntervalVector, IntervalVector) {
    let mut xs: Vec<f64> = (0..2 * n).map(|_| grid_value(rng, lo, hi)).collect();
    let mut ys: Vec<f64> = (0..2 * n).map(|_| grid_value(rng, lo, hi)).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let mut ranks: Vec<usize> = (0..2 * n).collect();
    ranks.shuffle(rng);
    for i in 0..n {
        if ranks[i] > ranks[i + n] {
            ranks.swap(i, i + n);
        }
    }
    let build = |sorted: &[f64]| {
        let items = (0..n)
            .map(|i| Interval::new(sorted[ranks[i]], sorted[ranks[i + n]]).expect("ranks ordered"))
            .collect();
        IntervalVector::new(items).expect("n validated by caller")
    };
    (build(&xs), build(&ys))
}

/// Random piecewise-constant level-dependent capacity on `(domain_lo,
/// domain_hi)` with the given number of pieces.
pub fn random_level_dependent<R: Rng>(
    rng: &mut R,
    n: usize,
    domain_lo: f64,
    domain_hi: f64,
    pieces: usize,
) -> LevelDependentCapacity {
    assert!(pieces >= 1);
    let mut cuts: Vec<f64> = (0..pieces - 1)
        .map(|_| grid_value(rng, domain_lo, domain_hi))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut breakpoints = vec![domain_lo];
    breakpoints.extend(cuts.into_iter().filter(|&t| t > domain_lo && t < domain_hi));
    breakpoints.push(domain_hi);
    let tables = (1..breakpoints.len())
        .map(|_| random_interval_capacity(rng, n, 1.0))
        .collect();
    LevelDependentCapacity::new(breakpoints, tables).expect("sorted breakpoints, valid tables")
}

/// Random m-point capacity over the chain lattice, by running-max repair.
pub fn random_mpoint_capacity<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    top: f64,
) -> MPointCapacity {
    let base = m + 1;
    let size = base.pow(n as u32);
    let mut values: Vec<f64> = (0..size).map(|_| grid_value(rng, 0.0, top * 0.98)).collect();
    values[0] = 0.0;
    let mut weight = 1usize;
    for _ in 0..n {
        for code in 0..size {
            if !(code / weight).is_multiple_of(base) {
                values[code] = values[code].max(values[code - weight]);
            }
        }
        weight *= base;
    }
    values[size - 1] = top;
    MPointCapacity::new(n, m, top, values).expect("running-max repair yields a valid capacity")
}
