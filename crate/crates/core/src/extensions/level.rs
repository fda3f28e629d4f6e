//! Level-dependent robust Choquet integral.
//!
//! A level-dependent capacity is a family of interval capacities indexed by
//! the evaluation level `t`, here restricted to piecewise-constant families:
//! breakpoints `t_0 < … < t_k` and one capacity table per piece, the `j`-th
//! ruling `(t_{j-1}, t_j]`. Piecewise-constant families are measurable in
//! `t` by construction and make the integral exact; any measurable family
//! can be approximated this way.

use super::ExtensionError;
use crate::capacity::IntervalCapacity;
use crate::integrals::{IntervalVector, ThresholdCut};

#[derive(Debug, Clone, PartialEq)]
pub struct LevelDependentCapacity {
    breakpoints: Vec<f64>,
    tables: Vec<IntervalCapacity>,
}

impl LevelDependentCapacity {
    /// `breakpoints` holds `k + 1` strictly increasing levels framing the
    /// `k` capacity pieces. All pieces must share criteria count and scale.
    pub fn new(
        breakpoints: Vec<f64>,
        tables: Vec<IntervalCapacity>,
    ) -> Result<Self, ExtensionError> {
        if breakpoints.len() != tables.len() + 1 || tables.is_empty() {
            return Err(ExtensionError::PieceCountMismatch);
        }
        if breakpoints.iter().any(|t| !t.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(ExtensionError::BadBreakpoints);
        }
        let n = tables[0].n();
        let top = tables[0].top();
        if tables.iter().any(|t| t.n() != n || t.top() != top) {
            return Err(ExtensionError::PieceCountMismatch);
        }
        Ok(Self { breakpoints, tables })
    }

    /// A single capacity ruling the whole interval `(lo, hi)`.
    pub fn constant(lo: f64, hi: f64, mu: IntervalCapacity) -> Result<Self, ExtensionError> {
        Self::new(vec![lo, hi], vec![mu])
    }

    pub fn n(&self) -> usize {
        self.tables[0].n()
    }

    pub fn top(&self) -> f64 {
        self.tables[0].top()
    }

    /// The open domain `(t_0, t_k)` the scores must live in.
    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().expect("nonempty"))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn tables(&self) -> &[IntervalCapacity] {
        &self.tables
    }

    /// The capacity ruling levels in `(t_{j-1}, t_j]`, looked up by any
    /// level in that half-open piece.
    pub fn table_for(&self, t: f64) -> &IntervalCapacity {
        let j = self.breakpoints[1..].partition_point(|&b| b < t);
        &self.tables[j.min(self.tables.len() - 1)]
    }
}

/// Level-dependent robust Choquet integral: segment-by-segment integration
/// over the union of the score endpoints and the capacity breakpoints,
/// started at the smallest pessimistic score. Beyond the largest optimistic
/// score the cut is the bottom pair, whose weight is pinned to zero, so
/// truncating there is exact.
pub fn rci_level_dependent(
    x: &IntervalVector,
    mu: &LevelDependentCapacity,
) -> Result<f64, ExtensionError> {
    if x.n() != mu.n() {
        return Err(ExtensionError::LengthMismatch { expected: mu.n(), got: x.n() });
    }
    let (dom_lo, dom_hi) = mu.domain();
    for iv in x.items() {
        for value in [iv.lo(), iv.hi()] {
            if value <= dom_lo || value >= dom_hi {
                return Err(ExtensionError::OutOfDomain { value, lo: dom_lo, hi: dom_hi });
            }
        }
    }
    let start = x.lower().into_iter().fold(f64::INFINITY, f64::min);
    let stop = x.upper().into_iter().fold(f64::NEG_INFINITY, f64::max);
    let mut cuts = x.flattened();
    cuts.extend(mu.breakpoints().iter().copied());
    cuts.retain(|&t| t > start && t < stop);
    cuts.push(start);
    cuts.push(stop);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut acc = start;
    for w in cuts.windows(2) {
        let (u, v) = (w[0], w[1]);
        // No endpoint and no breakpoint lies strictly inside (u, v), so the
        // cut at v and the piece containing v rule the whole segment.
        let pair = ThresholdCut::of(x, v).pair();
        acc += (v - u) * mu.table_for(v).value(&pair);
    }
    Ok(acc)
}
