//! Bipolar robust Choquet integral.
//!
//! A bipolar quadruple splits the criteria into a sure-positive coalition
//! inside a possible-positive one, and a sure-negative coalition inside a
//! possible-negative one, with the possible-positive and possible-negative
//! parts disjoint. A bipolar interval capacity weighs quadruples in
//! `[-1, 1]`, increasing in the positive pair and decreasing in the negative
//! pair.
//!
//! The integral runs over positive levels `t` with mirrored cuts: at level
//! `t` the quadruple collects `{lo_i ≥ t}`, `{hi_i ≥ t}`, `{lo_i ≤ -t}` and
//! `{hi_i ≤ -t}`. An interval straddling both thresholds would land in both
//! possible coalitions; such criteria are dropped from both sides at that
//! level, which keeps the quadruple admissible and preserves the mirror
//! symmetry.

use super::ExtensionError;
use crate::capacity::IntervalCapacity;
use crate::integrals::IntervalVector;
use crate::lattice::{CriterionSet, QPair};
use std::collections::BTreeMap;

/// An element of the bipolar quadruple lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipolarQuad {
    sure_pos: CriterionSet,
    possible_pos: CriterionSet,
    possible_neg: CriterionSet,
    sure_neg: CriterionSet,
}

impl BipolarQuad {
    pub fn new(
        sure_pos: CriterionSet,
        possible_pos: CriterionSet,
        possible_neg: CriterionSet,
        sure_neg: CriterionSet,
    ) -> Result<Self, ExtensionError> {
        if !sure_pos.is_subset(&possible_pos) || !sure_neg.is_subset(&possible_neg) {
            return Err(ExtensionError::NotNestedQuad);
        }
        if !possible_pos.intersection(&possible_neg).is_empty() {
            return Err(ExtensionError::OverlappingPoles);
        }
        Ok(Self { sure_pos, possible_pos, possible_neg, sure_neg })
    }

    /// Purely positive quadruple from a nested pair.
    pub fn positive(pair: &QPair) -> Self {
        let empty = CriterionSet::empty(pair.n()).expect("n validated");
        Self {
            sure_pos: pair.sure(),
            possible_pos: pair.possible(),
            possible_neg: empty,
            sure_neg: empty,
        }
    }

    pub fn n(&self) -> usize {
        self.sure_pos.n()
    }

    pub fn sure_pos(&self) -> CriterionSet {
        self.sure_pos
    }

    pub fn possible_pos(&self) -> CriterionSet {
        self.possible_pos
    }

    pub fn possible_neg(&self) -> CriterionSet {
        self.possible_neg
    }

    pub fn sure_neg(&self) -> CriterionSet {
        self.sure_neg
    }

    /// Swaps the positive and negative roles, preserving sure/possible.
    pub fn mirror(&self) -> Self {
        Self {
            sure_pos: self.sure_neg,
            possible_pos: self.possible_neg,
            possible_neg: self.possible_pos,
            sure_neg: self.sure_pos,
        }
    }

    /// The bipolar dominance order: larger positive coalitions and smaller
    /// negative ones.
    pub fn leq(&self, other: &Self) -> bool {
        self.sure_pos.is_subset(&other.sure_pos)
            && self.possible_pos.is_subset(&other.possible_pos)
            && other.possible_neg.is_subset(&self.possible_neg)
            && other.sure_neg.is_subset(&self.sure_neg)
    }

    /// Dense base-5 code: per criterion 0 = absent, 1 = possible positive,
    /// 2 = sure positive, 3 = possible negative, 4 = sure negative.
    pub fn code(&self) -> u64 {
        let mut code = 0u64;
        let mut weight = 1u64;
        for i in 0..self.n() {
            let digit = if self.sure_pos.contains(i) {
                2
            } else if self.possible_pos.contains(i) {
                1
            } else if self.sure_neg.contains(i) {
                4
            } else if self.possible_neg.contains(i) {
                3
            } else {
                0
            };
            code += digit * weight;
            weight *= 5;
        }
        code
    }
}

enum Repr {
    /// Sparse entries completed from below: a quadruple takes the largest
    /// listed weight among the listed quadruples it dominates, or -1.
    Sparse {
        entries: Vec<(BipolarQuad, f64)>,
        by_code: BTreeMap<u64, f64>,
    },
    /// Antisymmetric difference of a unit-scale interval capacity:
    /// `μ(pos pair) - μ(neg pair)`.
    Symmetric { base: IntervalCapacity },
}

/// A bipolar interval capacity.
pub struct BipolarIntervalCapacity {
    n: usize,
    repr: Repr,
}

impl BipolarIntervalCapacity {
    /// Builds from sparse entries. The three boundary quadruples are implied
    /// (and may be listed, with the right values); all listed entries must be
    /// pairwise monotone in the bipolar order.
    pub fn from_entries(
        n: usize,
        mut entries: Vec<(BipolarQuad, f64)>,
    ) -> Result<Self, ExtensionError> {
        let empty = CriterionSet::empty(n)?;
        let full = CriterionSet::full(n)?;
        let bottom = BipolarQuad::new(empty, empty, full, full)?;
        let zero = BipolarQuad::new(empty, empty, empty, empty)?;
        let top = BipolarQuad::new(full, full, empty, empty)?;
        for implied in [(bottom, -1.0), (zero, 0.0), (top, 1.0)] {
            if !entries.iter().any(|(q, _)| *q == implied.0) {
                entries.push(implied);
            }
        }
        let mut by_code = BTreeMap::new();
        for (quad, v) in &entries {
            if quad.n() != n {
                return Err(ExtensionError::LengthMismatch { expected: n, got: quad.n() });
            }
            if !(-1.0..=1.0).contains(v) {
                return Err(ExtensionError::OutOfBipolarRange(*v));
            }
            if let Some(old) = by_code.insert(quad.code(), *v) {
                if old != *v {
                    return Err(ExtensionError::NotMonotoneBipolar(format!(
                        "{quad:?} listed twice with values {old} and {v}"
                    )));
                }
            }
        }
        for (q1, v1) in &entries {
            for (q2, v2) in &entries {
                if q1.leq(q2) && v1 > v2 {
                    return Err(ExtensionError::NotMonotoneBipolar(format!(
                        "{v1} at {q1:?} exceeds {v2} at {q2:?}"
                    )));
                }
            }
        }
        Ok(Self { n, repr: Repr::Sparse { entries, by_code } })
    }

    /// Embeds an interval capacity on the purely positive quadruples,
    /// normalized to unit scale. On nonnegative score vectors the bipolar
    /// integral then coincides with the plain robust Choquet integral.
    pub fn embed_nonnegative(mu: &IntervalCapacity) -> Self {
        let n = mu.n();
        let entries = crate::lattice::enumerate_q(n)
            .expect("n validated")
            .into_iter()
            .map(|pair| (BipolarQuad::positive(&pair), mu.value(&pair) / mu.top()))
            .collect();
        Self::from_entries(n, entries).expect("embedded capacities are monotone")
    }

    /// The antisymmetric capacity `μ(positive pair) - μ(negative pair)`,
    /// with `μ` normalized to unit scale. Satisfies
    /// `value(mirror(q)) = -value(q)`.
    pub fn symmetric_difference(mu: &IntervalCapacity) -> Self {
        Self { n: mu.n(), repr: Repr::Symmetric { base: mu.clone() } }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, quad: &BipolarQuad) -> f64 {
        assert_eq!(quad.n(), self.n, "criteria counts differ");
        match &self.repr {
            Repr::Sparse { entries, by_code } => {
                if let Some(v) = by_code.get(&quad.code()) {
                    return *v;
                }
                entries
                    .iter()
                    .filter(|(q, _)| q.leq(quad))
                    .map(|(_, v)| *v)
                    .fold(-1.0, f64::max)
            }
            Repr::Symmetric { base } => {
                let pos = QPair::new(quad.sure_pos, quad.possible_pos).expect("nested");
                let neg = QPair::new(quad.sure_neg, quad.possible_neg).expect("nested");
                (base.value(&pos) - base.value(&neg)) / base.top()
            }
        }
    }
}

/// Bipolar robust Choquet integral: the integral over positive levels of the
/// capacity of the mirrored threshold cuts, summed segment-by-segment (the
/// integrand is a step function breaking only at endpoint magnitudes).
pub fn bipolar_rci(
    x: &IntervalVector,
    mu: &BipolarIntervalCapacity,
) -> Result<f64, ExtensionError> {
    if x.n() != mu.n() {
        return Err(ExtensionError::LengthMismatch { expected: mu.n(), got: x.n() });
    }
    let n = x.n();
    let mut breaks: Vec<f64> = x
        .flattened()
        .into_iter()
        .map(f64::abs)
        .filter(|&v| v > 0.0)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &level in &breaks {
        let mut sure_pos = CriterionSet::empty(n)?;
        let mut possible_pos = CriterionSet::empty(n)?;
        let mut possible_neg = CriterionSet::empty(n)?;
        let mut sure_neg = CriterionSet::empty(n)?;
        for (i, iv) in x.items().iter().enumerate() {
            if iv.lo() >= level {
                sure_pos = sure_pos.with(i);
            }
            if iv.hi() >= level {
                possible_pos = possible_pos.with(i);
            }
            if iv.lo() <= -level {
                possible_neg = possible_neg.with(i);
            }
            if iv.hi() <= -level {
                sure_neg = sure_neg.with(i);
            }
        }
        // Criteria whose interval spans past both thresholds are ambiguous
        // at this level; drop them from both possible coalitions. They are
        // never in a sure coalition here, since that would put one endpoint
        // on each side of its own partner.
        let overlap = possible_pos.intersection(&possible_neg);
        if !overlap.is_empty() {
            possible_pos = possible_pos.difference(&overlap);
            possible_neg = possible_neg.difference(&overlap);
        }
        let quad = BipolarQuad::new(sure_pos, possible_pos, possible_neg, sure_neg)?;
        acc += (level - prev) * mu.value(&quad);
        prev = level;
    }
    Ok(acc)
}
