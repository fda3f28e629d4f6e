//! Interval capacities on the nested-pair lattice and the classical
//! capacities they relate to.
//!
//! An interval capacity assigns a weight in `[0, top]` to every nested pair
//! `(A, B)`, is monotone in the componentwise order, and is pinned to `0` at
//! `(∅, ∅)` and to `top` at `(N, N)`. The scale ceiling `top` defaults to 1
//! but may be any positive value (10- or 30-point grading scales are common
//! inputs).
//!
//! Monotonicity is verified through the two covering moves — dropping one
//! criterion from the sure coalition, or dropping one criterion from both
//! coalitions — which together are equivalent to full pairwise monotonicity.

use crate::lattice::{enumerate_q, q_count, CriterionSet, LatticeError, QPair};
use thiserror::Error;

/// Absolute tolerance for the separability test and for round-trip equality
/// of separable decompositions.
pub const SEP_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CapacityError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("value table has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("scale top must be positive and finite, got {0}")]
    BadTop(f64),
    #[error("boundary value at {at} is {got}, expected {expected}")]
    BadBoundary { at: String, expected: f64, got: f64 },
    #[error("not monotone: value {lower_value} at {lower} exceeds value {upper_value} at {upper}")]
    NotMonotone {
        lower: String,
        upper: String,
        lower_value: f64,
        upper_value: f64,
    },
    #[error("value {value} at {at} outside [0, {top}]")]
    OutOfRange { at: String, value: f64, top: f64 },
    #[error("anchor value at (∅,N) is {0}, which is degenerate (0 or top)")]
    DegenerateAnchor(f64),
    #[error("capacity is not separable")]
    NotSeparable,
    #[error("mixture weight {0} outside [0, 1]")]
    BadAlpha(f64),
    #[error("operands disagree on criteria count or scale top")]
    MixedScales,
    #[error("envelope entries are mutually inconsistent: {0}")]
    InconsistentEntries(String),
}

fn check_value(v: f64, at: &str, top: f64) -> Result<(), CapacityError> {
    if !v.is_finite() || v < 0.0 || v > top {
        return Err(CapacityError::OutOfRange { at: at.to_string(), value: v, top });
    }
    Ok(())
}

/// A classical capacity (fuzzy measure) on `2^N`, scaled to `[0, top]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    n: usize,
    top: f64,
    values: Vec<f64>,
}

impl Capacity {
    pub fn new(n: usize, top: f64, values: Vec<f64>) -> Result<Self, CapacityError> {
        CriterionSet::empty(n)?;
        if !top.is_finite() || top <= 0.0 {
            return Err(CapacityError::BadTop(top));
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(CapacityError::WrongLength { expected, got: values.len() });
        }
        if values[0] != 0.0 {
            return Err(CapacityError::BadBoundary {
                at: "∅".to_string(),
                expected: 0.0,
                got: values[0],
            });
        }
        if values[expected - 1] != top {
            return Err(CapacityError::BadBoundary {
                at: "N".to_string(),
                expected: top,
                got: values[expected - 1],
            });
        }
        for (mask, &v) in values.iter().enumerate() {
            check_value(v, &format!("{:?}", CriterionSet::from_bits(n, mask as u16)?), top)?;
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    let smaller = mask & !(1 << i);
                    if values[smaller] > v {
                        return Err(CapacityError::NotMonotone {
                            lower: format!("{:?}", CriterionSet::from_bits(n, smaller as u16)?),
                            upper: format!("{:?}", CriterionSet::from_bits(n, mask as u16)?),
                            lower_value: values[smaller],
                            upper_value: v,
                        });
                    }
                }
            }
        }
        Ok(Self { n, top, values })
    }

    /// Additive capacity from nonnegative weights summing to `top`.
    pub fn additive(top: f64, weights: &[f64]) -> Result<Self, CapacityError> {
        let n = weights.len();
        CriterionSet::empty(n)?;
        let values: Vec<f64> = (0..1usize << n)
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| weights[i]).sum())
            .collect();
        let mut values = values;
        let full = (1 << n) - 1;
        if (values[full] - top).abs() > 1e-12 * top.max(1.0) {
            return Err(CapacityError::BadBoundary {
                at: "N".to_string(),
                expected: top,
                got: values[full],
            });
        }
        values[full] = top;
        Self::new(n, top, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, set: &CriterionSet) -> f64 {
        assert_eq!(set.n(), self.n, "criteria counts differ");
        self.values[set.bits() as usize]
    }
}

/// An interval capacity: a monotone, normalized weight table over the
/// nested-pair lattice, stored densely in dense-index order.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalCapacity {
    n: usize,
    top: f64,
    values: Vec<f64>,
}

impl IntervalCapacity {
    pub fn new(n: usize, top: f64, values: Vec<f64>) -> Result<Self, CapacityError> {
        CriterionSet::empty(n)?;
        if !top.is_finite() || top <= 0.0 {
            return Err(CapacityError::BadTop(top));
        }
        let expected = q_count(n);
        if values.len() != expected {
            return Err(CapacityError::WrongLength { expected, got: values.len() });
        }
        if values[0] != 0.0 {
            return Err(CapacityError::BadBoundary {
                at: "(∅,∅)".to_string(),
                expected: 0.0,
                got: values[0],
            });
        }
        if values[expected - 1] != top {
            return Err(CapacityError::BadBoundary {
                at: "(N,N)".to_string(),
                expected: top,
                got: values[expected - 1],
            });
        }
        // Covering moves: digit 2→1 drops a criterion from the sure
        // coalition only; digit 2→0 and 1→0 drop it from both.
        let mut weight = 1usize;
        for (code, v) in values.iter().enumerate() {
            check_value(*v, &format!("{:?}", QPair::from_code(code, n)?), top)?;
        }
        for _i in 0..n {
            for code in 0..expected {
                let digit = (code / weight) % 3;
                if digit == 0 {
                    continue;
                }
                let moves: &[usize] = if digit == 2 { &[weight, 2 * weight] } else { &[weight] };
                for &delta in moves {
                    let smaller = code - delta;
                    if values[smaller] > values[code] {
                        return Err(CapacityError::NotMonotone {
                            lower: format!("{:?}", QPair::from_code(smaller, n)?),
                            upper: format!("{:?}", QPair::from_code(code, n)?),
                            lower_value: values[smaller],
                            upper_value: values[code],
                        });
                    }
                }
            }
            weight *= 3;
        }
        Ok(Self { n, top, values })
    }

    /// Monotone completion of a sparse set of pair weights from below:
    /// every pair gets the largest listed weight among the listed pairs it
    /// dominates (and 0 when it dominates none). The boundary pairs are
    /// implied. Fails if the listed weights are mutually inconsistent.
    pub fn from_lower_envelope(
        n: usize,
        top: f64,
        entries: &[(QPair, f64)],
    ) -> Result<Self, CapacityError> {
        Self::from_envelope(n, top, entries, false)
    }

    /// Monotone completion from above: every pair gets the smallest listed
    /// weight among the listed pairs dominating it (and `top` when there is
    /// none above it).
    pub fn from_upper_envelope(
        n: usize,
        top: f64,
        entries: &[(QPair, f64)],
    ) -> Result<Self, CapacityError> {
        Self::from_envelope(n, top, entries, true)
    }

    fn from_envelope(
        n: usize,
        top: f64,
        entries: &[(QPair, f64)],
        from_above: bool,
    ) -> Result<Self, CapacityError> {
        CriterionSet::empty(n)?;
        if !top.is_finite() || top <= 0.0 {
            return Err(CapacityError::BadTop(top));
        }
        let size = q_count(n);
        let mut listed: Vec<Option<f64>> = vec![None; size];
        listed[0] = Some(0.0);
        listed[size - 1] = Some(top);
        for (pair, v) in entries {
            check_value(*v, &format!("{pair:?}"), top)?;
            let code = pair.index().code();
            if let Some(existing) = listed[code] {
                if existing != *v {
                    return Err(CapacityError::InconsistentEntries(format!(
                        "{pair:?} listed twice with values {existing} and {v}"
                    )));
                }
            }
            listed[code] = Some(*v);
        }
        let mut values = vec![if from_above { top } else { 0.0 }; size];
        // Dense-index order is a linear extension of the lattice order, so a
        // single sweep folding covered predecessors (or covering successors,
        // for the dual) computes the envelope.
        let mut weight = vec![1usize; n];
        for i in 1..n {
            weight[i] = weight[i - 1] * 3;
        }
        let codes: Box<dyn Iterator<Item = usize>> = if from_above {
            Box::new((0..size).rev())
        } else {
            Box::new(0..size)
        };
        for code in codes {
            let mut v = listed[code].unwrap_or(if from_above { top } else { 0.0 });
            for w in &weight {
                let digit = (code / w) % 3;
                if from_above {
                    if digit < 2 {
                        v = v.min(values[code + w]);
                    }
                } else if digit > 0 {
                    v = v.max(values[code - w]);
                }
            }
            if let Some(lv) = listed[code] {
                if v != lv {
                    return Err(CapacityError::InconsistentEntries(format!(
                        "listed value {lv} at {:?} conflicts with the envelope value {v}",
                        QPair::from_code(code, n)?
                    )));
                }
            }
            values[code] = v;
        }
        Self::new(n, top, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, pair: &QPair) -> f64 {
        assert_eq!(pair.n(), self.n, "criteria counts differ");
        self.values[pair.index().code()]
    }

    pub fn value_at_code(&self, code: usize) -> f64 {
        self.values[code]
    }

    /// The capacity `ν(A) = μ(A, A)` on the diagonal.
    pub fn diagonal(&self) -> Capacity {
        let values = (0..1usize << self.n)
            .map(|mask| {
                let set = CriterionSet::from_bits(self.n, mask as u16).expect("mask in range");
                self.value(&QPair::new(set, set).expect("diagonal is nested"))
            })
            .collect();
        Capacity::new(self.n, self.top, values).expect("diagonal of a valid capacity is valid")
    }

    /// The pessimistic and optimistic capacities anchored at `(∅, N)`:
    /// the first rescales `μ(A, N)` above the anchor, the second rescales
    /// `μ(∅, B)` below it. Degenerate anchors (0 or `top`) are rejected.
    pub fn lower_upper_derived(&self) -> Result<(Capacity, Capacity), CapacityError> {
        let anchor = self.anchor();
        if anchor == 0.0 || anchor == self.top {
            return Err(CapacityError::DegenerateAnchor(anchor));
        }
        let n = self.n;
        let full = CriterionSet::full(n).expect("n validated");
        let empty = CriterionSet::empty(n).expect("n validated");
        let mut lower = vec![0.0; 1 << n];
        let mut upper = vec![0.0; 1 << n];
        for mask in 0..1usize << n {
            let set = CriterionSet::from_bits(n, mask as u16)?;
            let a_n = self.value(&QPair::new(set, full).expect("A ⊆ N"));
            let e_b = self.value(&QPair::new(empty, set).expect("∅ ⊆ B"));
            lower[mask] = self.top * (a_n - anchor) / (self.top - anchor);
            upper[mask] = self.top * e_b / anchor;
        }
        Ok((
            Capacity::new(n, self.top, lower)?,
            Capacity::new(n, self.top, upper)?,
        ))
    }

    fn anchor(&self) -> f64 {
        let empty = CriterionSet::empty(self.n).expect("n validated");
        let full = CriterionSet::full(self.n).expect("n validated");
        self.value(&QPair::new(empty, full).expect("∅ ⊆ N"))
    }

    /// Whether the capacity splits as `α·ν̲(A) + (1-α)·ν̄(B)`. Equivalent to
    /// the difference `μ(A,B) - μ(∅,B) - μ(A,N) + μ(∅,N)` vanishing on every
    /// pair (within [`SEP_EPSILON`]): fixing `(A', B') = (∅, N)` in the
    /// four-point exchange condition is enough, because the general exchange
    /// follows by adding two instances of the special case.
    pub fn is_separable(&self) -> bool {
        let n = self.n;
        let empty = CriterionSet::empty(n).expect("n validated");
        let full = CriterionSet::full(n).expect("n validated");
        let anchor = self.anchor();
        for pair in enumerate_q(n).expect("n validated") {
            let a_n = self.value(&QPair::new(pair.sure(), full).expect("A ⊆ N"));
            let e_b = self.value(&QPair::new(empty, pair.possible()).expect("∅ ⊆ B"));
            let defect = self.value(&pair) - e_b - a_n + anchor;
            if defect.abs() > SEP_EPSILON {
                return false;
            }
        }
        true
    }

    /// Splits a separable capacity into `(α, ν̲, ν̄)`. The mixture of the
    /// result reproduces the capacity within [`SEP_EPSILON`].
    pub fn decompose_separable(&self) -> Result<SeparableDecomposition, CapacityError> {
        if !self.is_separable() {
            return Err(CapacityError::NotSeparable);
        }
        let anchor = self.anchor();
        let alpha = 1.0 - anchor / self.top;
        let n = self.n;
        let full = CriterionSet::full(n).expect("n validated");
        let empty = CriterionSet::empty(n).expect("n validated");
        let mut lower = vec![0.0; 1 << n];
        let mut upper = vec![0.0; 1 << n];
        for mask in 0..1usize << n {
            let set = CriterionSet::from_bits(n, mask as u16)?;
            let a_n = self.value(&QPair::new(set, full).expect("A ⊆ N"));
            let e_b = self.value(&QPair::new(empty, set).expect("∅ ⊆ B"));
            lower[mask] = if anchor == self.top {
                // α = 0: the pessimistic side carries no weight; any valid
                // capacity will do, the optimistic one is the natural choice.
                self.top * e_b / anchor
            } else {
                self.top * (a_n - anchor) / (self.top - anchor)
            };
            upper[mask] = if anchor == 0.0 {
                self.top * a_n / self.top
            } else {
                self.top * e_b / anchor
            };
        }
        SeparableDecomposition::new(
            alpha,
            Capacity::new(n, self.top, lower)?,
            Capacity::new(n, self.top, upper)?,
        )
    }
}

/// A mixture presentation `μ(A,B) = α·ν̲(A) + (1-α)·ν̄(B)` of a separable
/// interval capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableDecomposition {
    alpha: f64,
    lower: Capacity,
    upper: Capacity,
}

impl SeparableDecomposition {
    pub fn new(alpha: f64, lower: Capacity, upper: Capacity) -> Result<Self, CapacityError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(CapacityError::BadAlpha(alpha));
        }
        if lower.n() != upper.n() || lower.top() != upper.top() {
            return Err(CapacityError::MixedScales);
        }
        Ok(Self { alpha, lower, upper })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lower(&self) -> &Capacity {
        &self.lower
    }

    pub fn upper(&self) -> &Capacity {
        &self.upper
    }

    /// The interval capacity defined by the mixture. Always valid: the
    /// mixture of monotone tables is monotone, and boundary entries are
    /// pinned exactly.
    pub fn mixture(&self) -> IntervalCapacity {
        let n = self.lower.n();
        let top = self.lower.top();
        let size = q_count(n);
        let mut values = vec![0.0; size];
        for (code, pair) in enumerate_q(n).expect("n validated").into_iter().enumerate() {
            let v = self.alpha * self.lower.value(&pair.sure())
                + (1.0 - self.alpha) * self.upper.value(&pair.possible());
            values[code] = v.clamp(0.0, top);
        }
        values[0] = 0.0;
        values[size - 1] = top;
        IntervalCapacity::new(n, top, values).expect("mixture capacities are always valid")
    }
}
