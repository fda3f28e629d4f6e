//! Interval score vectors and the robust Choquet, Sugeno and Shilkret
//! integrals, together with their classical counterparts.
//!
//! A score vector assigns each criterion a closed interval `[lo, hi]`. At
//! any evaluation level `t` the vector induces the nested coalition pair
//! `({i : lo_i ≥ t}, {i : hi_i ≥ t})`, and the robust integrals aggregate
//! the interval capacity along these threshold cuts. Ties need no special
//! handling: cuts are defined by value comparison, so equal sort values
//! produce identical cuts and zero-width terms vanish.

use crate::capacity::{Capacity, IntervalCapacity};
use crate::lattice::{q_count, CriterionSet, QPair, MAX_CRITERIA};
use crate::mobius::MobiusRepresentation;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralError {
    #[error("interval bounds [{lo}, {hi}] are not ordered finite reals")]
    BadInterval { lo: f64, hi: f64 },
    #[error("vector length {0} out of range (1..={MAX_CRITERIA})")]
    BadLength(usize),
    #[error("vector has {got} components, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("scale factor {0} is negative")]
    NegativeScale(f64),
    #[error("evaluation {value} at criterion {criterion} outside the scale [0, {top}]")]
    OutOfScale { criterion: usize, value: f64, top: f64 },
    #[error("sample count must be at least 1")]
    NoSamples,
}

/// A closed interval `[lo, hi]`; degenerate intervals stand in for exact
/// evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntegralError> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(IntegralError::BadInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn degenerate(x: f64) -> Result<Self, IntegralError> {
        Self::new(x, x)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }
}

/// An alternative's scores: one interval per criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalVector {
    items: Vec<Interval>,
}

impl IntervalVector {
    pub fn new(items: Vec<Interval>) -> Result<Self, IntegralError> {
        if items.is_empty() || items.len() > MAX_CRITERIA {
            return Err(IntegralError::BadLength(items.len()));
        }
        Ok(Self { items })
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self, IntegralError> {
        Self::new(
            bounds
                .iter()
                .map(|&(lo, hi)| Interval::new(lo, hi))
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn degenerate(values: &[f64]) -> Result<Self, IntegralError> {
        Self::new(
            values
                .iter()
                .map(|&v| Interval::degenerate(v))
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[Interval] {
        &self.items
    }

    pub fn get(&self, i: usize) -> Interval {
        self.items[i]
    }

    /// The pessimistic endpoints `(lo_1, …, lo_n)`.
    pub fn lower(&self) -> Vec<f64> {
        self.items.iter().map(|iv| iv.lo).collect()
    }

    /// The optimistic endpoints `(hi_1, …, hi_n)`.
    pub fn upper(&self) -> Vec<f64> {
        self.items.iter().map(|iv| iv.hi).collect()
    }

    /// The flattened `2n`-vector: all pessimistic endpoints followed by all
    /// optimistic ones.
    pub fn flattened(&self) -> Vec<f64> {
        let mut out = self.lower();
        out.extend(self.upper());
        out
    }

    pub fn is_degenerate(&self) -> bool {
        self.items.iter().all(Interval::is_degenerate)
    }
}

fn check_n(x: &IntervalVector, expected: usize) -> Result<(), IntegralError> {
    if x.n() != expected {
        return Err(IntegralError::LengthMismatch { expected, got: x.n() });
    }
    Ok(())
}

fn check_scale(x: &IntervalVector, top: f64) -> Result<(), IntegralError> {
    for (i, iv) in x.items().iter().enumerate() {
        if iv.lo < 0.0 || iv.hi > top {
            return Err(IntegralError::OutOfScale {
                criterion: i,
                value: if iv.lo < 0.0 { iv.lo } else { iv.hi },
                top,
            });
        }
    }
    Ok(())
}

/// Componentwise interval sum.
pub fn iv_add(x: &IntervalVector, y: &IntervalVector) -> Result<IntervalVector, IntegralError> {
    check_n(y, x.n())?;
    IntervalVector::new(
        x.items()
            .iter()
            .zip(y.items())
            .map(|(a, b)| Interval::new(a.lo + b.lo, a.hi + b.hi))
            .collect::<Result<_, _>>()?,
    )
}

/// Nonnegative scaling `a · x` applied to both endpoints.
pub fn iv_scale(a: f64, x: &IntervalVector) -> Result<IntervalVector, IntegralError> {
    if !a.is_finite() || a < 0.0 {
        return Err(IntegralError::NegativeScale(a));
    }
    IntervalVector::new(
        x.items()
            .iter()
            .map(|iv| Interval::new(a * iv.lo, a * iv.hi))
            .collect::<Result<_, _>>()?,
    )
}

/// The interval dominance order: `x ≤ y` iff every pessimistic endpoint of
/// `x` is below the matching one of `y`, and likewise for the optimistic
/// endpoints. A partial order: `[2,5]` and `[3,4]` are incomparable.
pub fn iv_leq(x: &IntervalVector, y: &IntervalVector) -> bool {
    assert_eq!(x.n(), y.n(), "criteria counts differ");
    x.items()
        .iter()
        .zip(y.items())
        .all(|(a, b)| a.lo <= b.lo && a.hi <= b.hi)
}

/// Whether the flattened `2n`-vectors never rank two positions in opposite
/// orders, i.e. a common sorting permutation exists.
pub fn comonotone(x: &IntervalVector, y: &IntervalVector) -> bool {
    assert_eq!(x.n(), y.n(), "criteria counts differ");
    let xs = x.flattened();
    let ys = y.flattened();
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            if (xs[i] - xs[j]) * (ys[i] - ys[j]) < 0.0 {
                return false;
            }
        }
    }
    true
}

/// The generalized indicator vector of a nested pair: `[1,1]` on the sure
/// coalition, `[0,1]` on the merely possible part, `[0,0]` outside.
pub fn indicator(pair: &QPair) -> IntervalVector {
    let items = (0..pair.n())
        .map(|i| {
            if pair.sure().contains(i) {
                Interval { lo: 1.0, hi: 1.0 }
            } else if pair.possible().contains(i) {
                Interval { lo: 0.0, hi: 1.0 }
            } else {
                Interval { lo: 0.0, hi: 0.0 }
            }
        })
        .collect();
    IntervalVector::new(items).expect("pair dimensions are valid")
}

/// The nested coalition pair cut out of a score vector at level `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdCut {
    t: f64,
    sure: CriterionSet,
    possible: CriterionSet,
}

impl ThresholdCut {
    pub fn of(x: &IntervalVector, t: f64) -> Self {
        let n = x.n();
        let mut sure = CriterionSet::empty(n).expect("vector length validated");
        let mut possible = CriterionSet::empty(n).expect("vector length validated");
        for (i, iv) in x.items().iter().enumerate() {
            if iv.lo >= t {
                sure = sure.with(i);
            }
            if iv.hi >= t {
                possible = possible.with(i);
            }
        }
        Self { t, sure, possible }
    }

    pub fn level(&self) -> f64 {
        self.t
    }

    pub fn sure(&self) -> CriterionSet {
        self.sure
    }

    pub fn possible(&self) -> CriterionSet {
        self.possible
    }

    pub fn pair(&self) -> QPair {
        QPair::new(self.sure, self.possible).expect("threshold cuts are nested")
    }
}

fn sorted_flattened(x: &IntervalVector) -> Vec<f64> {
    let mut values = x.flattened();
    values.sort_by(f64::total_cmp);
    values
}

/// Classical Choquet integral (translated form, valid for arbitrary sign):
/// sorted-sum over the level increments plus the smallest score.
pub fn choquet(x: &[f64], nu: &Capacity) -> Result<f64, IntegralError> {
    if x.len() != nu.n() {
        return Err(IntegralError::LengthMismatch { expected: nu.n(), got: x.len() });
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut acc = sorted[0];
    for i in 1..sorted.len() {
        let width = sorted[i] - sorted[i - 1];
        if width > 0.0 {
            let t = sorted[i];
            let mut cut = CriterionSet::empty(nu.n()).expect("capacity n validated");
            for (j, &v) in x.iter().enumerate() {
                if v >= t {
                    cut = cut.with(j);
                }
            }
            acc += width * nu.value(&cut);
        }
    }
    Ok(acc)
}

/// Robust Choquet integral: sorted-sum over the `2n` endpoint levels, each
/// increment weighted by the capacity of the threshold cut at that level.
pub fn rci(x: &IntervalVector, mu: &IntervalCapacity) -> Result<f64, IntegralError> {
    check_n(x, mu.n())?;
    let values = sorted_flattened(x);
    let mut acc = values[0];
    for i in 1..values.len() {
        let width = values[i] - values[i - 1];
        if width > 0.0 {
            acc += width * mu.value(&ThresholdCut::of(x, values[i]).pair());
        }
    }
    Ok(acc)
}

/// Robust Choquet integral as an explicit integral of the step function
/// `t ↦ μ(A_t, B_t)` over `[min lo, max hi]`. The integrand is constant
/// between consecutive endpoint values, so the segment sum is exact.
pub fn rci_riemann(x: &IntervalVector, mu: &IntervalCapacity) -> Result<f64, IntegralError> {
    check_n(x, mu.n())?;
    let mut breaks = sorted_flattened(x);
    breaks.dedup();
    let mut acc = breaks[0];
    for w in breaks.windows(2) {
        // On (u, v) the cut equals the cut at v: the endpoints themselves
        // are the only discontinuities.
        acc += (w[1] - w[0]) * mu.value(&ThresholdCut::of(x, w[1]).pair());
    }
    Ok(acc)
}

/// Midpoint-rule approximation of the defining integral on a uniform grid.
/// A deliberately independent diagnostic: it shares no code with the sorted
/// forms and converges to them as `samples` grows.
pub fn rci_riemann_sampled(
    x: &IntervalVector,
    mu: &IntervalCapacity,
    samples: usize,
) -> Result<f64, IntegralError> {
    check_n(x, mu.n())?;
    if samples == 0 {
        return Err(IntegralError::NoSamples);
    }
    let values = sorted_flattened(x);
    let lo = values[0];
    let hi = *values.last().expect("nonempty");
    if hi == lo {
        return Ok(lo);
    }
    let h = (hi - lo) / samples as f64;
    let mut acc = 0.0;
    for k in 0..samples {
        let t = lo + (k as f64 + 0.5) * h;
        acc += mu.value(&ThresholdCut::of(x, t).pair());
    }
    Ok(lo + acc * h)
}

/// Robust Choquet integral in Möbius coordinates: every pair contributes its
/// mass times the meet of the sure pessimistic scores and the possible
/// optimistic scores. Empty coalitions impose no constraint; the bottom pair
/// carries no mass and is skipped.
pub fn rci_mobius(x: &IntervalVector, m: &MobiusRepresentation) -> Result<f64, IntegralError> {
    check_n(x, m.n())?;
    let n = x.n();
    let mut acc = 0.0;
    for code in 1..q_count(n) {
        let mass = m.values()[code];
        if mass == 0.0 {
            continue;
        }
        let mut meet = f64::INFINITY;
        let mut rest = code;
        for i in 0..n {
            match rest % 3 {
                2 => meet = meet.min(x.get(i).lo).min(x.get(i).hi),
                1 => meet = meet.min(x.get(i).hi),
                _ => {}
            }
            rest /= 3;
        }
        acc += mass * meet;
    }
    Ok(acc)
}

/// Classical Sugeno integral, sorted max–min form over the `n` levels.
pub fn sugeno(x: &[f64], nu: &Capacity) -> Result<f64, IntegralError> {
    if x.len() != nu.n() {
        return Err(IntegralError::LengthMismatch { expected: nu.n(), got: x.len() });
    }
    for (i, &v) in x.iter().enumerate() {
        if v < 0.0 || v > nu.top() {
            return Err(IntegralError::OutOfScale { criterion: i, value: v, top: nu.top() });
        }
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut best = 0.0f64;
    for &t in &sorted {
        let mut cut = CriterionSet::empty(nu.n()).expect("capacity n validated");
        for (j, &v) in x.iter().enumerate() {
            if v >= t {
                cut = cut.with(j);
            }
        }
        best = best.max(t.min(nu.value(&cut)));
    }
    Ok(best)
}

/// Classical Sugeno integral, subset max–min form over all `2^n` coalitions.
/// Permutation-free; always equals the sorted form.
pub fn sugeno_subsets(x: &[f64], nu: &Capacity) -> Result<f64, IntegralError> {
    if x.len() != nu.n() {
        return Err(IntegralError::LengthMismatch { expected: nu.n(), got: x.len() });
    }
    for (i, &v) in x.iter().enumerate() {
        if v < 0.0 || v > nu.top() {
            return Err(IntegralError::OutOfScale { criterion: i, value: v, top: nu.top() });
        }
    }
    let mut best = 0.0f64;
    for mask in 0..1usize << x.len() {
        let set = CriterionSet::from_bits(x.len(), mask as u16).expect("mask in range");
        let meet = set.iter().map(|i| x[i]).fold(f64::INFINITY, f64::min);
        best = best.max(nu.value(&set).min(meet));
    }
    Ok(best)
}

/// Robust Sugeno integral, max–min form over all `3^n` nested pairs.
pub fn rsi(x: &IntervalVector, mu: &IntervalCapacity) -> Result<f64, IntegralError> {
    check_n(x, mu.n())?;
    check_scale(x, mu.top())?;
    let n = x.n();
    let mut best = 0.0f64;
    for code in 0..q_count(n) {
        let mut meet = mu.value_at_code(code);
        let mut rest = code;
        for i in 0..n {
            match rest % 3 {
                2 => meet = meet.min(x.get(i).lo),
                1 => meet = meet.min(x.get(i).hi),
                _ => {}
            }
            rest /= 3;
        }
        best = best.max(meet);
    }
    Ok(best)
}

/// Robust Sugeno integral, sorted max–min form over the `2n` endpoint
/// levels. Equals [`rsi`] on every input.
pub fn rsi_sorted(x: &IntervalVector, mu: &IntervalCapacity) -> Result<f64, IntegralError> {
    check_n(x, mu.n())?;
    check_scale(x, mu.top())?;
    let values = sorted_flattened(x);
    let mut best = 0.0f64;
    for &t in &values {
        let cut = ThresholdCut::of(x, t).pair();
        best = best.max(t.min(mu.value(&cut)));
    }
    Ok(best)
}

/// Classical Shilkret integral. The product form is scale-sensitive, so
/// scores and capacity are normalized by the scale top and the result lives
/// on `[0, 1]`.
pub fn shilkret(x: &[f64], nu: &Capacity) -> Result<f64, IntegralError> {
    if x.len() != nu.n() {
        return Err(IntegralError::LengthMismatch { expected: nu.n(), got: x.len() });
    }
    for (i, &v) in x.iter().enumerate() {
        if v < 0.0 || v > nu.top() {
            return Err(IntegralError::OutOfScale { criterion: i, value: v, top: nu.top() });
        }
    }
    let top = nu.top();
    let mut best = 0.0f64;
    for &t in x {
        let mut cut = CriterionSet::empty(nu.n()).expect("capacity n validated");
        for (j, &v) in x.iter().enumerate() {
            if v >= t {
                cut = cut.with(j);
            }
        }
        best = best.max((t / top) * (nu.value(&cut) / top));
    }
    Ok(best)
}

/// Robust Shilkret integral over all nested pairs, normalized like
/// [`shilkret`].
pub fn robust_shilkret(x: &IntervalVector, mu: &IntervalCapacity) -> Result<f64, IntegralError> {
    check_n(x, mu.n())?;
    check_scale(x, mu.top())?;
    let n = x.n();
    let top = mu.top();
    let mut best = 0.0f64;
    for code in 1..q_count(n) {
        let mut meet = f64::INFINITY;
        let mut rest = code;
        for i in 0..n {
            match rest % 3 {
                2 => meet = meet.min(x.get(i).lo).min(x.get(i).hi),
                1 => meet = meet.min(x.get(i).hi),
                _ => {}
            }
            rest /= 3;
        }
        best = best.max((meet / top) * (mu.value_at_code(code) / top));
    }
    Ok(best)
}
