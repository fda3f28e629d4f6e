//! Criteria sets and the lattice of nested coalition pairs.
//!
//! A criterion is an index in `0..n`; a coalition is a bitmask-backed subset
//! of the criteria. The central object is the pair `(A, B)` with
//! `A ⊆ B ⊆ N`: `A` collects the criteria satisfied for sure, `B` those
//! possibly satisfied. Pairs are ordered componentwise, which makes them a
//! distributive lattice under componentwise union and intersection.
//!
//! Each pair also gets a dense index in `0..3^n` (one base-3 digit per
//! criterion: 2 = in `A`, 1 = in `B \ A`, 0 = outside `B`) so that value
//! tables over the lattice can be stored as flat vectors.

use std::fmt;
use thiserror::Error;

/// Hard cap on the criteria count, so bitmasks fit in a `u16` and dense
/// tables (`3^n` entries) stay addressable.
pub const MAX_CRITERIA: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("criteria count {0} out of range (1..={MAX_CRITERIA})")]
    BadCriteriaCount(usize),
    #[error("criterion index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("sure coalition is not contained in the possible coalition")]
    NotNested,
    #[error("pair code {code} out of range for n = {n} (must be < 3^n)")]
    CodeOutOfRange { code: usize, n: usize },
}

/// Number of nested pairs over `n` criteria, i.e. `3^n`.
pub fn q_count(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// A subset of the criteria `{0, …, n-1}`, backed by a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CriterionSet {
    bits: u16,
    n: u8,
}

impl CriterionSet {
    fn check_n(n: usize) -> Result<(), LatticeError> {
        if n == 0 || n > MAX_CRITERIA {
            return Err(LatticeError::BadCriteriaCount(n));
        }
        Ok(())
    }

    /// The empty coalition over `n` criteria.
    pub fn empty(n: usize) -> Result<Self, LatticeError> {
        Self::check_n(n)?;
        Ok(Self { bits: 0, n: n as u8 })
    }

    /// The full coalition `N` over `n` criteria.
    pub fn full(n: usize) -> Result<Self, LatticeError> {
        Self::check_n(n)?;
        Ok(Self {
            bits: if n == 16 { u16::MAX } else { (1u16 << n) - 1 },
            n: n as u8,
        })
    }

    /// Builds a coalition from a raw bitmask, rejecting bits at or above `n`.
    pub fn from_bits(n: usize, bits: u16) -> Result<Self, LatticeError> {
        let full = Self::full(n)?;
        if bits & !full.bits != 0 {
            return Err(LatticeError::IndexOutOfRange {
                index: (15 - bits.leading_zeros()) as usize,
                n,
            });
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Builds a coalition from explicit criterion indices.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self, LatticeError> {
        let mut set = Self::empty(n)?;
        for &i in indices {
            if i >= n {
                return Err(LatticeError::IndexOutOfRange { index: i, n });
            }
            set.bits |= 1 << i;
        }
        Ok(set)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n() && self.bits & (1 << i) != 0
    }

    /// Cardinality of the coalition.
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "criteria counts differ");
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "criteria counts differ");
        Self { bits: self.bits | other.bits, n: self.n }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "criteria counts differ");
        Self { bits: self.bits & other.bits, n: self.n }
    }

    pub fn difference(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "criteria counts differ");
        Self { bits: self.bits & !other.bits, n: self.n }
    }

    /// Returns the set with criterion `i` added.
    pub fn with(&self, i: usize) -> Self {
        assert!(i < self.n(), "criterion index out of range");
        Self { bits: self.bits | (1 << i), n: self.n }
    }

    /// Returns the set with criterion `i` removed.
    pub fn without(&self, i: usize) -> Self {
        Self { bits: self.bits & !(1 << i), n: self.n }
    }

    /// Iterates over the member criterion indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.bits;
        (0..self.n()).filter(move |i| bits & (1 << i) != 0)
    }

    /// Enumerates all `2^n` subsets of `{0, …, n-1}` in bitmask order.
    pub fn enumerate_all(n: usize) -> Result<impl Iterator<Item = CriterionSet>, LatticeError> {
        Self::check_n(n)?;
        Ok((0..1usize << n).map(move |bits| CriterionSet { bits: bits as u16, n: n as u8 }))
    }

    fn label_list(&self, labels: &[String]) -> String {
        self.iter()
            .map(|i| labels.get(i).cloned().unwrap_or_else(|| i.to_string()))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for CriterionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A nested coalition pair `(A, B)` with `A ⊆ B`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QPair {
    a: CriterionSet,
    b: CriterionSet,
}

/// Dense index of a pair: a base-3 code in `0..3^n`. Digit `i` is 2 when
/// criterion `i` is in `A`, 1 when it is in `B \ A`, 0 when it is outside
/// `B`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QIndex {
    code: usize,
}

impl QIndex {
    pub fn code(&self) -> usize {
        self.code
    }
}

impl QPair {
    /// Builds the pair, rejecting non-nested coalitions.
    pub fn new(a: CriterionSet, b: CriterionSet) -> Result<Self, LatticeError> {
        assert_eq!(a.n, b.n, "criteria counts differ");
        if !a.is_subset(&b) {
            return Err(LatticeError::NotNested);
        }
        Ok(Self { a, b })
    }

    /// The bottom element `(∅, ∅)`.
    pub fn bottom(n: usize) -> Result<Self, LatticeError> {
        let empty = CriterionSet::empty(n)?;
        Ok(Self { a: empty, b: empty })
    }

    /// The top element `(N, N)`.
    pub fn top(n: usize) -> Result<Self, LatticeError> {
        let full = CriterionSet::full(n)?;
        Ok(Self { a: full, b: full })
    }

    /// The sure coalition `A`.
    pub fn sure(&self) -> CriterionSet {
        self.a
    }

    /// The possible coalition `B`.
    pub fn possible(&self) -> CriterionSet {
        self.b
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// Componentwise order: `(A,B) ⊆ (C,D)` iff `A ⊆ C` and `B ⊆ D`.
    pub fn leq(&self, other: &Self) -> bool {
        self.a.is_subset(&other.a) && self.b.is_subset(&other.b)
    }

    /// Lattice supremum: componentwise union.
    pub fn union(&self, other: &Self) -> Self {
        Self { a: self.a.union(&other.a), b: self.b.union(&other.b) }
    }

    /// Lattice infimum: componentwise intersection.
    pub fn intersection(&self, other: &Self) -> Self {
        Self { a: self.a.intersection(&other.a), b: self.b.intersection(&other.b) }
    }

    /// Dense base-3 index of this pair.
    pub fn index(&self) -> QIndex {
        let mut code = 0usize;
        let mut weight = 1usize;
        for i in 0..self.n() {
            let digit = if self.a.contains(i) {
                2
            } else if self.b.contains(i) {
                1
            } else {
                0
            };
            code += digit * weight;
            weight *= 3;
        }
        QIndex { code }
    }

    /// Inverse of [`QPair::index`].
    pub fn from_index(index: QIndex, n: usize) -> Result<Self, LatticeError> {
        Self::from_code(index.code, n)
    }

    /// Decodes a raw base-3 code into a pair.
    pub fn from_code(code: usize, n: usize) -> Result<Self, LatticeError> {
        if code >= q_count(n) {
            return Err(LatticeError::CodeOutOfRange { code, n });
        }
        let mut a = CriterionSet::empty(n)?;
        let mut b = CriterionSet::empty(n)?;
        let mut rest = code;
        for i in 0..n {
            match rest % 3 {
                2 => {
                    a = a.with(i);
                    b = b.with(i);
                }
                1 => b = b.with(i),
                _ => {}
            }
            rest /= 3;
        }
        Ok(Self { a, b })
    }

    /// Renders the pair with user-facing labels, e.g. `A={M,Ph};B={M,Ph,L}`.
    pub fn render(&self, labels: &[String]) -> String {
        format!("A={{{}}};B={{{}}}", self.a.label_list(labels), self.b.label_list(labels))
    }
}

impl fmt::Debug for QPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?})", self.a, self.b)
    }
}

/// Enumerates all `3^n` pairs in dense-index order.
pub fn enumerate_q(n: usize) -> Result<Vec<QPair>, LatticeError> {
    CriterionSet::check_n(n)?;
    (0..q_count(n)).map(|code| QPair::from_code(code, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, idx: &[usize]) -> CriterionSet {
        CriterionSet::from_indices(n, idx).unwrap()
    }

    fn pair(n: usize, a: &[usize], b: &[usize]) -> QPair {
        QPair::new(set(n, a), set(n, b)).unwrap()
    }

    #[test]
    fn pair_construction() {
        assert!(QPair::new(set(2, &[]), set(2, &[])).is_ok());
        assert!(QPair::new(set(2, &[0]), set(2, &[0, 1])).is_ok());
        assert_eq!(
            QPair::new(set(2, &[0, 1]), set(2, &[0])),
            Err(LatticeError::NotNested)
        );
    }

    #[test]
    fn order_examples() {
        let bottom = QPair::bottom(2).unwrap();
        for q in enumerate_q(2).unwrap() {
            assert!(bottom.leq(&q));
        }
        assert!(pair(2, &[0], &[0, 1]).leq(&pair(2, &[0, 1], &[0, 1])));
        assert!(!pair(2, &[0], &[0]).leq(&pair(2, &[], &[0, 1])));
    }

    #[test]
    fn union_intersection_examples() {
        let p = pair(3, &[0], &[0, 1]);
        let q = pair(3, &[1], &[1, 2]);
        assert_eq!(p.union(&q), pair(3, &[0, 1], &[0, 1, 2]));
        assert_eq!(p.intersection(&q), pair(3, &[], &[1]));
    }

    #[test]
    fn enumeration_counts() {
        let q1 = enumerate_q(1).unwrap();
        assert_eq!(q1.len(), 3);
        assert_eq!(q1[0], QPair::bottom(1).unwrap());
        assert_eq!(q1[1], pair(1, &[], &[0]));
        assert_eq!(q1[2], pair(1, &[0], &[0]));

        assert_eq!(enumerate_q(2).unwrap().len(), 9);

        let q3 = enumerate_q(3).unwrap();
        assert_eq!(q3.len(), 27);
        for p in &q3 {
            assert!(p.sure().is_subset(&p.possible()));
        }
        // Matches the filter over all subset pairs with A ⊆ B.
        let mut count = 0;
        for a in 0u16..8 {
            for b in 0u16..8 {
                if a & !b == 0 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 27);
    }

    #[test]
    fn index_round_trip() {
        assert_eq!(QPair::bottom(3).unwrap().index().code(), 0);
        assert_eq!(pair(1, &[0], &[0]).index().code(), 2);
        for (code, p) in enumerate_q(3).unwrap().into_iter().enumerate() {
            assert_eq!(p.index().code(), code);
            assert_eq!(QPair::from_code(code, 3).unwrap(), p);
        }
        assert_eq!(
            QPair::from_code(27, 3),
            Err(LatticeError::CodeOutOfRange { code: 27, n: 3 })
        );
    }

    #[test]
    fn union_is_least_upper_bound_and_dual() {
        // Exhaustive for n ≤ 4: union is the unique least upper bound and
        // intersection the unique greatest lower bound under leq.
        for n in 1..=4 {
            let pairs = enumerate_q(n).unwrap();
            for p in &pairs {
                for q in &pairs {
                    let sup = p.union(q);
                    assert!(p.leq(&sup) && q.leq(&sup));
                    let inf = p.intersection(q);
                    assert!(inf.leq(p) && inf.leq(q));
                    for r in &pairs {
                        if p.leq(r) && q.leq(r) {
                            assert!(sup.leq(r));
                        }
                        if r.leq(p) && r.leq(q) {
                            assert!(r.leq(&inf));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn distributivity_exhaustive() {
        for n in 1..=3 {
            let pairs = enumerate_q(n).unwrap();
            for p in &pairs {
                for q in &pairs {
                    for r in &pairs {
                        assert_eq!(
                            p.union(&q.intersection(r)),
                            p.union(q).intersection(&p.union(r))
                        );
                        assert_eq!(
                            p.intersection(&q.union(r)),
                            p.intersection(q).union(&p.intersection(r))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn criteria_count_limits() {
        assert!(matches!(
            CriterionSet::empty(17),
            Err(LatticeError::BadCriteriaCount(17))
        ));
        assert!(matches!(
            CriterionSet::empty(0),
            Err(LatticeError::BadCriteriaCount(0))
        ));
        assert!(CriterionSet::full(16).unwrap().is_full());
        assert!(matches!(
            CriterionSet::from_indices(3, &[3]),
            Err(LatticeError::IndexOutOfRange { index: 3, n: 3 })
        ));
    }

    #[test]
    fn rendering() {
        let labels: Vec<String> = ["M", "Ph", "L"].iter().map(|s| s.to_string()).collect();
        let p = pair(3, &[0, 1], &[0, 1, 2]);
        assert_eq!(p.render(&labels), "A={M,Ph};B={M,Ph,L}");
        assert_eq!(QPair::bottom(3).unwrap().render(&labels), "A={};B={}");
    }
}
