//! Möbius and zeta transforms on the nested-pair lattice, the
//! characterization of interval capacities in Möbius coordinates, and the
//! classical transforms on `2^N`.
//!
//! The zeta transform sums a table over lower sets; the Möbius transform is
//! its inverse. Two independent inversion routes are provided: the
//! alternating-sign closed form, and recursive subtraction along a linear
//! extension. The closed form is the default for small `n`; the recursive
//! route has a smaller constant and takes over from `n ≥ 6`. Both run over
//! any [`Scalar`], so exactness is available by instantiating at
//! `BigRational`.

use crate::capacity::IntervalCapacity;
use crate::lattice::{q_count, QPair};
use crate::numeric::Scalar;
use thiserror::Error;

/// Absolute tolerance used by float-mode Möbius checks.
pub const MOBIUS_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MobiusError {
    #[error("value table has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("mass at (∅,∅) is {0}, expected 0")]
    EmptyPairMass(f64),
    #[error("total mass is {sum}, expected {expected}")]
    TotalMass { sum: f64, expected: f64 },
}

fn pow3_weights(n: usize) -> Vec<usize> {
    let mut w = vec![1usize; n];
    for i in 1..n {
        w[i] = w[i - 1] * 3;
    }
    w
}

/// Zeta transform: `f(A,B) = Σ g(C,D)` over all `(C,D) ⊆ (A,B)`. The lower
/// set of a pair is exactly the set of codes that are digit-wise ≤ its code,
/// so per-digit prefix sums compute every lower-set sum in `O(3^n · n)`.
pub fn zeta_table<T: Scalar>(n: usize, g: &[T]) -> Vec<T> {
    assert_eq!(g.len(), q_count(n), "table length must be 3^n");
    let mut f = g.to_vec();
    let mut weight = 1usize;
    for _ in 0..n {
        for code in 0..f.len() {
            if !(code / weight).is_multiple_of(3) {
                f[code] = f[code].clone() + f[code - weight].clone();
            }
        }
        weight *= 3;
    }
    f
}

/// Enumerates the codes of the lower set of `code` (digit-wise ≤, base 3),
/// including `code` itself.
fn for_each_lower_code(code: usize, weights: &[usize], mut visit: impl FnMut(usize)) {
    let digits: Vec<usize> = weights.iter().map(|w| (code / w) % 3).collect();
    let mut current = vec![0usize; weights.len()];
    loop {
        let sub: usize = current.iter().zip(weights).map(|(d, w)| d * w).sum();
        visit(sub);
        let mut i = 0;
        loop {
            if i == weights.len() {
                return;
            }
            if current[i] < digits[i] {
                current[i] += 1;
                break;
            }
            current[i] = 0;
            i += 1;
        }
    }
}

/// Möbius transform by recursive subtraction: walking the pairs in a linear
/// extension of the lattice order, `m(A,B) = f(A,B) - Σ m(C,D)` over the
/// proper lower set. Sorting by `(|B|, |A|)` gives such an extension.
pub fn mobius_table<T: Scalar>(n: usize, f: &[T]) -> Vec<T> {
    assert_eq!(f.len(), q_count(n), "table length must be 3^n");
    let weights = pow3_weights(n);
    let mut order: Vec<usize> = (0..f.len()).collect();
    let rank = |code: usize| -> (usize, usize) {
        let mut a = 0;
        let mut b = 0;
        for w in &weights {
            match (code / w) % 3 {
                2 => {
                    a += 1;
                    b += 1;
                }
                1 => b += 1,
                _ => {}
            }
        }
        (b, a)
    };
    order.sort_by_key(|&code| rank(code));
    let mut m = vec![T::zero(); f.len()];
    for &code in &order {
        let mut below = T::zero();
        for_each_lower_code(code, &weights, |sub| {
            if sub != code {
                below = below.clone() + m[sub].clone();
            }
        });
        m[code] = f[code].clone() - below;
    }
    m
}

/// Möbius transform through the alternating-sign closed form: for each pair
/// `(A,B)`, sum `(-1)^{|X|} (-1)^{|B\A| - |D\C|} f(C,D)` over `X ⊆ A` and
/// `(C,D) ⊆ (A\X, B\X)`.
pub fn mobius_table_closed<T: Scalar>(n: usize, f: &[T]) -> Vec<T> {
    assert_eq!(f.len(), q_count(n), "table length must be 3^n");
    let weights = pow3_weights(n);
    let code_of = |a_bits: usize, b_bits: usize| -> usize {
        let mut code = 0;
        for (i, w) in weights.iter().enumerate() {
            if a_bits & (1 << i) != 0 {
                code += 2 * w;
            } else if b_bits & (1 << i) != 0 {
                code += w;
            }
        }
        code
    };
    let mut m = vec![T::zero(); f.len()];
    for (code, slot) in m.iter_mut().enumerate() {
        let mut a_bits = 0usize;
        let mut b_bits = 0usize;
        for (i, w) in weights.iter().enumerate() {
            match (code / w) % 3 {
                2 => {
                    a_bits |= 1 << i;
                    b_bits |= 1 << i;
                }
                1 => b_bits |= 1 << i,
                _ => {}
            }
        }
        let outer_card = (b_bits & !a_bits).count_ones() as usize;
        let mut acc = T::zero();
        // Submask iteration over X ⊆ A, including X = ∅.
        let mut x = a_bits;
        loop {
            let x_card = x.count_ones() as usize;
            let reduced = code_of(a_bits & !x, b_bits & !x);
            for_each_lower_code(reduced, &weights, |sub| {
                let mut inner_card = 0usize;
                for w in &weights {
                    if (sub / w) % 3 == 1 {
                        inner_card += 1;
                    }
                }
                let term = f[sub].clone();
                if (x_card + outer_card + inner_card).is_multiple_of(2) {
                    acc = acc.clone() + term;
                } else {
                    acc = acc.clone() - term;
                }
            });
            if x == 0 {
                break;
            }
            x = (x - 1) & a_bits;
        }
        *slot = acc;
    }
    m
}

/// Classical zeta transform on `2^N`: `f(B) = Σ_{D ⊆ B} g(D)`.
pub fn zeta_classical<T: Scalar>(n: usize, g: &[T]) -> Vec<T> {
    assert_eq!(g.len(), 1 << n, "table length must be 2^n");
    let mut f = g.to_vec();
    for i in 0..n {
        for mask in 0..f.len() {
            if mask & (1 << i) != 0 {
                f[mask] = f[mask].clone() + f[mask ^ (1 << i)].clone();
            }
        }
    }
    f
}

/// Classical Möbius transform on `2^N`: `g(B) = Σ_{D ⊆ B} (-1)^{|B\D|} f(D)`.
pub fn mobius_classical<T: Scalar>(n: usize, f: &[T]) -> Vec<T> {
    assert_eq!(f.len(), 1 << n, "table length must be 2^n");
    let mut g = f.to_vec();
    for i in 0..n {
        for mask in 0..g.len() {
            if mask & (1 << i) != 0 {
                g[mask] = g[mask].clone() - g[mask ^ (1 << i)].clone();
            }
        }
    }
    g
}

/// The Möbius inverse of an interval capacity: a real table over the pair
/// lattice with zero mass at the bottom and total mass equal to the scale
/// top.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusRepresentation {
    n: usize,
    top: f64,
    values: Vec<f64>,
}

impl MobiusRepresentation {
    pub fn new(n: usize, top: f64, values: Vec<f64>) -> Result<Self, MobiusError> {
        let expected = q_count(n);
        if values.len() != expected {
            return Err(MobiusError::WrongLength { expected, got: values.len() });
        }
        if values[0].abs() > MOBIUS_EPSILON {
            return Err(MobiusError::EmptyPairMass(values[0]));
        }
        let sum: f64 = values.iter().sum();
        if (sum - top).abs() > MOBIUS_EPSILON * top.max(1.0) {
            return Err(MobiusError::TotalMass { sum, expected: top });
        }
        Ok(Self { n, top, values })
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
        self.values[pair.index().code()]
    }
}

/// Möbius inverse of a validated capacity. Dispatches to the closed form for
/// small `n` and to recursive subtraction above that, where the closed
/// form's alternating sums get expensive.
pub fn mobius(mu: &IntervalCapacity) -> MobiusRepresentation {
    let n = mu.n();
    let values = if n <= 5 {
        mobius_table_closed(n, mu.values())
    } else {
        mobius_table(n, mu.values())
    };
    MobiusRepresentation::new(n, mu.top(), values)
        .expect("Möbius inverse of a valid capacity satisfies the mass conditions")
}

/// Lower-set sums of a Möbius table; reconstructs the capacity values.
pub fn zeta(m: &MobiusRepresentation) -> Vec<f64> {
    zeta_table(m.n(), m.values())
}

/// A failed condition from the interval-capacity characterization of a
/// Möbius table.
#[derive(Debug, Clone, PartialEq)]
pub enum MobiusViolation {
    /// Nonzero mass at `(∅,∅)`.
    EmptyPairMass { value: f64 },
    /// Total mass differs from the scale top.
    TotalMass { sum: f64, expected: f64 },
    /// Dropping `criterion` from the sure coalition of `pair` would raise
    /// the reconstructed capacity.
    SureGain { criterion: usize, pair: QPair },
    /// Dropping `criterion` from both coalitions of `pair` would raise the
    /// reconstructed capacity.
    PossibleGain { criterion: usize, pair: QPair },
}

/// Checks the four characterization conditions directly on the Möbius table:
/// zero bottom mass, total mass `top`, and the two families of nonnegative
/// partial sums that encode monotonicity. Returns every violation witness.
pub fn interval_capacity_conditions<T: Scalar>(
    n: usize,
    top: &T,
    m: &[T],
) -> Vec<MobiusViolation> {
    assert_eq!(m.len(), q_count(n), "table length must be 3^n");
    let weights = pow3_weights(n);
    let code_of = |c_bits: usize, d_bits: usize| -> usize {
        let mut code = 0;
        for (i, w) in weights.iter().enumerate() {
            if c_bits & (1 << i) != 0 {
                code += 2 * w;
            } else if d_bits & (1 << i) != 0 {
                code += w;
            }
        }
        code
    };
    let mut violations = Vec::new();
    let tol = T::tolerance();
    if m[0].abs_val() > tol {
        violations.push(MobiusViolation::EmptyPairMass { value: m[0].to_f64() });
    }
    let mut sum = T::zero();
    for v in m {
        sum = sum + v.clone();
    }
    if (sum.clone() - top.clone()).abs_val() > tol {
        violations.push(MobiusViolation::TotalMass { sum: sum.to_f64(), expected: top.to_f64() });
    }
    let full = (1usize << n) - 1;
    for a_bits in 0..=full {
        let mut b_bits = a_bits;
        loop {
            // b_bits runs over supersets of a_bits.
            for i in 0..n {
                if a_bits & (1 << i) != 0 {
                    // Condition on dropping i from the sure coalition:
                    // Σ over C with i ∈ C ⊆ A and C ⊆ D ⊆ B.
                    let mut s = T::zero();
                    let reduced = a_bits & !(1 << i);
                    let mut c_rest = reduced;
                    loop {
                        let c = c_rest | (1 << i);
                        let free = b_bits & !c;
                        let mut e = free;
                        loop {
                            s = s + m[code_of(c, c | e)].clone();
                            if e == 0 {
                                break;
                            }
                            e = (e - 1) & free;
                        }
                        if c_rest == 0 {
                            break;
                        }
                        c_rest = (c_rest - 1) & reduced;
                    }
                    if s < -tol.clone() {
                        violations.push(MobiusViolation::SureGain {
                            criterion: i,
                            pair: QPair::from_code(code_of(a_bits, b_bits), n)
                                .expect("valid code"),
                        });
                    }
                }
                if b_bits & (1 << i) != 0 {
                    // Condition on dropping i from both coalitions:
                    // Σ over D with i ∈ D ⊆ B and C ⊆ A ∩ D.
                    let mut s = T::zero();
                    let reduced = b_bits & !(1 << i);
                    let mut d_rest = reduced;
                    loop {
                        let d = d_rest | (1 << i);
                        let free = a_bits & d;
                        let mut c = free;
                        loop {
                            s = s + m[code_of(c, d)].clone();
                            if c == 0 {
                                break;
                            }
                            c = (c - 1) & free;
                        }
                        if d_rest == 0 {
                            break;
                        }
                        d_rest = (d_rest - 1) & reduced;
                    }
                    if s < -tol.clone() {
                        violations.push(MobiusViolation::PossibleGain {
                            criterion: i,
                            pair: QPair::from_code(code_of(a_bits, b_bits), n)
                                .expect("valid code"),
                        });
                    }
                }
            }
            if b_bits == full {
                break;
            }
            b_bits = (b_bits + 1) | a_bits;
        }
    }
    violations
}

/// Whether a Möbius table is the inverse of some interval capacity with the
/// given scale top.
pub fn is_interval_capacity_mobius<T: Scalar>(n: usize, top: &T, m: &[T]) -> bool {
    interval_capacity_conditions(n, top, m).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::IntervalCapacity;
    use crate::lattice::{enumerate_q, CriterionSet};
    use num_rational::BigRational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rational_table(values: &[f64]) -> Vec<BigRational> {
        values.iter().map(|&v| BigRational::from_f64(v)).collect()
    }

    fn random_table(rng: &mut StdRng, len: usize) -> Vec<f64> {
        (0..len).map(|_| (rng.random_range(-64i32..=64) as f64) / 16.0).collect()
    }

    /// Brute-force zeta by the double loop over all pairs of codes.
    fn zeta_brute(n: usize, g: &[f64]) -> Vec<f64> {
        let pairs = enumerate_q(n).unwrap();
        pairs
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| q.leq(p))
                    .map(|(j, _)| g[j])
                    .sum()
            })
            .collect()
    }

    #[test]
    fn zeta_of_point_mass_at_top() {
        let n = 2;
        let mut g = vec![0.0; 9];
        g[8] = 1.0;
        let f = zeta_table(n, &g);
        for (code, &v) in f.iter().enumerate() {
            assert_eq!(v, if code == 8 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn zeta_of_point_mass_at_possible_singleton() {
        // Mass at (∅,{1}) with n = 1 spreads to every pair above it.
        let g = vec![0.0, 1.0, 0.0];
        assert_eq!(zeta_table(1, &g), vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn zeta_matches_double_loop() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_table(&mut rng, q_count(3));
            assert_eq!(zeta_table(3, &g), zeta_brute(3, &g));
        }
    }

    #[test]
    fn mobius_of_zero_is_zero() {
        let f = vec![0.0; q_count(2)];
        assert!(mobius_table(2, &f).iter().all(|&v| v == 0.0));
        assert!(mobius_table_closed(2, &f).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mobius_recovers_point_mass() {
        let g = vec![0.0, 1.0, 0.0];
        let f = zeta_table(1, &g);
        assert_eq!(mobius_table(1, &f), g);
        assert_eq!(mobius_table_closed(1, &f), g);
    }

    #[test]
    fn closed_form_equals_recursive_subtraction() {
        let mut rng = StdRng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..10 {
                let f = rational_table(&random_table(&mut rng, q_count(n)));
                assert_eq!(mobius_table_closed(n, &f), mobius_table(n, &f));
            }
        }
    }

    #[test]
    fn round_trips_are_exact_in_rationals() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 1..=4 {
            for _ in 0..10 {
                let t = rational_table(&random_table(&mut rng, q_count(n)));
                assert_eq!(zeta_table(n, &mobius_table(n, &t)), t);
                assert_eq!(mobius_table(n, &zeta_table(n, &t)), t);
            }
        }
    }

    #[test]
    fn transform_is_linear() {
        let mut rng = StdRng::seed_from_u64(9);
        let n = 3;
        for _ in 0..10 {
            let f1 = rational_table(&random_table(&mut rng, q_count(n)));
            let f2 = rational_table(&random_table(&mut rng, q_count(n)));
            let a = BigRational::from_f64(0.25);
            let b = BigRational::from_f64(-1.5);
            let mixed: Vec<BigRational> = f1
                .iter()
                .zip(&f2)
                .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
                .collect();
            let m1 = mobius_table(n, &f1);
            let m2 = mobius_table(n, &f2);
            let expected: Vec<BigRational> = m1
                .iter()
                .zip(&m2)
                .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
                .collect();
            assert_eq!(mobius_table(n, &mixed), expected);
        }
    }

    #[test]
    fn classical_additive_capacity_has_singleton_masses() {
        let n = 3;
        let w = [0.5, 0.25, 0.25];
        let mut f = vec![0.0; 1 << n];
        for (mask, entry) in f.iter_mut().enumerate() {
            *entry = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| w[i]).sum();
        }
        let g = mobius_classical(n, &f);
        for (mask, &v) in g.iter().enumerate() {
            match mask.count_ones() {
                1 => assert!((v - w[mask.trailing_zeros() as usize]).abs() < 1e-12),
                _ => assert!(v.abs() < 1e-12),
            }
        }
    }

    #[test]
    fn classical_min_capacity_mass_sits_at_full_set() {
        let n = 3;
        let full = (1usize << n) - 1;
        let f: Vec<f64> = (0..1 << n).map(|mask| if mask == full { 1.0 } else { 0.0 }).collect();
        let g = mobius_classical(n, &f);
        for (mask, &v) in g.iter().enumerate() {
            assert_eq!(v, if mask == full { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn classical_round_trip() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in 1..=5 {
            let f = rational_table(&random_table(&mut rng, 1 << n));
            assert_eq!(zeta_classical(n, &mobius_classical(n, &f)), f);
            assert_eq!(mobius_classical(n, &zeta_classical(n, &f)), f);
        }
    }

    #[test]
    fn classical_transform_embeds_into_pair_lattice() {
        // Tables supported on the (∅,B) pairs transform exactly like 2^N
        // tables.
        let mut rng = StdRng::seed_from_u64(13);
        let n = 3;
        let g_cl = random_table(&mut rng, 1 << n);
        let mut g_q = vec![0.0; q_count(n)];
        let embed = |mask: usize| {
            let set = CriterionSet::from_bits(n, mask as u16).unwrap();
            QPair::new(CriterionSet::empty(n).unwrap(), set).unwrap().index().code()
        };
        for (mask, &v) in g_cl.iter().enumerate() {
            g_q[embed(mask)] = v;
        }
        let f_q = zeta_table(n, &g_q);
        let f_cl = zeta_classical(n, &g_cl);
        for (mask, &v) in f_cl.iter().enumerate() {
            assert_eq!(f_q[embed(mask)], v);
        }
        assert_eq!(mobius_table(n, &f_q), g_q);
    }

    fn random_capacity(rng: &mut StdRng, n: usize) -> IntervalCapacity {
        let size = q_count(n);
        let mut values: Vec<f64> =
            (0..size).map(|_| (rng.random_range(0..=32) as f64) / 32.0).collect();
        let weights = pow3_weights(n);
        values[0] = 0.0;
        for code in 1..size {
            let mut v = values[code];
            for w in &weights {
                if (code / w) % 3 > 0 {
                    v = v.max(values[code - w]);
                }
            }
            values[code] = v;
        }
        values[size - 1] = 1.0;
        IntervalCapacity::new(n, 1.0, values).unwrap()
    }

    #[test]
    fn valid_capacities_satisfy_the_characterization() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let mu = random_capacity(&mut rng, 3);
            let m = mobius_table(3, &rational_table(mu.values()));
            let top = BigRational::from_f64(1.0);
            assert!(is_interval_capacity_mobius(3, &top, &m));
        }
    }

    #[test]
    fn nonzero_bottom_mass_is_flagged() {
        let mut m = vec![0.0; q_count(2)];
        m[0] = 0.1;
        m[8] = 0.9;
        let violations = interval_capacity_conditions(2, &1.0, &m);
        assert!(violations
            .iter()
            .any(|v| matches!(v, MobiusViolation::EmptyPairMass { .. })));
    }

    #[test]
    fn characterization_agrees_with_direct_validation() {
        // Random perturbed tables: the Möbius conditions hold exactly when
        // the table itself is a valid capacity.
        let mut rng = StdRng::seed_from_u64(19);
        let n = 3;
        let size = q_count(n);
        let top = BigRational::from_f64(1.0);
        for _ in 0..60 {
            let mut values = random_capacity(&mut rng, n).values().to_vec();
            if rng.random_bool(0.7) {
                let at = rng.random_range(1..size - 1);
                values[at] += (rng.random_range(-8i32..=8) as f64) / 8.0;
                values[at] = values[at].clamp(0.0, 1.0);
            }
            let direct_ok = IntervalCapacity::new(n, 1.0, values.clone()).is_ok();
            let m = mobius_table(n, &rational_table(&values));
            assert_eq!(is_interval_capacity_mobius(n, &top, &m), direct_ok);
            if !direct_ok && values[0] == 0.0 && values[size - 1] == 1.0 {
                let violations = interval_capacity_conditions(n, &top, &m);
                assert!(!violations.is_empty());
            }
        }
    }

    #[test]
    fn representation_constructor_checks_mass() {
        let mut rng = StdRng::seed_from_u64(23);
        let mu = random_capacity(&mut rng, 3);
        let m = mobius(&mu);
        assert_eq!(m.n(), 3);
        let reconstructed = zeta(&m);
        for (a, b) in reconstructed.iter().zip(mu.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let mut bad = m.values().to_vec();
        bad[0] = 0.1;
        assert!(matches!(
            MobiusRepresentation::new(3, 1.0, bad),
            Err(MobiusError::EmptyPairMass(_))
        ));
    }
}
