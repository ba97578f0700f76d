//! Dynamical zeta functions, truncated power series, and zeta functions
//! twisted by a 1-block automorphism.

mod poly;
mod series;
mod twist;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::sft::{periodic_counts, Sft};

pub use poly::{IntPoly, RationalFunction};
pub use series::PowerSeries;
pub use twist::{make_twist, twisted_count, twisted_counts, twisted_log_derivative, twisted_zeta_series, TwistData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("the shift is empty")]
    EmptyShift,
    #[error("characteristic polynomial coefficient {index} is not an integer: {value}")]
    IntegralityViolation { index: usize, value: String },
    #[error("the state map is not a bijection")]
    NotBijective,
    #[error("the state map does not preserve transitions (witness {x} -> {y})")]
    NotAutomorphism { x: String, y: String },
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("rational function has a pole at t = 0")]
    PoleAtZero,
}

// det(I - tA) by Faddeev–LeVerrier: M_1 = A, c_k = -tr(M_k)/k,
// M_{k+1} = A (M_k + c_k I). The empty matrix gives 1.
fn det_reversed(x: &Sft) -> Result<IntPoly, ZetaError> {
    let n = x.len();
    let a: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from(x.matrix()[i][j]))).collect()).collect();
    let mul = |m: &[Vec<BigRational>]| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .filter(|&k| !a[i][k].is_zero())
                            .fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &m[k][j])
                    })
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![BigInt::from(1)];
    let mut m = a.clone();
    for k in 1..=n {
        let trace: BigRational = (0..n).fold(BigRational::zero(), |acc, i| acc + &m[i][i]);
        let c = -trace / BigRational::from_integer(BigInt::from(k));
        if !c.is_integer() {
            return Err(ZetaError::IntegralityViolation { index: k, value: c.to_string() });
        }
        if k < n {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c;
            }
            m = mul(&m);
        }
        coeffs.push(c.to_integer());
    }
    Ok(IntPoly::new(coeffs))
}

/// `det(I - tA)`, of degree at most the number of states.
pub fn char_poly_reversed(x: &Sft) -> Result<IntPoly, ZetaError> {
    if x.is_empty() {
        return Err(ZetaError::EmptyShift);
    }
    det_reversed(x)
}

/// `Z(X, t) = 1 / det(I - tA)`.
pub fn dynamical_zeta(x: &Sft) -> Result<RationalFunction, ZetaError> {
    RationalFunction::new(IntPoly::one(), char_poly_reversed(x)?)
}

/// `exp(sum_{n>=1} N(X, n) t^n / n)` through `t^m`, checked against the
/// expansion of `1 / det(I - tA)`.
pub fn zeta_series(x: &Sft, m: usize) -> PowerSeries {
    let counts: Vec<BigInt> = periodic_counts(x, m).into_iter().map(BigInt::from).collect();
    let series = PowerSeries::exp_of_counts(&counts, m);
    let det = det_reversed(x).expect("integer matrix has an integral characteristic polynomial");
    let closed = RationalFunction::new(IntPoly::one(), det).and_then(|r| r.series(m)).expect("det(I - tA) is 1 at t = 0");
    assert_eq!(series, closed, "zeta series disagrees with 1/det(I - tA)");
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::fixtures::*;
    use crate::sft::periodic_count;
    use proptest::prelude::*;

    // det(I - tA) by the Leibniz expansion over permutations, collecting powers of t.
    fn leibniz_det(x: &Sft) -> IntPoly {
        let n = x.len();
        let mut total = vec![BigInt::zero(); n + 1];
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            // product of (delta_ij - t a_ij) as a polynomial
            let mut prod = vec![BigInt::zero(); n + 1];
            prod[0] = BigInt::from(1);
            for i in 0..n {
                let j = perm[i];
                let d = BigInt::from(u8::from(i == j));
                let a = -BigInt::from(x.matrix()[i][j]);
                let mut next = vec![BigInt::zero(); n + 1];
                for k in 0..n {
                    next[k] += &prod[k] * &d;
                    next[k + 1] += &prod[k] * &a;
                }
                prod = next;
            }
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            for k in 0..=n {
                if inversions % 2 == 0 {
                    total[k] += &prod[k];
                } else {
                    total[k] -= &prod[k];
                }
            }
            // next permutation in lexicographic order
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        IntPoly::new(total)
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly_reversed(&golden_mean()).unwrap(), IntPoly::from_i64(&[1, -1, -1]));
        assert_eq!(char_poly_reversed(&full_shift(2)).unwrap(), IntPoly::from_i64(&[1, -2]));
        for n in 1..6 {
            assert_eq!(char_poly_reversed(&cycle(n)).unwrap(), IntPoly::one_minus_power(n));
        }
        assert_eq!(char_poly_reversed(&Sft::empty()).unwrap_err(), ZetaError::EmptyShift);
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(dynamical_zeta(&golden_mean()).unwrap().to_string(), "1 / (1 - t - t^2)");
        assert_eq!(dynamical_zeta(&full_shift(2)).unwrap().to_string(), "1 / (1 - 2*t)");
        assert_eq!(dynamical_zeta(&full_shift(1)).unwrap().to_string(), "1 / (1 - t)");
        assert_eq!(zeta_series(&golden_mean(), 4), PowerSeries::from_integers(&[1, 1, 2, 3, 5]));
        assert_eq!(zeta_series(&full_shift(2), 3), PowerSeries::from_integers(&[1, 2, 4, 8]));
        assert_eq!(zeta_series(&golden_mean(), 0), PowerSeries::from_integers(&[1]));
        assert_eq!(zeta_series(&Sft::empty(), 2), PowerSeries::from_integers(&[1, 0, 0]));
    }

    #[test]
    fn matches_leibniz_on_all_three_state_graphs() {
        for bits in 0..(1u64 << 9) {
            let x = from_bits(3, bits);
            assert_eq!(char_poly_reversed(&x).unwrap(), leibniz_det(&x), "bits {bits}");
        }
    }

    #[test]
    fn newton_identities() {
        // k c_k = -sum_{i=1..k} N(X, i) c_{k-i}
        for bits in [0b1011_0110_1u64, 0x1ff, 0b0101_1010_0] {
            let x = from_bits(3, bits);
            let c = char_poly_reversed(&x).unwrap();
            for k in 1..=3 {
                let rhs: BigInt = (1..=k).map(|i| BigInt::from(periodic_count(&x, i).unwrap()) * c.coeff(k - i)).sum();
                assert_eq!(BigInt::from(k) * c.coeff(k), -rhs);
            }
        }
    }

    proptest! {
        #[test]
        fn five_state_char_poly_matches_leibniz(bits in 0u64..(1 << 25)) {
            let x = from_bits(5, bits);
            prop_assert_eq!(char_poly_reversed(&x).unwrap(), leibniz_det(&x));
            zeta_series(&x, 8);
        }
    }
}
