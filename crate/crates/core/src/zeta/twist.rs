use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use super::{IntPoly, PowerSeries, RationalFunction, ZetaError};
use crate::matrix::CountMatrix;
use crate::sft::Sft;

/// A shift together with a 1-block automorphism given by a state permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistData {
    sft: Sft,
    perm: Vec<usize>,
    order: usize,
}

impl TwistData {
    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    /// Image of each state.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Least `d >= 1` with `f0^d = id`.
    pub fn order(&self) -> usize {
        self.order
    }

    fn iterate(&self, x: usize, n: usize) -> usize {
        (0..n % self.order).fold(x, |s, _| self.perm[s])
    }
}

/// Validates that `perm` is a bijection on states commuting with the
/// transition relation, and computes its order.
pub fn make_twist(x: &Sft, perm: &[usize]) -> Result<TwistData, ZetaError> {
    let n = x.len();
    if perm.len() != n {
        return Err(ZetaError::NotBijective);
    }
    let mut hit = vec![false; n];
    for &image in perm {
        if image >= n || std::mem::replace(&mut hit[image], true) {
            return Err(ZetaError::NotBijective);
        }
    }
    // f0 is a bijection, so an edge lost under f0 forces a non-edge that
    // becomes an edge; reporting the latter keeps the witness canonical
    for a in 0..n {
        for b in 0..n {
            if !x.has_edge(a, b) && x.has_edge(perm[a], perm[b]) {
                return Err(ZetaError::NotAutomorphism { x: x.label(a).to_string(), y: x.label(b).to_string() });
            }
        }
    }
    let mut order = 1usize;
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut s = start;
        while !seen[s] {
            seen[s] = true;
            s = perm[s];
            len += 1;
        }
        order = order.lcm(&len);
    }
    Ok(TwistData { sft: x.clone(), perm: perm.to_vec(), order })
}

/// `|{x : T[x][f0^n(x)] = 1}|`, cross-checked against `Tr(T F^n)` with the
/// permutation matrix `F[z][y] = [z = f0(y)]`.
pub fn twisted_count(tw: &TwistData, n: usize) -> BigUint {
    let direct = (0..tw.sft.len()).filter(|&s| tw.sft.has_edge(s, tw.iterate(s, n))).count();
    let k = tw.sft.len();
    let f: Vec<Vec<u8>> = (0..k).map(|z| (0..k).map(|y| u8::from(tw.perm[y] == z)).collect()).collect();
    let trace = tw.sft.count_matrix().mul(&CountMatrix::from_01(&f).pow(n as u64)).trace();
    assert_eq!(trace, BigUint::from(direct), "trace identity failed for n = {n}");
    trace
}

/// `N_1, ..., N_n_max`.
pub fn twisted_counts(tw: &TwistData, n_max: usize) -> Vec<BigUint> {
    (1..=n_max).map(|n| twisted_count(tw, n)).collect()
}

/// `sum_{n>=1} N_n t^(n-1)` summed in closed form. `N_n` depends only on
/// `n mod d`, with `n = 0 mod d` represented by `r = d`, giving
/// `(sum_{r=1..d} N_r t^(r-1)) / (1 - t^d)`.
pub fn twisted_log_derivative(tw: &TwistData) -> RationalFunction {
    let d = tw.order;
    let numerator = IntPoly::new(twisted_counts(tw, d).into_iter().map(BigInt::from).collect());
    RationalFunction::new(numerator, IntPoly::one_minus_power(d)).expect("1 - t^d is nonzero")
}

/// `exp(sum N_n t^n / n)` through `t^m`; its logarithmic derivative is
/// checked against [`twisted_log_derivative`].
pub fn twisted_zeta_series(tw: &TwistData, m: usize) -> PowerSeries {
    let counts: Vec<BigInt> = twisted_counts(tw, m).into_iter().map(BigInt::from).collect();
    let series = PowerSeries::exp_of_counts(&counts, m);
    if m >= 1 {
        let closed = twisted_log_derivative(tw).series(m - 1).expect("1 - t^d has constant term 1");
        assert_eq!(series.log_derivative(), closed, "logarithmic derivative mismatch");
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::fixtures::*;

    fn n(x: u32) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn make_twist_examples() {
        assert_eq!(make_twist(&full_shift(2), &[1, 0]).unwrap().order(), 2);
        assert_eq!(make_twist(&golden_mean(), &[0, 1]).unwrap().order(), 1);
        assert_eq!(
            make_twist(&golden_mean(), &[1, 0]).unwrap_err(),
            ZetaError::NotAutomorphism { x: "b".into(), y: "b".into() }
        );
        assert_eq!(make_twist(&full_shift(2), &[0, 0]).unwrap_err(), ZetaError::NotBijective);
        assert_eq!(make_twist(&full_shift(2), &[0]).unwrap_err(), ZetaError::NotBijective);
        // rotation of a 6-cycle by two steps has order 3
        assert_eq!(make_twist(&cycle(6), &[2, 3, 4, 5, 0, 1]).unwrap().order(), 3);
    }

    #[test]
    fn twisted_count_examples() {
        let swap_full = make_twist(&full_shift(2), &[1, 0]).unwrap();
        assert_eq!(twisted_count(&swap_full, 1), n(2));
        let swap_cycle = make_twist(&cycle(2), &[1, 0]).unwrap();
        assert_eq!(twisted_count(&swap_cycle, 1), n(2));
        assert_eq!(twisted_count(&swap_cycle, 2), n(0));
        let id = make_twist(&golden_mean(), &[0, 1]).unwrap();
        for k in 1..6 {
            assert_eq!(twisted_count(&id, k), n(1));
        }
    }

    #[test]
    fn log_derivative_examples() {
        let swap_cycle = make_twist(&cycle(2), &[1, 0]).unwrap();
        assert_eq!(twisted_log_derivative(&swap_cycle).to_string(), "2 / (1 - t^2)");
        let swap_full = make_twist(&full_shift(2), &[1, 0]).unwrap();
        assert_eq!(twisted_log_derivative(&swap_full).to_string(), "2 / (1 - t)");
        let id = make_twist(&full_shift(3), &[0, 1, 2]).unwrap();
        assert_eq!(twisted_log_derivative(&id).to_string(), "3 / (1 - t)");
    }

    #[test]
    fn zeta_series_examples() {
        let id = make_twist(&full_shift(2), &[0, 1]).unwrap();
        assert_eq!(twisted_zeta_series(&id, 3), PowerSeries::from_integers(&[1, 2, 3, 4]));
        let swap_cycle = make_twist(&cycle(2), &[1, 0]).unwrap();
        assert_eq!(twisted_zeta_series(&swap_cycle, 4), PowerSeries::from_integers(&[1, 2, 2, 2, 2]));
        assert_eq!(twisted_zeta_series(&swap_cycle, 0), PowerSeries::from_integers(&[1]));
    }

    #[test]
    fn counts_are_periodic_in_the_order() {
        let x = Sft::from_unlabelled(vec![
            vec![0, 1, 1, 0, 0, 0],
            vec![0, 0, 1, 1, 0, 0],
            vec![0, 0, 0, 1, 1, 0],
            vec![0, 0, 0, 0, 1, 1],
            vec![1, 0, 0, 0, 0, 1],
            vec![1, 1, 0, 0, 0, 0],
        ])
        .unwrap();
        let tw = make_twist(&x, &[1, 2, 3, 4, 5, 0]).unwrap();
        assert_eq!(tw.order(), 6);
        let counts = twisted_counts(&tw, 12);
        for k in 0..6 {
            assert_eq!(counts[k], counts[k + 6]);
        }
        let r = twisted_log_derivative(&tw);
        assert!(r.numerator().degree().map_or(true, |deg| deg < 6));
    }
}
