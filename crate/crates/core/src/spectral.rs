//! Certified rational brackets for the Perron eigenvalue, and detection of a
//! stabilised growth ratio of word counts.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::decomp::irreducible_components;
use crate::sft::{word_count, Sft, SftError};

pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("the shift is empty")]
    EmptyShift,
    #[error("the shift has no cycle, so its entropy is -infinity")]
    NoCycle,
    #[error("bracket did not reach the tolerance in {iterations} iterations (best: [{}, {}])", .best.lambda_lo, .best.lambda_hi)]
    DidNotConverge { iterations: usize, best: EntropyBracket },
    #[error("l_max = {l_max} is too small for a window of {window}")]
    LMaxTooSmall { l_max: usize, window: usize },
    #[error("window must be at least 2")]
    WindowTooSmall,
    #[error(transparent)]
    Sft(#[from] SftError),
}

/// `lambda_lo <= spectral radius <= lambda_hi`; the entropy is `log(lambda)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyBracket {
    pub lambda_lo: BigRational,
    pub lambda_hi: BigRational,
    pub iterations: usize,
}

impl EntropyBracket {
    pub fn width(&self) -> BigRational {
        &self.lambda_hi - &self.lambda_lo
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        &self.lambda_lo <= value && value <= &self.lambda_hi
    }

    /// Natural-log approximations of the endpoints (presentation only).
    pub fn log_bounds(&self) -> (f64, f64) {
        (rational_ln(&self.lambda_lo), rational_ln(&self.lambda_hi))
    }
}

fn rational_ln(r: &BigRational) -> f64 {
    // ln(n/d) = ln n - ln d, computed on the leading bits to survive huge values
    fn big_ln(v: &BigInt) -> f64 {
        let bits = v.bits();
        let shift = bits.saturating_sub(64);
        let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
    big_ln(r.numer()) - big_ln(r.denom())
}

// Collatz–Wielandt bounds for one irreducible block, iterating on B + I.
struct PerronIteration {
    succ: Vec<Vec<usize>>,
    vector: Vec<BigUint>,
    precision_bits: u64,
}

impl PerronIteration {
    fn new(block: &Sft, precision_bits: u64) -> Self {
        let succ = (0..block.len()).map(|i| block.successors(i).collect()).collect();
        PerronIteration { succ, vector: vec![BigUint::one(); block.len()], precision_bits }
    }

    /// One step; returns bounds on the eigenvalue of B from the current vector.
    fn step(&mut self) -> (BigRational, BigRational) {
        let next: Vec<BigUint> =
            self.succ.iter().enumerate().map(|(i, s)| &self.vector[i] + s.iter().map(|&j| &self.vector[j]).sum::<BigUint>()).collect();
        let ratios: Vec<BigRational> = next
            .iter()
            .zip(&self.vector)
            .map(|(a, b)| BigRational::new(BigInt::from(a.clone()), BigInt::from(b.clone())))
            .collect();
        let one = BigRational::one();
        let lo = ratios.iter().min().expect("nonempty block") - &one;
        let hi = ratios.iter().max().expect("nonempty block") - &one;
        // keep entries at a bounded size; any positive vector gives valid bounds
        let top = next.iter().map(BigUint::bits).max().unwrap_or(0);
        let shift = top.saturating_sub(self.precision_bits);
        self.vector = next
            .into_iter()
            .map(|v| {
                let shifted = v >> shift;
                if shifted.is_zero() {
                    BigUint::one()
                } else {
                    shifted
                }
            })
            .collect();
        (lo, hi)
    }
}

fn precision_for(tol: &BigRational) -> u64 {
    // bits needed to resolve tol, with headroom for the ratio perturbation
    let inv = (BigRational::one() / tol).ceil().to_integer();
    inv.bits() + 64
}

/// Brackets the spectral radius of the transition matrix to within `tol`.
///
/// The radius is the maximum over irreducible components; each component is
/// iterated with `B + I` (primitive) from the all-ones vector and the
/// Collatz–Wielandt bounds `min(v'/v) - 1 <= lambda <= max(v'/v) - 1` are
/// intersected across iterations, so brackets only shrink.
pub fn entropy_bounds(x: &Sft, tol: &BigRational, max_iter: usize) -> Result<EntropyBracket, SpectralError> {
    if x.is_empty() {
        return Err(SpectralError::EmptyShift);
    }
    let blocks = irreducible_components(x);
    if blocks.is_empty() {
        return Err(SpectralError::NoCycle);
    }
    let precision = precision_for(tol);
    let mut per_block = Vec::with_capacity(blocks.len());
    let mut converged = true;
    let mut used = 0;
    for block in &blocks {
        let mut iteration = PerronIteration::new(block, precision);
        let (mut lo, mut hi) = iteration.step();
        let mut steps = 1;
        while &hi - &lo > *tol && steps < max_iter {
            let (l, h) = iteration.step();
            if l > lo {
                lo = l;
            }
            if h < hi {
                hi = h;
            }
            steps += 1;
        }
        if &hi - &lo > *tol {
            converged = false;
        }
        used = used.max(steps);
        per_block.push((lo, hi));
    }
    // max over blocks: the block with the largest upper bound dominates the
    // top, the largest lower bound is certified from below
    let lambda_lo = per_block.iter().map(|(l, _)| l.clone()).max().expect("nonempty");
    let lambda_hi = per_block.iter().map(|(_, h)| h.clone()).max().expect("nonempty");
    let bracket = EntropyBracket { lambda_lo, lambda_hi, iterations: used };
    if !converged || bracket.width() > *tol {
        return Err(SpectralError::DidNotConverge { iterations: used, best: bracket });
    }
    Ok(bracket)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitDegreeResult {
    /// `word_count(l + 1) = d * word_count(l)` for every `l >= since_l` up to
    /// the last computed length, covering at least `window` ratios.
    Stabilized { degree: u64, since_l: usize },
    /// Ratios `word_count(l + 1) / word_count(l)` for `l = 1, 2, ...`.
    NotStabilized { ratios: Vec<BigRational> },
}

/// Looks for an integer limit of the word-count growth ratios among lengths
/// `1..=l_max`. Reports a limit only when the last `window` ratios agree.
pub fn limit_degree(x: &Sft, l_max: usize, window: usize) -> Result<LimitDegreeResult, SpectralError> {
    if window < 2 {
        return Err(SpectralError::WindowTooSmall);
    }
    if l_max < window + 1 {
        return Err(SpectralError::LMaxTooSmall { l_max, window });
    }
    if x.is_empty() {
        return Err(SpectralError::EmptyShift);
    }
    let counts: Vec<BigInt> = (1..=l_max).map(|l| word_count(x, l).map(BigInt::from)).collect::<Result<_, _>>()?;
    let ratios: Vec<BigRational> = counts.windows(2).map(|w| BigRational::new(w[1].clone(), w[0].clone())).collect();
    let last = ratios.last().expect("l_max >= 3").clone();
    let tail_equal = ratios[ratios.len() - window..].iter().all(|r| *r == last);
    if tail_equal && last.is_integer() && last.is_positive() {
        let run = ratios.iter().rev().take_while(|r| **r == last).count();
        let degree = last.to_integer().to_u64().expect("ratio bounded by state count");
        return Ok(LimitDegreeResult::Stabilized { degree, since_l: ratios.len() - run + 1 });
    }
    Ok(LimitDegreeResult::NotStabilized { ratios })
}

/// `true` when `count <= states * bound^l`, evaluated exactly.
pub fn growth_sandwich(count: &BigUint, states: usize, bound: &BigRational, l: usize) -> bool {
    let power = num_traits::pow(bound.clone(), l);
    BigRational::from_integer(BigInt::from(count.clone())) <= power * BigRational::from_integer(BigInt::from(states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::fixtures::*;

    fn tol(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    // Sign of det(I - tA) at t = 1/lambda, via lambda^n det(I - A/lambda) = det(lambda I - A).
    fn char_poly_at(x: &Sft, lambda: &BigRational) -> BigRational {
        let n = x.len();
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { lambda.clone() } else { BigRational::zero() } - int(x.matrix()[i][j] as i64)).collect())
            .collect();
        // Gaussian elimination determinant
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else { return BigRational::zero() };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            det *= m[col][col].clone();
            for r in col + 1..n {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        det
    }

    #[test]
    fn exact_brackets() {
        let b = entropy_bounds(&cycle(4), &tol(1, 1000), 100).unwrap();
        assert_eq!((b.lambda_lo.clone(), b.lambda_hi.clone()), (int(1), int(1)));
        let b = entropy_bounds(&full_shift(2), &tol(1, 1000), 100).unwrap();
        assert_eq!((b.lambda_lo, b.lambda_hi, b.iterations), (int(2), int(2), 1));
    }

    #[test]
    fn golden_mean_bracket_straddles_root() {
        let b = entropy_bounds(&golden_mean(), &tol(1, 10_000), 1000).unwrap();
        assert!(b.width() <= tol(1, 10_000));
        let f = |l: &BigRational| l * l - l - int(1);
        assert!(f(&b.lambda_lo) <= BigRational::zero());
        assert!(f(&b.lambda_hi) >= BigRational::zero());
    }

    #[test]
    fn bracket_contains_perron_root_on_all_three_state_graphs() {
        for bits in 0..(1u64 << 9) {
            let x = from_bits(3, bits);
            let Ok(b) = entropy_bounds(&x, &tol(1, 1_000_000), 10_000) else {
                assert!(irreducible_components(&x).is_empty());
                continue;
            };
            // det(lambda I - A) has no root above lambda_hi and changes sign
            // (or vanishes) across the Perron root
            let lo = char_poly_at(&x, &b.lambda_lo);
            let hi = char_poly_at(&x, &b.lambda_hi);
            assert!(lo.is_zero() || hi.is_zero() || lo.is_negative() != hi.is_negative() || b.lambda_lo == b.lambda_hi, "bits {bits}");
            assert!(char_poly_at(&x, &(&b.lambda_hi + int(1))).is_positive());
        }
    }

    #[test]
    fn periodic_block_converges() {
        // period-2 irreducible block; plain power iteration would oscillate
        let x = Sft::from_unlabelled(vec![vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]).unwrap();
        let b = entropy_bounds(&x, &tol(1, 1_000_000), 1000).unwrap();
        let two = int(2);
        assert!(&b.lambda_lo * &b.lambda_lo <= two && two <= &b.lambda_hi * &b.lambda_hi);
    }

    #[test]
    fn entropy_errors() {
        assert_eq!(entropy_bounds(&Sft::empty(), &tol(1, 10), 10).unwrap_err(), SpectralError::EmptyShift);
        let chain = Sft::from_edges(labels(&["a", "b"]), &[(0, 1)]).unwrap();
        assert_eq!(entropy_bounds(&chain, &tol(1, 10), 10).unwrap_err(), SpectralError::NoCycle);
        let err = entropy_bounds(&golden_mean(), &tol(1, 1_000_000_000), 2).unwrap_err();
        assert!(matches!(err, SpectralError::DidNotConverge { iterations: 2, .. }));
    }

    #[test]
    fn brackets_are_nested() {
        let mut prev: Option<EntropyBracket> = None;
        for k in 1..8 {
            let b = match entropy_bounds(&golden_mean(), &tol(1, 1 << 40), k) {
                Ok(b) => b,
                Err(SpectralError::DidNotConverge { best, .. }) => best,
                Err(e) => panic!("{e}"),
            };
            if let Some(p) = prev {
                assert!(p.lambda_lo <= b.lambda_lo && b.lambda_hi <= p.lambda_hi);
            }
            prev = Some(b);
        }
    }

    #[test]
    fn limit_degree_examples() {
        assert_eq!(limit_degree(&full_shift(2), 6, 3).unwrap(), LimitDegreeResult::Stabilized { degree: 2, since_l: 1 });
        match limit_degree(&golden_mean(), 8, 3).unwrap() {
            LimitDegreeResult::NotStabilized { ratios } => {
                assert_eq!(ratios[..3], [tol(3, 2), tol(5, 3), tol(8, 5)]);
                assert_eq!(ratios.len(), 7);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(limit_degree(&cycle(3), 5, 3).unwrap(), LimitDegreeResult::Stabilized { degree: 1, since_l: 1 });
        assert_eq!(limit_degree(&cycle(3), 3, 3).unwrap_err(), SpectralError::LMaxTooSmall { l_max: 3, window: 3 });
        assert_eq!(limit_degree(&Sft::empty(), 5, 3).unwrap_err(), SpectralError::EmptyShift);
    }

    #[test]
    fn limit_degree_reports_late_stabilisation() {
        // transient state feeding a full 2-shift: counts 3, 5, 10, 20, ...
        let x = Sft::from_unlabelled(vec![vec![0, 1, 0], vec![0, 1, 1], vec![0, 1, 1]]).unwrap();
        match limit_degree(&x, 8, 3).unwrap() {
            LimitDegreeResult::Stabilized { degree, since_l } => {
                assert_eq!(degree, 2);
                assert_eq!(since_l, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn word_growth_sandwich() {
        let b = entropy_bounds(&golden_mean(), &tol(1, 1000), 1000).unwrap();
        for l in 1..=20 {
            assert!(growth_sandwich(&word_count(&golden_mean(), l).unwrap(), 2, &b.lambda_hi, l));
        }
    }
}
