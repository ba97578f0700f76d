use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Truncated power series `c_0 + c_1 t + ... + c_m t^m` with exact rational
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a power series keeps at least c_0");
        PowerSeries { coeffs }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `exp(sum_{n>=1} counts[n-1] / n * t^n)` through `t^m`, from the
    /// recurrence `c_0 = 1`, `k c_k = sum_{n=1..k} counts[n-1] c_{k-n}`.
    pub fn exp_of_counts(counts: &[BigInt], m: usize) -> Self {
        assert!(counts.len() >= m, "need {m} counts, got {}", counts.len());
        let mut c: Vec<BigRational> = vec![BigRational::one()];
        for k in 1..=m {
            let acc: BigRational =
                (1..=k).map(|n| BigRational::from_integer(counts[n - 1].clone()) * &c[k - n]).fold(BigRational::zero(), |a, b| a + b);
            c.push(acc / BigRational::from_integer(BigInt::from(k)));
        }
        Self::new(c)
    }

    pub fn derivative(&self) -> PowerSeries {
        if self.coeffs.len() == 1 {
            return Self::new(vec![BigRational::zero()]);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect())
    }

    /// `Z'/Z` through `t^(m-1)`; requires `c_0 != 0` and `m >= 1`.
    pub fn log_derivative(&self) -> PowerSeries {
        let c = &self.coeffs;
        assert!(!c[0].is_zero(), "log derivative needs a unit constant term");
        let d = self.derivative();
        let len = self.order().max(1);
        let mut l: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = d.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
            for i in 1..=k {
                acc -= &c[i] * &l[k - i];
            }
            l.push(acc / &c[0]);
        }
        Self::new(l)
    }

    /// First `len` coefficients.
    pub fn truncate(&self, len: usize) -> PowerSeries {
        Self::new(self.coeffs[..len.min(self.coeffs.len()).max(1)].to_vec())
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}
