//! Exact nonnegative integer matrices for path and trace counts.

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CountMatrix {
    n: usize,
    entries: Vec<BigUint>,
}

impl CountMatrix {
    pub(crate) fn from_01(rows: &[Vec<u8>]) -> Self {
        let n = rows.len();
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| BigUint::from(v))).collect();
        CountMatrix { n, entries }
    }

    pub(crate) fn identity(n: usize) -> Self {
        let mut entries = vec![BigUint::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigUint::one();
        }
        CountMatrix { n, entries }
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.n + j]
    }

    pub(crate) fn mul(&self, other: &CountMatrix) -> CountMatrix {
        let n = self.n;
        let mut entries = vec![BigUint::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        CountMatrix { n, entries }
    }

    pub(crate) fn pow(&self, mut exp: u64) -> CountMatrix {
        let mut acc = CountMatrix::identity(self.n);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub(crate) fn trace(&self) -> BigUint {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_powers() {
        let a = CountMatrix::from_01(&[vec![1, 1], vec![1, 0]]);
        let a5 = a.pow(5);
        assert_eq!(*a5.get(0, 0), BigUint::from(8u32));
        assert_eq!(a5, a.mul(&a).mul(&a).mul(&a).mul(&a));
        assert_eq!(a.pow(0), CountMatrix::identity(2));
        assert_eq!(a.pow(4).trace(), BigUint::from(7u32));
    }
}
