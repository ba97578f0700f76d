use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Sft, SftError};

/// A finite sequence of state indices.
pub type Word = Vec<usize>;

/// Number of paths with `l` vertices, `sum_{i,j} (A^(l-1))_{ij}`, without any
/// essentiality requirement.
pub(crate) fn path_count(x: &Sft, l: usize) -> BigUint {
    if x.is_empty() || l == 0 {
        return BigUint::zero();
    }
    let mut counts = vec![BigUint::from(1u32); x.len()];
    for _ in 1..l {
        counts = (0..x.len()).map(|i| x.successors(i).map(|j| &counts[j]).sum()).collect();
    }
    counts.into_iter().sum()
}

/// `|W(X, l)|` for an essential nonempty shift; `word_count(X, 1)` is the
/// number of states.
pub fn word_count(x: &Sft, l: usize) -> Result<BigUint, SftError> {
    if l == 0 {
        return Err(SftError::LengthZero);
    }
    x.require_essential()?;
    Ok(path_count(x, l))
}

pub fn is_word(x: &Sft, w: &[usize]) -> bool {
    w.iter().all(|&s| s < x.len()) && w.windows(2).all(|p| x.has_edge(p[0], p[1]))
}

fn check_cap(count: &BigUint, cap: usize) -> Result<(), SftError> {
    match count.to_usize() {
        Some(c) if c <= cap => Ok(()),
        _ => Err(SftError::CapExceeded { count: count.to_string(), cap }),
    }
}

/// All admissible words of length `l` in lexicographic index order.
pub fn enumerate_words(x: &Sft, l: usize, cap: usize) -> Result<Vec<Word>, SftError> {
    if l == 0 {
        return Err(SftError::LengthZero);
    }
    check_cap(&path_count(x, l), cap)?;
    let mut out = Vec::new();
    let mut stack: Vec<Word> = (0..x.len()).rev().map(|s| vec![s]).collect();
    while let Some(w) = stack.pop() {
        if w.len() == l {
            out.push(w);
            continue;
        }
        let last = *w.last().expect("nonempty");
        let next: Vec<usize> = x.successors(last).collect();
        for &s in next.iter().rev() {
            let mut extended = w.clone();
            extended.push(s);
            stack.push(extended);
        }
    }
    Ok(out)
}

/// Number of points fixed by the `n`-th power of the shift, `Tr(A^n)`.
pub fn periodic_count(x: &Sft, n: usize) -> Result<BigUint, SftError> {
    if n == 0 {
        return Err(SftError::LengthZero);
    }
    Ok(x.count_matrix().pow(n as u64).trace())
}

/// `[Tr(A), Tr(A^2), ..., Tr(A^m)]`.
pub fn periodic_counts(x: &Sft, m: usize) -> Vec<BigUint> {
    let a = x.count_matrix();
    let mut power = a.clone();
    let mut out = Vec::with_capacity(m);
    for n in 1..=m {
        out.push(power.trace());
        if n < m {
            power = power.mul(&a);
        }
    }
    out
}

/// Words `w` of length `n` that close up into a cycle (`w_{n-1} -> w_0`), in
/// lexicographic order; each encodes one point of period dividing `n`.
pub fn enumerate_periodic(x: &Sft, n: usize, cap: usize) -> Result<Vec<Word>, SftError> {
    let count = periodic_count(x, n)?;
    check_cap(&count, cap)?;
    let mut out = Vec::new();
    for start in 0..x.len() {
        let mut stack: Vec<Word> = vec![vec![start]];
        while let Some(w) = stack.pop() {
            let last = *w.last().expect("nonempty");
            if w.len() == n {
                if x.has_edge(last, start) {
                    out.push(w);
                }
                continue;
            }
            let next: Vec<usize> = x.successors(last).collect();
            for &s in next.iter().rev() {
                let mut extended = w.clone();
                extended.push(s);
                stack.push(extended);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::DEFAULT_CAP;
    use super::*;

    fn counts(x: &Sft, ls: std::ops::RangeInclusive<usize>) -> Vec<u64> {
        ls.map(|l| word_count(x, l).unwrap().to_u64().unwrap()).collect()
    }

    #[test]
    fn word_counts() {
        assert_eq!(counts(&golden_mean(), 1..=4), vec![2, 3, 5, 8]);
        assert_eq!(word_count(&full_shift(2), 3).unwrap(), BigUint::from(8u32));
        let single = Sft::from_unlabelled(vec![vec![1]]).unwrap();
        assert_eq!(counts(&single, 1..=5), vec![1; 5]);
        assert_eq!(word_count(&Sft::empty(), 2).unwrap_err(), SftError::EmptyShift);
        assert_eq!(word_count(&golden_mean(), 0).unwrap_err(), SftError::LengthZero);
        let dead = Sft::from_edges(labels(&["a", "b"]), &[(0, 1)]).unwrap();
        assert!(matches!(word_count(&dead, 2), Err(SftError::NotEssential(_))));
    }

    #[test]
    fn word_enumeration() {
        let g = golden_mean();
        assert_eq!(enumerate_words(&g, 2, DEFAULT_CAP).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert!(!is_word(&g, &[1, 1]));
        assert!(is_word(&g, &[1]));
        assert!(!is_word(&g, &[2]));
        assert!(matches!(enumerate_words(&full_shift(2), 21, DEFAULT_CAP), Err(SftError::CapExceeded { .. })));
        assert_eq!(enumerate_words(&g, 0, 10).unwrap_err(), SftError::LengthZero);
    }

    #[test]
    fn periodic_examples() {
        let g = golden_mean();
        let got: Vec<u64> = (1..=4).map(|n| periodic_count(&g, n).unwrap().to_u64().unwrap()).collect();
        assert_eq!(got, vec![1, 3, 4, 7]);
        assert_eq!(periodic_counts(&g, 4).iter().map(|c| c.to_u64().unwrap()).collect::<Vec<_>>(), got);
        assert_eq!(periodic_count(&full_shift(2), 3).unwrap(), BigUint::from(8u32));
        assert!(periodic_count(&cycle(2), 1).unwrap().is_zero());
        assert!(periodic_count(&Sft::empty(), 3).unwrap().is_zero());

        assert_eq!(enumerate_periodic(&g, 2, DEFAULT_CAP).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(enumerate_periodic(&cycle(2), 2, DEFAULT_CAP).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        let x = Sft::from_edges(labels(&["a", "b", "c"]), &[(0, 0), (1, 2), (2, 2)]).unwrap();
        assert_eq!(enumerate_periodic(&x, 1, DEFAULT_CAP).unwrap(), vec![vec![0], vec![2]]);
    }

    #[test]
    fn essential_words_extend_forward() {
        for bits in 0..(1u64 << 9) {
            let x = super::super::prune(&from_bits(3, bits));
            if x.is_empty() {
                continue;
            }
            for l in 1..=4 {
                let longer = enumerate_words(&x, l + 1, DEFAULT_CAP).unwrap();
                for w in enumerate_words(&x, l, DEFAULT_CAP).unwrap() {
                    assert!(longer.iter().any(|v| v[..l] == w[..]));
                }
                assert_eq!(BigUint::from(enumerate_words(&x, l, DEFAULT_CAP).unwrap().len()), word_count(&x, l).unwrap());
            }
        }
    }
}
