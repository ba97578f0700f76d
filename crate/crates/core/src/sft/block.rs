use std::collections::BTreeMap;

use super::words::{enumerate_words, is_word, path_count, Word};
use super::{Sft, SftError};

/// A sliding block code: each window of `window` consecutive symbols of the
/// domain is mapped to one codomain state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    domain: Sft,
    codomain: Sft,
    window: usize,
    table: BTreeMap<Word, usize>,
}

impl BlockMap {
    /// Builds and validates a block map (see [`BlockMap::validate`]).
    pub fn new(domain: Sft, codomain: Sft, window: usize, table: BTreeMap<Word, usize>, cap: usize) -> Result<Self, SftError> {
        let map = Self::new_unchecked(domain, codomain, window, table)?;
        map.validate(cap)?;
        Ok(map)
    }

    /// Builds without the exhaustive consistency check; window and codomain
    /// indices are still checked.
    pub fn new_unchecked(domain: Sft, codomain: Sft, window: usize, table: BTreeMap<Word, usize>) -> Result<Self, SftError> {
        if window == 0 {
            return Err(SftError::LengthZero);
        }
        for &image in table.values() {
            if image >= codomain.len() {
                return Err(SftError::IndexOutOfRange { index: image, len: codomain.len() });
            }
        }
        Ok(BlockMap { domain, codomain, window, table })
    }

    pub fn domain(&self) -> &Sft {
        &self.domain
    }

    pub fn codomain(&self) -> &Sft {
        &self.codomain
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn table(&self) -> &BTreeMap<Word, usize> {
        &self.table
    }

    fn lookup(&self, block: &[usize]) -> Result<usize, SftError> {
        self.table.get(block).copied().ok_or_else(|| SftError::IncompleteTable { word: block.to_vec() })
    }

    /// Checks that the table is total on `W(domain, window)` and that every
    /// `(window+1)`-word maps to an admissible 2-word of the codomain. The
    /// error carries the first offending word.
    pub fn validate(&self, cap: usize) -> Result<(), SftError> {
        for w in enumerate_words(&self.domain, self.window, cap)? {
            self.lookup(&w)?;
        }
        for w in enumerate_words(&self.domain, self.window + 1, cap)? {
            let first = self.lookup(&w[..self.window])?;
            let second = self.lookup(&w[1..])?;
            if !self.codomain.has_edge(first, second) {
                return Err(SftError::InconsistentTable { witness: w });
            }
        }
        Ok(())
    }

    /// Image of an admissible word; the result has `|w| - window + 1` symbols.
    pub fn apply(&self, w: &[usize]) -> Result<Word, SftError> {
        if w.len() < self.window {
            return Err(SftError::WordTooShort { len: w.len(), window: self.window });
        }
        if !is_word(&self.domain, w) {
            return Err(SftError::InadmissibleWord(w.to_vec()));
        }
        w.windows(self.window).map(|block| self.lookup(block)).collect()
    }

    /// Image of the periodic point `w w w ...`; `w` must close up into a
    /// cycle and the result has the same length.
    pub fn apply_periodic(&self, w: &[usize]) -> Result<Word, SftError> {
        let n = w.len();
        if n == 0 {
            return Err(SftError::LengthZero);
        }
        if !is_word(&self.domain, w) || !self.domain.has_edge(w[n - 1], w[0]) {
            return Err(SftError::InadmissibleWord(w.to_vec()));
        }
        (0..n)
            .map(|i| {
                let block: Word = (0..self.window).map(|k| w[(i + k) % n]).collect();
                self.lookup(&block)
            })
            .collect()
    }
}

/// The `l`-block presentation of a shift together with the conjugacies
/// relating it to the original.
#[derive(Debug, Clone)]
pub struct HigherBlock {
    /// States are the admissible `l`-words of the original shift.
    pub sft: Sft,
    /// 1-block map back to the original: each `l`-word goes to its first symbol.
    pub conjugacy: BlockMap,
    /// `l`-block map from the original onto the recoded shift.
    pub recoding: BlockMap,
}

fn word_label(x: &Sft, w: &[usize]) -> String {
    let parts: Vec<&str> = w.iter().map(|&i| x.label(i)).collect();
    format!("[{}]", parts.join(","))
}

/// Recodes an essential shift on its `l`-words. Two words are joined when
/// they overlap in `l - 1` symbols and their union is an `(l+1)`-word.
pub fn higher_block(x: &Sft, l: usize, cap: usize) -> Result<HigherBlock, SftError> {
    if l == 0 {
        return Err(SftError::LengthZero);
    }
    x.require_essential()?;
    let words = enumerate_words(x, l, cap)?;
    debug_assert_eq!(path_count(x, l), num_bigint::BigUint::from(words.len()));
    let index: BTreeMap<&[usize], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let n = words.len();
    let mut transition = vec![vec![0u8; n]; n];
    for (i, u) in words.iter().enumerate() {
        let last = *u.last().expect("l >= 1");
        for next in x.successors(last) {
            let mut v: Word = u[1..].to_vec();
            v.push(next);
            transition[i][index[v.as_slice()]] = 1;
        }
    }
    let states = words.iter().map(|w| word_label(x, w)).collect();
    let sft = Sft::from_parts(states, transition);

    let conjugacy_table = words.iter().enumerate().map(|(i, w)| (vec![i], w[0])).collect();
    let recoding_table = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let conjugacy = BlockMap::new_unchecked(sft.clone(), x.clone(), 1, conjugacy_table)?;
    let recoding = BlockMap::new_unchecked(x.clone(), sft.clone(), l, recoding_table)?;
    Ok(HigherBlock { sft, conjugacy, recoding })
}
