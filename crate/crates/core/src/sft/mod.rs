//! Subshifts of finite type in canonical 0/1 vertex-shift form.
//!
//! A multigraph is accepted only as input and recoded onto its edges. All
//! shifts are one-sided: pruning removes forward-dead states and keeps
//! states with no incoming edges.

mod block;
mod words;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::matrix::CountMatrix;

pub use block::{higher_block, BlockMap, HigherBlock};
pub use words::{enumerate_periodic, enumerate_words, is_word, periodic_count, periodic_counts, word_count, Word};

/// Default bound on enumerations (words, periodic points, higher-block states).
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SftError {
    #[error("transition matrix is not square (row {row} has {len} entries, expected {expected})")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("transition entry ({row}, {col}) = {value} is not 0 or 1")]
    EntryOutOfRange { row: usize, col: usize, value: i64 },
    #[error("{states} state labels for a {dim}x{dim} matrix")]
    DimensionMismatch { states: usize, dim: usize },
    #[error("duplicate state label '{0}'")]
    DuplicateState(String),
    #[error("state index {index} out of range for {len} states")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("the shift is empty")]
    EmptyShift,
    #[error("state '{0}' has no outgoing transition (prune first)")]
    NotEssential(String),
    #[error("enumeration of {count} items exceeds the cap {cap}")]
    CapExceeded { count: String, cap: usize },
    #[error("length must be positive")]
    LengthZero,
    #[error("block map table is inconsistent on the word {witness:?}")]
    InconsistentTable { witness: Word },
    #[error("block map table has no entry for the word {word:?}")]
    IncompleteTable { word: Word },
    #[error("word of length {len} is shorter than the window {window}")]
    WordTooShort { len: usize, window: usize },
    #[error("word {0:?} is not admissible")]
    InadmissibleWord(Word),
}

/// A directed multigraph; edges may carry labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    states: Vec<String>,
    edges: Vec<(usize, usize, Option<String>)>,
}

impl MultiGraph {
    pub fn new(states: Vec<String>, edges: Vec<(usize, usize, Option<String>)>) -> Result<Self, SftError> {
        check_distinct(&states)?;
        for &(s, t, _) in &edges {
            for index in [s, t] {
                if index >= states.len() {
                    return Err(SftError::IndexOutOfRange { index, len: states.len() });
                }
            }
        }
        Ok(MultiGraph { states, edges })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn edges(&self) -> &[(usize, usize, Option<String>)] {
        &self.edges
    }

    /// True when some ordered pair of states carries more than one edge.
    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = HashSet::new();
        !self.edges.iter().all(|&(s, t, _)| seen.insert((s, t)))
    }
}

fn check_distinct(states: &[String]) -> Result<(), SftError> {
    let mut seen = HashSet::new();
    for s in states {
        if !seen.insert(s.as_str()) {
            return Err(SftError::DuplicateState(s.clone()));
        }
    }
    Ok(())
}

/// A one-sided vertex shift given by a 0/1 transition matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Sft {
    states: Vec<String>,
    transition: Vec<Vec<u8>>,
    essential: bool,
}

impl Sft {
    /// Validates and wraps a transition matrix.
    pub fn from_matrix(states: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self, SftError> {
        let dim = matrix.len();
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != dim {
                return Err(SftError::NotSquare { row, len: r.len(), expected: dim });
            }
        }
        if states.len() != dim {
            return Err(SftError::DimensionMismatch { states: states.len(), dim });
        }
        check_distinct(&states)?;
        let mut transition = vec![vec![0u8; dim]; dim];
        for (row, r) in matrix.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                transition[row][col] = match value {
                    0 => 0,
                    1 => 1,
                    _ => return Err(SftError::EntryOutOfRange { row, col, value }),
                };
            }
        }
        Ok(Self::from_parts(states, transition))
    }

    /// Like [`Sft::from_matrix`] with states labelled `0, 1, ...`.
    pub fn from_unlabelled(matrix: Vec<Vec<i64>>) -> Result<Self, SftError> {
        let states = (0..matrix.len()).map(|i| i.to_string()).collect();
        Self::from_matrix(states, matrix)
    }

    /// Builds from an edge list; parallel edges collapse.
    pub fn from_edges(states: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, SftError> {
        check_distinct(&states)?;
        let n = states.len();
        let mut transition = vec![vec![0u8; n]; n];
        for &(s, t) in edges {
            for index in [s, t] {
                if index >= n {
                    return Err(SftError::IndexOutOfRange { index, len: n });
                }
            }
            transition[s][t] = 1;
        }
        Ok(Self::from_parts(states, transition))
    }

    pub(crate) fn from_parts(states: Vec<String>, transition: Vec<Vec<u8>>) -> Self {
        let essential = transition.iter().all(|row| row.contains(&1));
        Sft { states, transition, essential }
    }

    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), Vec::new())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn label(&self, i: usize) -> &str {
        &self.states[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.transition[from][to] == 1
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.transition
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.transition[i].iter().enumerate().filter(|(_, &v)| v == 1).map(|(j, _)| j)
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.transition[i].iter().filter(|&&v| v == 1).count()
    }

    pub fn edge_count(&self) -> usize {
        self.transition.iter().flatten().filter(|&&v| v == 1).count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| self.successors(i).map(move |j| (i, j)))
    }

    /// Every state has an outgoing transition, so every finite path extends
    /// to an infinite one.
    pub fn is_essential(&self) -> bool {
        self.essential
    }

    /// Every state has out-degree exactly `d`.
    pub fn regular_out_degree(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let d = self.out_degree(0);
        (0..self.len()).all(|i| self.out_degree(i) == d).then_some(d)
    }

    pub(crate) fn require_essential(&self) -> Result<(), SftError> {
        if self.is_empty() {
            return Err(SftError::EmptyShift);
        }
        match (0..self.len()).find(|&i| self.out_degree(i) == 0) {
            Some(i) => Err(SftError::NotEssential(self.states[i].clone())),
            None => Ok(()),
        }
    }

    pub(crate) fn count_matrix(&self) -> CountMatrix {
        CountMatrix::from_01(&self.transition)
    }

    /// Sub-shift induced on `subset` (state order follows `subset`).
    pub fn induced(&self, subset: &[usize]) -> Sft {
        let states = subset.iter().map(|&i| self.states[i].clone()).collect();
        let transition = subset.iter().map(|&i| subset.iter().map(|&j| self.transition[i][j]).collect()).collect();
        Self::from_parts(states, transition)
    }

    /// Same shift with states relabelled.
    pub fn relabel(&self, states: Vec<String>) -> Result<Sft, SftError> {
        if states.len() != self.len() {
            return Err(SftError::DimensionMismatch { states: states.len(), dim: self.len() });
        }
        check_distinct(&states)?;
        Ok(Self::from_parts(states, self.transition.clone()))
    }
}

impl fmt::Debug for Sft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sft").field("states", &self.states).field("transition", &self.transition).finish()
    }
}

/// Presents the edge shift of `graph` as a vertex shift on its edges.
pub fn edge_to_vertex(graph: &MultiGraph) -> Result<Sft, SftError> {
    let mut occurrences = std::collections::HashMap::new();
    let states: Vec<String> = graph
        .edges
        .iter()
        .map(|(s, t, label)| {
            let k = occurrences.entry((*s, *t)).or_insert(0usize);
            let generated = format!("{}→{}#{}", graph.states[*s], graph.states[*t], k);
            *k += 1;
            label.clone().unwrap_or(generated)
        })
        .collect();
    check_distinct(&states)?;
    let transition = graph
        .edges
        .iter()
        .map(|&(_, target, _)| graph.edges.iter().map(|&(source, _, _)| u8::from(target == source)).collect())
        .collect();
    Ok(Sft::from_parts(states, transition))
}

/// Removes forward-dead states until none remain; also returns, for each
/// surviving state, its index in `x`.
pub fn prune_with_map(x: &Sft) -> (Sft, Vec<usize>) {
    let n = x.len();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|i| x.out_degree(i)).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&i| degree[i] == 0).collect();
    while let Some(dead) = queue.pop() {
        if !alive[dead] {
            continue;
        }
        alive[dead] = false;
        for pred in 0..n {
            if alive[pred] && x.has_edge(pred, dead) {
                degree[pred] -= 1;
                if degree[pred] == 0 {
                    queue.push(pred);
                }
            }
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    (x.induced(&kept), kept)
}

/// Removes forward-dead states; the set of infinite paths is unchanged.
pub fn prune(x: &Sft) -> Sft {
    prune_with_map(x).0
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Sft;

    pub fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    pub fn golden_mean() -> Sft {
        Sft::from_matrix(labels(&["a", "b"]), vec![vec![1, 1], vec![1, 0]]).unwrap()
    }

    pub fn full_shift(k: usize) -> Sft {
        Sft::from_unlabelled(vec![vec![1; k]; k]).unwrap()
    }

    pub fn cycle(n: usize) -> Sft {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Sft::from_edges((0..n).map(|i| i.to_string()).collect(), &edges).unwrap()
    }

    /// Every 0/1 matrix on `n` states, indexed by a bit pattern.
    pub fn from_bits(n: usize, bits: u64) -> Sft {
        let rows = (0..n).map(|i| (0..n).map(|j| ((bits >> (i * n + j)) & 1) as i64).collect()).collect();
        Sft::from_unlabelled(rows).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn from_matrix_validation() {
        let g = golden_mean();
        assert_eq!(g.len(), 2);
        assert!(g.is_essential());
        let single = Sft::from_matrix(labels(&["a"]), vec![vec![1]]).unwrap();
        assert!(single.has_edge(0, 0));
        assert_eq!(
            Sft::from_matrix(labels(&["a", "b"]), vec![vec![1, 1], vec![1, 2]]).unwrap_err(),
            SftError::EntryOutOfRange { row: 1, col: 1, value: 2 }
        );
        assert!(matches!(Sft::from_matrix(labels(&["a", "b"]), vec![vec![1, 1], vec![1]]), Err(SftError::NotSquare { .. })));
        assert!(matches!(Sft::from_matrix(labels(&["a"]), vec![vec![1, 1], vec![1, 0]]), Err(SftError::DimensionMismatch { .. })));
        assert_eq!(
            Sft::from_matrix(labels(&["a", "a"]), vec![vec![1, 1], vec![1, 0]]).unwrap_err(),
            SftError::DuplicateState("a".into())
        );
    }

    #[test]
    fn edge_shift_recoding() {
        let loops = MultiGraph::new(labels(&["v"]), vec![(0, 0, Some("p".into())), (0, 0, Some("q".into()))]).unwrap();
        assert!(loops.has_parallel_edges());
        let x = edge_to_vertex(&loops).unwrap();
        assert_eq!(x.states(), &labels(&["p", "q"]));
        assert_eq!(x.matrix(), &[vec![1, 1], vec![1, 1]]);

        let two_cycle = MultiGraph::new(labels(&["a", "b"]), vec![(0, 1, None), (1, 0, None)]).unwrap();
        let x = edge_to_vertex(&two_cycle).unwrap();
        assert_eq!(x.matrix(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(x.label(0), "a→b#0");

        let empty = MultiGraph::new(labels(&["a"]), vec![]).unwrap();
        assert!(edge_to_vertex(&empty).unwrap().is_empty());
    }

    #[test]
    fn pruning() {
        let dead_end = Sft::from_edges(labels(&["a", "b"]), &[(0, 1)]).unwrap();
        assert!(prune(&dead_end).is_empty());
        assert_eq!(prune(&golden_mean()), golden_mean());
        let x = Sft::from_edges(labels(&["a", "b"]), &[(0, 0), (0, 1)]).unwrap();
        let (p, kept) = prune_with_map(&x);
        assert_eq!(p.states(), &labels(&["a"]));
        assert!(p.has_edge(0, 0));
        assert!(p.is_essential());
        assert_eq!(kept, vec![0]);
    }

    #[test]
    fn prune_is_idempotent_on_all_three_state_graphs() {
        for bits in 0..(1u64 << 9) {
            let x = from_bits(3, bits);
            let once = prune(&x);
            assert_eq!(prune(&once), once);
            assert!(once.is_empty() || once.is_essential());
        }
    }

    #[test]
    fn pruning_keeps_sources() {
        // a -> b -> b: a has no incoming edge but survives
        let x = Sft::from_edges(labels(&["a", "b"]), &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(prune(&x), x);
    }
}
