//! Communicating classes, irreducible components, σ-components and the
//! maximal periodic quotient (strong core) of a shift of finite type.

use std::collections::BTreeSet;

use num_integer::Integer;
use thiserror::Error;

use crate::sft::{periodic_count, prune_with_map, Sft};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("the shift is not irreducible")]
    NotIrreducible,
    #[error("the shift is empty")]
    Empty,
    #[error("the shift is not weakly connected")]
    NotWeaklyConnected,
    #[error("state '{0}' has no outgoing transition")]
    NotEssential(String),
}

/// Partition into communicating classes with the acyclic condensation.
///
/// Classes are ordered so that every edge between distinct classes goes from
/// a higher index to a lower one, which puts the transition matrix in block
/// triangular form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub classes: Vec<Vec<usize>>,
    pub has_edge: Vec<bool>,
    /// `(from, to)` class indices, `from > to`.
    pub condensation_edges: BTreeSet<(usize, usize)>,
    pub class_of: Vec<usize>,
}

impl Decomposition {
    /// A topological order of the condensation exists (checked by Kahn's algorithm).
    pub fn condensation_is_acyclic(&self) -> bool {
        let k = self.classes.len();
        let mut indegree = vec![0usize; k];
        for &(_, to) in &self.condensation_edges {
            indegree[to] += 1;
        }
        let mut ready: Vec<usize> = (0..k).filter(|&c| indegree[c] == 0).collect();
        let mut seen = 0;
        while let Some(c) = ready.pop() {
            seen += 1;
            for &(from, to) in &self.condensation_edges {
                if from == c {
                    indegree[to] -= 1;
                    if indegree[to] == 0 {
                        ready.push(to);
                    }
                }
            }
        }
        seen == k
    }
}

// Iterative Tarjan; emits components sinks-first.
fn tarjan(x: &Sft) -> Vec<Vec<usize>> {
    let n = x.len();
    let succ: Vec<Vec<usize>> = (0..n).map(|i| x.successors(i).collect()).collect();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

pub fn communicating_classes(x: &Sft) -> Decomposition {
    let classes = tarjan(x);
    let mut class_of = vec![0usize; x.len()];
    for (c, members) in classes.iter().enumerate() {
        for &s in members {
            class_of[s] = c;
        }
    }
    let mut has_edge = vec![false; classes.len()];
    let mut condensation_edges = BTreeSet::new();
    for (u, v) in x.edges() {
        let (cu, cv) = (class_of[u], class_of[v]);
        if cu == cv {
            has_edge[cu] = true;
        } else {
            debug_assert!(cu > cv);
            condensation_edges.insert((cu, cv));
        }
    }
    Decomposition { classes, has_edge, condensation_edges, class_of }
}

/// Shifts induced on the classes that carry an edge, in class order.
pub fn irreducible_components(x: &Sft) -> Vec<Sft> {
    let d = communicating_classes(x);
    d.classes.iter().zip(&d.has_edge).filter(|(_, &e)| e).map(|(c, _)| x.induced(c)).collect()
}

pub fn is_irreducible(x: &Sft) -> bool {
    let d = communicating_classes(x);
    !x.is_empty() && d.classes.len() == 1 && d.has_edge[0]
}

/// Disjoint union of the irreducible components, on the original state order.
pub fn nonwandering(x: &Sft) -> Sft {
    let d = communicating_classes(x);
    let kept: Vec<usize> = (0..x.len()).filter(|&s| d.has_edge[d.class_of[s]]).collect();
    let transition = kept
        .iter()
        .map(|&i| kept.iter().map(|&j| u8::from(x.has_edge(i, j) && d.class_of[i] == d.class_of[j])).collect())
        .collect();
    Sft::from_parts(kept.iter().map(|&i| x.label(i).to_string()).collect(), transition)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitType {
    /// A single periodic orbit of the given length.
    Finite(usize),
    Infinite,
}

pub fn classify_irreducible(x: &Sft) -> Result<OrbitType, DecompError> {
    if !is_irreducible(x) {
        return Err(DecompError::NotIrreducible);
    }
    if (0..x.len()).all(|i| x.out_degree(i) == 1) {
        return Ok(OrbitType::Finite(x.len()));
    }
    assert!(
        (1..=x.len()).any(|n| periodic_count(x, n).is_ok_and(|c| c > 0u32.into())),
        "irreducible shift without periodic points"
    );
    Ok(OrbitType::Infinite)
}

/// A weakly connected component of the essential part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaComponent {
    /// Indices into the shift passed to [`sigma_components`].
    pub states: Vec<usize>,
    pub sft: Sft,
}

/// σ-connected components: the weak components of the pruned graph, ordered
/// by least state index. Forward-dead states are pruned first.
pub fn sigma_components(x: &Sft) -> Vec<SigmaComponent> {
    let (essential, kept) = prune_with_map(x);
    let n = essential.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[start] = id;
        let mut members = vec![start];
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            for w in 0..n {
                if comp[w] == usize::MAX && (essential.has_edge(v, w) || essential.has_edge(w, v)) {
                    comp[w] = id;
                    members.push(w);
                    frontier.push(w);
                }
            }
        }
        members.sort_unstable();
        let sft = essential.induced(&members);
        out.push(SigmaComponent { states: members.iter().map(|&i| kept[i]).collect(), sft });
    }
    out
}

fn weakly_connected(x: &Sft) -> bool {
    let n = x.len();
    let mut seen = vec![false; n];
    let mut frontier = vec![0usize];
    seen[0] = true;
    while let Some(v) = frontier.pop() {
        for w in 0..n {
            if !seen[w] && (x.has_edge(v, w) || x.has_edge(w, v)) {
                seen[w] = true;
                frontier.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Largest `d` admitting a labelling `l: states -> Z/d` with `l(v) = l(u) + 1`
/// along every edge, together with that labelling (state 0 gets label 0).
///
/// Potentials are assigned along a spanning tree of the underlying undirected
/// graph; `d` is the gcd of the defects `pi(u) + 1 - pi(v)` over all edges.
pub fn cyclic_period(c: &Sft) -> Result<(usize, Vec<usize>), DecompError> {
    if c.is_empty() {
        return Err(DecompError::Empty);
    }
    if let Some(dead) = (0..c.len()).find(|&i| c.out_degree(i) == 0) {
        return Err(DecompError::NotEssential(c.label(dead).to_string()));
    }
    if !weakly_connected(c) {
        return Err(DecompError::NotWeaklyConnected);
    }
    let n = c.len();
    let mut potential: Vec<Option<i64>> = vec![None; n];
    potential[0] = Some(0);
    let mut frontier = vec![0usize];
    while let Some(v) = frontier.pop() {
        let pv = potential[v].expect("visited");
        for w in 0..n {
            if potential[w].is_some() {
                continue;
            }
            if c.has_edge(v, w) {
                potential[w] = Some(pv + 1);
                frontier.push(w);
            } else if c.has_edge(w, v) {
                potential[w] = Some(pv - 1);
                frontier.push(w);
            }
        }
    }
    let pi: Vec<i64> = potential.into_iter().map(|p| p.expect("weakly connected")).collect();
    let d = c.edges().fold(0i64, |g, (u, v)| g.gcd(&(pi[u] + 1 - pi[v])));
    assert!(d >= 1, "an essential graph contains a directed cycle");
    let labels = pi.iter().map(|p| p.rem_euclid(d) as usize).collect();
    Ok((d as usize, labels))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientComponent {
    /// Indices into the shift passed to [`strong_core`].
    pub states: Vec<usize>,
    pub modulus: usize,
    /// Label of each entry of `states`.
    pub labels: Vec<usize>,
}

/// Maximal quotient onto a disjoint union of cycles: one cyclic labelling of
/// maximal modulus per σ-component.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PeriodicQuotient {
    pub components: Vec<QuotientComponent>,
}

impl PeriodicQuotient {
    pub fn moduli(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.modulus).collect()
    }
}

pub fn strong_core(x: &Sft) -> PeriodicQuotient {
    let components = sigma_components(x)
        .into_iter()
        .map(|comp| {
            let (modulus, labels) = cyclic_period(&comp.sft).expect("σ-components are essential and weakly connected");
            QuotientComponent { states: comp.states, modulus, labels }
        })
        .collect();
    PeriodicQuotient { components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::fixtures::*;
    use crate::sft::prune;

    fn a_loop_to_b_loop() -> Sft {
        Sft::from_edges(labels(&["a", "b"]), &[(0, 0), (0, 1), (1, 1)]).unwrap()
    }

    // brute force: does some labelling mod m satisfy l(v) = l(u)+1 on all edges?
    fn labelling_exists(x: &Sft, m: usize) -> bool {
        let n = x.len();
        let total = m.pow(n as u32);
        (0..total).any(|code| {
            let labels: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
            x.edges().all(|(u, v)| labels[v] == (labels[u] + 1) % m)
        })
    }

    fn brute_force_period(x: &Sft) -> usize {
        (1..=x.len()).rev().find(|&m| labelling_exists(x, m)).unwrap()
    }

    #[test]
    fn class_examples() {
        let d = communicating_classes(&golden_mean());
        assert_eq!(d.classes, vec![vec![0, 1]]);
        assert_eq!(d.has_edge, vec![true]);

        let d = communicating_classes(&a_loop_to_b_loop());
        assert_eq!(d.classes, vec![vec![1], vec![0]]);
        assert_eq!(d.condensation_edges.iter().copied().collect::<Vec<_>>(), vec![(1, 0)]);

        let chain = Sft::from_edges(labels(&["a", "b"]), &[(0, 1)]).unwrap();
        let d = communicating_classes(&chain);
        assert_eq!(d.classes.len(), 2);
        assert_eq!(d.has_edge, vec![false, false]);
        assert!(communicating_classes(&Sft::empty()).classes.is_empty());
    }

    #[test]
    fn block_triangular_on_all_three_state_graphs() {
        for bits in 0..(1u64 << 9) {
            let x = from_bits(3, bits);
            let d = communicating_classes(&x);
            assert!(d.condensation_is_acyclic());
            assert_eq!(d.classes.iter().map(Vec::len).sum::<usize>(), 3);
            for (u, v) in x.edges() {
                assert!(d.class_of[u] >= d.class_of[v]);
            }
        }
    }

    #[test]
    fn components_and_irreducibility() {
        let comps = irreducible_components(&a_loop_to_b_loop());
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 1 && c.has_edge(0, 0)));
        assert_eq!(irreducible_components(&golden_mean()), vec![golden_mean()]);
        assert!(irreducible_components(&Sft::from_edges(labels(&["a", "b"]), &[(0, 1)]).unwrap()).is_empty());

        assert!(is_irreducible(&golden_mean()));
        assert!(!is_irreducible(&a_loop_to_b_loop()));
        assert!(!is_irreducible(&Sft::empty()));
    }

    #[test]
    fn nonwandering_examples() {
        let omega = nonwandering(&a_loop_to_b_loop());
        assert_eq!(omega.matrix(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(nonwandering(&golden_mean()), golden_mean());
        assert!(nonwandering(&Sft::from_edges(labels(&["a", "b"]), &[(0, 1)]).unwrap()).is_empty());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_irreducible(&cycle(3)).unwrap(), OrbitType::Finite(3));
        assert_eq!(classify_irreducible(&golden_mean()).unwrap(), OrbitType::Infinite);
        assert_eq!(classify_irreducible(&cycle(1)).unwrap(), OrbitType::Finite(1));
        assert_eq!(classify_irreducible(&a_loop_to_b_loop()).unwrap_err(), DecompError::NotIrreducible);
    }

    #[test]
    fn sigma_component_examples() {
        let two_loops = Sft::from_edges(labels(&["a", "b"]), &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(sigma_components(&two_loops).len(), 2);
        assert_eq!(sigma_components(&a_loop_to_b_loop()).len(), 1);
        assert_eq!(sigma_components(&golden_mean()).len(), 1);
        assert!(sigma_components(&Sft::empty()).is_empty());
        // the dead state c is pruned before components are formed
        let x = Sft::from_edges(labels(&["a", "b", "c"]), &[(0, 0), (1, 1), (0, 2), (1, 2)]).unwrap();
        let comps = sigma_components(&x);
        assert_eq!(comps.iter().map(|c| c.states.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn cyclic_period_examples() {
        assert_eq!(cyclic_period(&cycle(2)).unwrap(), (2, vec![0, 1]));
        assert_eq!(cyclic_period(&cycle(1)).unwrap().0, 1);
        assert_eq!(cyclic_period(&cycle(3)).unwrap(), (3, vec![0, 1, 2]));
        assert_eq!(brute_force_period(&cycle(3)), 3);
        assert_eq!(cyclic_period(&Sft::empty()).unwrap_err(), DecompError::Empty);
        let two_loops = Sft::from_edges(labels(&["a", "b"]), &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(cyclic_period(&two_loops).unwrap_err(), DecompError::NotWeaklyConnected);
    }

    #[test]
    fn strong_core_examples() {
        assert_eq!(strong_core(&golden_mean()).moduli(), vec![1]);
        let mut edges: Vec<(usize, usize)> = vec![(0, 1), (1, 0)];
        edges.extend([(2, 3), (3, 4), (4, 2)]);
        let disjoint = Sft::from_edges((0..5).map(|i| i.to_string()).collect(), &edges).unwrap();
        assert_eq!(strong_core(&disjoint).moduli(), vec![2, 3]);
        // 0 <-> 1 plus the 3-cycle 0 -> 1 -> 2 -> 0
        let chord = Sft::from_edges(labels(&["a", "b", "c"]), &[(0, 1), (1, 0), (1, 2), (2, 0)]).unwrap();
        assert_eq!(strong_core(&chord).moduli(), vec![1]);
        assert_eq!(brute_force_period(&chord), 1);
        assert!(strong_core(&Sft::empty()).components.is_empty());
    }

    #[test]
    fn strong_core_matches_brute_force_on_all_three_state_graphs() {
        for bits in 0..(1u64 << 9) {
            let x = from_bits(3, bits);
            for comp in strong_core(&x).components {
                let sub = x.induced(&comp.states);
                assert_eq!(comp.modulus, brute_force_period(&sub), "bits {bits}");
                for (u, v) in sub.edges() {
                    assert_eq!(comp.labels[v], (comp.labels[u] + 1) % comp.modulus);
                }
                for n in 1..=6 {
                    if periodic_count(&sub, n).unwrap() > 0u32.into() {
                        assert_eq!(n % comp.modulus, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn periodic_points_live_in_classes() {
        for bits in (0..(1u64 << 16)).step_by(37) {
            let x = from_bits(4, bits);
            let comps = irreducible_components(&x);
            for n in 1..=5 {
                let split: num_bigint::BigUint = comps.iter().map(|c| periodic_count(c, n).unwrap()).sum();
                assert_eq!(split, periodic_count(&x, n).unwrap());
            }
        }
    }

    #[test]
    fn adding_cross_edges_never_splits_components() {
        let two_loops = Sft::from_edges(labels(&["a", "b"]), &[(0, 0), (1, 1)]).unwrap();
        let joined = Sft::from_edges(labels(&["a", "b"]), &[(0, 0), (1, 1), (0, 1)]).unwrap();
        assert!(sigma_components(&joined).len() <= sigma_components(&two_loops).len());
        assert_eq!(prune(&joined), joined);
    }
}
