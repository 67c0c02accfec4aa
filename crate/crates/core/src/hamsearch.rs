//! Hamiltonian cycle enumeration and walk verification.
//!
//! Cycle enumeration is exhaustive DFS over *coded* walks: steps are signed
//! indices into a generator multiset, so two generators with the same image
//! in the quotient give distinct codings (they lift differently). At order 8
//! plain DFS needs no sophistication; the order-56 path search adds the usual
//! connectivity and degree pruning plus a wall-clock budget.

use std::time::{Duration, Instant};

use crate::group::{Elem, GroupError, GroupTable};

/// Anything a walk can be verified in: a table group or an explicit
/// semidirect product.
pub trait WalkGroup {
    type El: Clone + PartialEq;
    fn order(&self) -> usize;
    fn identity(&self) -> Self::El;
    fn compose(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// Dense index in `0..order`, used to check vertex distinctness.
    fn index_of(&self, a: &Self::El) -> usize;
}

impl WalkGroup for GroupTable {
    type El = Elem;

    fn order(&self) -> usize {
        GroupTable::order(self)
    }

    fn identity(&self) -> Elem {
        0
    }

    fn compose(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul(*a, *b)
    }

    fn index_of(&self, a: &Elem) -> usize {
        *a
    }
}

/// A closed walk recorded as signed 1-based indices into a generator list:
/// `+j` steps by generator `j-1`, `-j` by its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodedCycle {
    pub steps: Vec<i32>,
}

impl CodedCycle {
    pub fn new(steps: Vec<i32>) -> CodedCycle {
        CodedCycle { steps }
    }

    /// The same cycle traversed backwards, with every step inverted.
    pub fn reversed(&self) -> CodedCycle {
        CodedCycle {
            steps: self.steps.iter().rev().map(|&s| -s).collect(),
        }
    }

    pub fn gen_index(step: i32) -> usize {
        (step.unsigned_abs() as usize) - 1
    }
}

/// Walks a coded cycle through the quotient group and returns the step
/// elements, resolving `-j` to the group inverse of entry `j-1`.
pub fn coded_steps(table: &GroupTable, multiset: &[Elem], cycle: &CodedCycle) -> Vec<Elem> {
    cycle
        .steps
        .iter()
        .map(|&s| {
            let g = multiset[CodedCycle::gen_index(s)];
            if s > 0 {
                g
            } else {
                table.inv(g)
            }
        })
        .collect()
}

/// All coded hamiltonian cycles based at the identity, with the inverse step
/// `-j` offered only where `allow_inverse[j]` is set (callers clear the flag
/// for generators that are their own inverse, so each element of
/// `S ∪ S^{-1}` contributes exactly one step symbol).
///
/// Deterministic order: depth-first with step symbols tried as
/// `+1, -1, +2, -2, ...`, which makes the output lexicographic under that
/// symbol order. Both traversal directions of each cycle are included.
pub fn enumerate_ham_cycles_masked(
    table: &GroupTable,
    multiset: &[Elem],
    allow_inverse: &[bool],
) -> Vec<CodedCycle> {
    assert!(table.order() <= 64);
    assert_eq!(multiset.len(), allow_inverse.len());
    let n = table.order();
    // step symbols in canonical order, with their vertex action
    let mut symbols: Vec<(i32, Elem)> = Vec::new();
    for (j, &g) in multiset.iter().enumerate() {
        symbols.push((j as i32 + 1, g));
        if allow_inverse[j] {
            symbols.push((-(j as i32 + 1), table.inv(g)));
        }
    }
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(n);
    dfs_cycles(table, &symbols, n, 0, 1u64, &mut steps, &mut out);
    out
}

fn dfs_cycles(
    table: &GroupTable,
    symbols: &[(i32, Elem)],
    n: usize,
    at: Elem,
    visited: u64,
    steps: &mut Vec<i32>,
    out: &mut Vec<CodedCycle>,
) {
    if steps.len() == n - 1 {
        // last step must close the cycle
        for &(sym, g) in symbols {
            if table.mul(at, g) == 0 {
                steps.push(sym);
                out.push(CodedCycle::new(steps.clone()));
                steps.pop();
            }
        }
        return;
    }
    for &(sym, g) in symbols {
        let next = table.mul(at, g);
        if next != 0 && visited >> next & 1 == 0 {
            steps.push(sym);
            dfs_cycles(table, symbols, n, next, visited | 1 << next, steps, out);
            steps.pop();
        }
    }
}

/// Coded hamiltonian cycles of `Cay(G; S)` for a generating multiset, with
/// inverse steps offered exactly for the non-involutions.
pub fn enumerate_ham_cycles(
    table: &GroupTable,
    multiset: &[Elem],
) -> Result<Vec<CodedCycle>, GroupError> {
    for &g in multiset {
        table.checked(g)?;
    }
    if !table.generates(multiset) {
        return Err(GroupError::NotGenerating);
    }
    let mask: Vec<bool> = multiset.iter().map(|&g| table.inv(g) != g).collect();
    Ok(enumerate_ham_cycles_masked(table, multiset, &mask))
}

/// True iff the walk is closed, has length equal to the group order, and its
/// partial products are pairwise distinct. This is the independent oracle
/// every certified cycle is replayed against.
pub fn verify_ham_cycle<G: WalkGroup>(group: &G, steps: &[G::El]) -> bool {
    if steps.len() != group.order() {
        return false;
    }
    let mut seen = vec![false; group.order()];
    let mut at = group.identity();
    for step in steps {
        let idx = group.index_of(&at);
        if seen[idx] {
            return false;
        }
        seen[idx] = true;
        at = group.compose(&at, step);
    }
    at == group.identity()
}

/// True iff the walk visits pairwise-distinct vertices, covers the group,
/// starts at the identity, and ends at `target`.
pub fn verify_ham_path(table: &GroupTable, steps: &[Elem], target: Elem) -> bool {
    if steps.len() != table.order() - 1 {
        return false;
    }
    let mut seen = vec![false; table.order()];
    let mut at = 0;
    seen[0] = true;
    for &s in steps {
        at = table.mul(at, s);
        if seen[at] {
            return false;
        }
        seen[at] = true;
    }
    at == target
}

/// Outcome of a budgeted hamiltonian-path search.
///
/// A timeout is reported separately from a completed search that proved no
/// path exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathSearch {
    /// Step elements of a hamiltonian path from the identity to the target.
    Found(Vec<Elem>),
    /// The search space was exhausted: no hamiltonian path exists.
    Exhausted,
    /// The budget ran out first.
    Timeout,
}

/// Backtracking hamiltonian-path search from the identity to `target` in
/// `Cay(G; S)`, for groups of order up to 56.
///
/// Prunes a branch when the residual graph disconnects or when more than two
/// unvisited vertices have residual degree at most 1; candidate successors
/// are tried in order of ascending residual degree (ties by index), which
/// keeps the search deterministic.
pub fn ham_path(
    table: &GroupTable,
    support: &[Elem],
    target: Elem,
    budget: Duration,
) -> PathSearch {
    assert!(table.order() <= 56 + 8);
    assert_ne!(target, 0, "target must differ from the identity");
    let n = table.order();
    let mut adj: Vec<Vec<Elem>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut nb: Vec<Elem> = support
            .iter()
            .flat_map(|&s| [table.mul(v, s), table.mul(v, table.inv(s))])
            .filter(|&w| w != v)
            .collect();
        nb.sort_unstable();
        nb.dedup();
        adj[v] = nb;
    }
    let deadline = Instant::now() + budget;
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut path = vec![0usize];
    let mut nodes: u64 = 0;
    match dfs_path(
        table, &adj, target, &mut visited, &mut path, &mut nodes, deadline,
    ) {
        DfsOutcome::Found => {
            let steps = path
                .windows(2)
                .map(|w| table.mul(table.inv(w[0]), w[1]))
                .collect();
            PathSearch::Found(steps)
        }
        DfsOutcome::Exhausted => PathSearch::Exhausted,
        DfsOutcome::Timeout => PathSearch::Timeout,
    }
}

enum DfsOutcome {
    Found,
    Exhausted,
    Timeout,
}

fn dfs_path(
    table: &GroupTable,
    adj: &[Vec<Elem>],
    target: Elem,
    visited: &mut [bool],
    path: &mut Vec<Elem>,
    nodes: &mut u64,
    deadline: Instant,
) -> DfsOutcome {
    *nodes += 1;
    if *nodes % 4096 == 0 && Instant::now() > deadline {
        return DfsOutcome::Timeout;
    }
    let n = adj.len();
    let current = *path.last().unwrap();
    if path.len() == n {
        return if current == target {
            DfsOutcome::Found
        } else {
            DfsOutcome::Exhausted
        };
    }
    // target must stay reachable until the very end
    if visited[target] {
        return DfsOutcome::Exhausted;
    }

    // residual degrees over unvisited vertices (current counts as available)
    let res_deg = |v: Elem| -> usize {
        adj[v]
            .iter()
            .filter(|&&w| !visited[w] || w == current)
            .count()
    };
    let mut low = 0;
    for v in 0..n {
        if !visited[v] && v != target && res_deg(v) <= 1 {
            low += 1;
        }
    }
    if low > 2 {
        return DfsOutcome::Exhausted;
    }
    // connectivity of the residual graph from the current vertex
    let mut reach = vec![false; n];
    reach[current] = true;
    let mut stack = vec![current];
    let mut count = 0;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !visited[w] && !reach[w] {
                reach[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    if count != visited.iter().filter(|&&b| !b).count() {
        return DfsOutcome::Exhausted;
    }

    let mut cands: Vec<(usize, Elem)> = adj[current]
        .iter()
        .filter(|&&w| !visited[w])
        .map(|&w| (res_deg(w), w))
        .collect();
    cands.sort_unstable();
    for (_, w) in cands {
        visited[w] = true;
        path.push(w);
        match dfs_path(table, adj, target, visited, path, nodes, deadline) {
            DfsOutcome::Exhausted => {}
            other => return other,
        }
        path.pop();
        visited[w] = false;
    }
    DfsOutcome::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{c8, e8, g56, table_for, GroupTag};

    #[test]
    fn c8_single_generator_has_two_cycles() {
        let t = c8();
        let cycles = enumerate_ham_cycles(&t, &[1]).unwrap();
        assert_eq!(cycles.len(), 2);
        assert_eq!(cycles[0].steps, vec![1; 8]);
        assert_eq!(cycles[1].steps, vec![-1; 8]);
    }

    /// Independent oracle: hamiltonian cycles of the cube as vertex
    /// permutations, with no reference to the coded DFS.
    fn cube_cycles_by_permutations() -> usize {
        let t = e8();
        let mut count = 0;
        let mut perm: Vec<Elem> = (1..8).collect();
        // iterate all 7! orderings of the non-identity vertices
        fn rec(t: &GroupTable, rest: &mut Vec<Elem>, path: &mut Vec<Elem>, count: &mut usize) {
            let adj = |a: Elem, b: Elem| -> bool {
                let step = t.mul(t.inv(a), b);
                [1, 2, 4].contains(&step) // cube edges: the basis involutions
            };
            if rest.is_empty() {
                if adj(*path.last().unwrap(), 0) {
                    *count += 1;
                }
                return;
            }
            for i in 0..rest.len() {
                let v = rest.remove(i);
                if adj(*path.last().unwrap(), v) {
                    path.push(v);
                    rec(t, rest, path, count);
                    path.pop();
                }
                rest.insert(i, v);
            }
        }
        rec(&t, &mut perm, &mut vec![0], &mut count);
        count
    }

    #[test]
    fn cube_has_twelve_directed_based_cycles() {
        let t = e8();
        let cycles = enumerate_ham_cycles(&t, &[1, 2, 4]).unwrap();
        assert_eq!(cycles.len(), 12);
        assert_eq!(cycles.len(), cube_cycles_by_permutations());
        for c in &cycles {
            let steps = coded_steps(&t, &[1, 2, 4], c);
            assert!(verify_ham_cycle(&t, &steps));
        }
    }

    #[test]
    fn duplicated_entry_multiplies_codings() {
        let t = e8();
        let base = enumerate_ham_cycles(&t, &[1, 2, 4]).unwrap().len();
        let dup = enumerate_ham_cycles(&t, &[1, 1, 2, 4]).unwrap().len();
        assert!(dup > base);
        // each cycle uses e1 at least once, so duplication at least doubles
        assert!(dup >= 2 * base);
    }

    #[test]
    fn non_generating_multiset_is_an_error() {
        let t = e8();
        assert!(enumerate_ham_cycles(&t, &[1, 2]).is_err());
    }

    #[test]
    fn cycle_count_is_automorphism_invariant() {
        let t = table_for(GroupTag::D8);
        let multiset = vec![4, 1]; // f, x
        let base = enumerate_ham_cycles(&t, &multiset).unwrap().len();
        for aut in t.automorphisms() {
            let mapped: Vec<Elem> = multiset.iter().map(|&g| aut[g]).collect();
            let n = enumerate_ham_cycles(&t, &mapped).unwrap().len();
            assert_eq!(n, base);
        }
    }

    #[test]
    fn verify_rejects_wrong_lengths_and_repeats() {
        let t = c8();
        assert!(verify_ham_cycle(&t, &vec![1usize; 8]));
        assert!(!verify_ham_cycle(&t, &vec![1usize; 4]));
        assert!(!verify_ham_cycle(&t, &vec![2usize; 8]));
    }

    #[test]
    fn ham_path_roundtrips_on_the_cycle_graph() {
        let t = c8();
        match ham_path(&t, &[1], 1, Duration::from_secs(5)) {
            PathSearch::Found(steps) => {
                assert!(verify_ham_path(&t, &steps, 1));
                assert_eq!(steps, vec![7; 7]); // the long way round
            }
            other => panic!("expected a path, got {other:?}"),
        }
    }

    #[test]
    fn cube_is_laceable_to_the_opposite_corner() {
        let t = e8();
        let target = 7; // e1 e2 e3
        match ham_path(&t, &[1, 2, 4], target, Duration::from_secs(5)) {
            PathSearch::Found(steps) => assert!(verify_ham_path(&t, &steps, target)),
            other => panic!("expected a path, got {other:?}"),
        }
    }

    #[test]
    fn cube_has_no_path_to_adjacent_parity() {
        // The cube is bipartite: a 7-step path from 1 must end at odd parity.
        let t = e8();
        assert_eq!(
            ham_path(&t, &[1, 2, 4], 3, Duration::from_secs(5)),
            PathSearch::Exhausted
        );
    }

    #[test]
    fn path_search_agrees_with_full_enumeration_at_order_8() {
        // Soundness and completeness at order 8: a path 1 -> t exists iff some
        // permutation walk realizes it.
        let t = table_for(GroupTag::D8);
        let support = vec![4usize, 1];
        for target in 1..8 {
            let by_search = matches!(
                ham_path(&t, &support, target, Duration::from_secs(5)),
                PathSearch::Found(_)
            );
            let by_brute = brute_force_path_exists(&t, &support, target);
            assert_eq!(by_search, by_brute, "target {target}");
        }
    }

    fn brute_force_path_exists(t: &GroupTable, support: &[Elem], target: Elem) -> bool {
        let steps: Vec<Elem> = support
            .iter()
            .flat_map(|&s| [s, t.inv(s)])
            .collect();
        fn rec(t: &GroupTable, steps: &[Elem], at: Elem, visited: u64, target: Elem) -> bool {
            if visited.count_ones() as usize == t.order() {
                return at == target;
            }
            steps.iter().any(|&s| {
                let next = t.mul(at, s);
                visited >> next & 1 == 0 && rec(t, steps, next, visited | 1 << next, target)
            })
        }
        rec(t, &steps, 0, 1, target)
    }

    #[test]
    fn g56_sample_path() {
        let t = g56();
        // s and one involution generate
        let support = vec![8usize, 1];
        assert!(t.generates(&support));
        match ham_path(&t, &support, 9, Duration::from_secs(10)) {
            PathSearch::Found(steps) => assert!(verify_ham_path(&t, &steps, 9)),
            other => panic!("expected a path, got {other:?}"),
        }
    }
}
