//! Exact clique counting and clique-freeness testing over bitset adjacency,
//! plus transversal-clique search across a family of disjoint parts.

use crate::graph::{low_mask, Graph, VertexSet};

/// Count of `m`-cliques; 128 bits because C(64,32) overflows a u64 in sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueCount {
    pub m: usize,
    pub count: u128,
}

/// Mask of vertices strictly greater than `v`.
#[inline(always)]
fn above(v: usize) -> u64 {
    if v >= 63 {
        0
    } else {
        !((1u64 << (v + 1)) - 1)
    }
}

/// Counts cliques of size `need` whose vertices all lie in `cand`, each clique
/// visited once in increasing vertex order.
fn count_rec(adj: &[u64], cand: u64, need: usize) -> u128 {
    if need == 0 {
        return 1;
    }
    if (cand.count_ones() as usize) < need {
        return 0;
    }
    if need == 1 {
        return u128::from(cand.count_ones());
    }
    let mut total = 0u128;
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        total += count_rec(adj, cand & adj[v] & above(v), need - 1);
    }
    total
}

/// Short-circuit existence version of [`count_rec`].
fn has_rec(adj: &[u64], cand: u64, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    if (cand.count_ones() as usize) < need {
        return false;
    }
    if need == 1 {
        return cand != 0;
    }
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if has_rec(adj, cand & adj[v] & above(v), need - 1) {
            return true;
        }
    }
    false
}

/// Exact number of `m`-cliques on raw adjacency rows.
pub(crate) fn count_cliques_rows(adj: &[u64], m: usize) -> u128 {
    count_rec(adj, low_mask(adj.len()), m)
}

/// Whether the raw adjacency contains no `m`-clique.
pub(crate) fn is_clique_free_rows(adj: &[u64], m: usize) -> bool {
    !has_rec(adj, low_mask(adj.len()), m)
}

/// Exact number of `m`-cliques in `g`.
///
/// Recursive neighborhood intersection with increasing-vertex ordering;
/// `m > n` yields zero. Panics if `m == 0`.
pub fn count_cliques(g: &Graph, m: usize) -> CliqueCount {
    assert!(m >= 1, "clique order must be at least 1");
    CliqueCount {
        m,
        count: count_cliques_rows(g.rows(), m),
    }
}

/// Exact number of `m`-cliques containing vertex `v`: the count of
/// `(m-1)`-cliques inside the neighborhood of `v`.
pub fn count_cliques_at(g: &Graph, v: usize, m: usize) -> CliqueCount {
    assert!(m >= 1, "clique order must be at least 1");
    assert!(v < g.n(), "vertex {v} out of range");
    CliqueCount {
        m,
        count: count_rec(g.rows(), g.rows()[v], m - 1),
    }
}

/// True iff `g` contains no `m`-clique; stops at the first witness.
pub fn is_clique_free(g: &Graph, m: usize) -> bool {
    is_clique_free_rows(g.rows(), m)
}

/// Searches for a clique with exactly one vertex in each part.
///
/// Exact backtracking, branching on the part with fewest remaining
/// candidates. Returns the chosen vertex for each part, in part order, or
/// `None` when no transversal clique exists. Panics if the parts overlap.
pub fn find_transversal_clique(g: &Graph, parts: &[VertexSet]) -> Option<Vec<usize>> {
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            assert!(a.is_disjoint(*b), "parts must be pairwise disjoint");
        }
    }
    let mut chosen = vec![usize::MAX; parts.len()];
    let cands: Vec<u64> = parts.iter().map(|p| p.bits()).collect();
    if transversal_rec(g.rows(), &mut chosen, &cands) {
        Some(chosen)
    } else {
        None
    }
}

fn transversal_rec(adj: &[u64], chosen: &mut [usize], cands: &[u64]) -> bool {
    // Most-constrained part first: among undecided parts pick the one with
    // the fewest candidates compatible with the current partial clique.
    let mut best: Option<(usize, u32)> = None;
    for (i, &c) in cands.iter().enumerate() {
        if chosen[i] != usize::MAX {
            continue;
        }
        let k = c.count_ones();
        if best.is_none_or(|(_, bk)| k < bk) {
            best = Some((i, k));
        }
    }
    let Some((part, k)) = best else {
        return true; // every part decided
    };
    if k == 0 {
        return false;
    }
    let mut rest = cands[part];
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        chosen[part] = v;
        let narrowed: Vec<u64> = cands
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if chosen[i] == usize::MAX {
                    c & adj[v]
                } else {
                    c
                }
            })
            .collect();
        if transversal_rec(adj, chosen, &narrowed) {
            return true;
        }
        chosen[part] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{random_graph, turan_graph, turan_plus_matching, Graph};

    /// Independent oracle: enumerate all m-subsets and test completeness
    /// pairwise over the edge relation.
    fn naive_count(g: &Graph, m: usize) -> u128 {
        fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
            fn rec(
                start: usize,
                n: usize,
                m: usize,
                cur: &mut Vec<usize>,
                out: &mut Vec<Vec<usize>>,
            ) {
                if cur.len() == m {
                    out.push(cur.clone());
                    return;
                }
                for v in start..n {
                    cur.push(v);
                    rec(v + 1, n, m, cur, out);
                    cur.pop();
                }
            }
            let mut out = Vec::new();
            rec(0, n, m, &mut Vec::new(), &mut out);
            out
        }
        subsets(g.n(), m)
            .into_iter()
            .filter(|s| {
                s.iter()
                    .enumerate()
                    .all(|(i, &u)| s[i + 1..].iter().all(|&v| g.has_edge(u, v)))
            })
            .count() as u128
    }

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn counts_on_fixed_graphs() {
        assert_eq!(count_cliques(&Graph::complete(4), 3).count, 4);
        assert_eq!(count_cliques(&cycle(5), 3).count, 0);
        let g = turan_plus_matching(6, 3, 1);
        assert_eq!(naive_count(&g, 4), 4, "oracle value");
        assert_eq!(count_cliques(&g, 4).count, 4);
    }

    #[test]
    fn counts_match_naive_on_random_graphs() {
        for seed in 0..50 {
            let n = 2 + (seed as usize) % 11; // up to 12 vertices
            let g = random_graph(n, 0.5, seed);
            for m in 1..=6.min(n) {
                assert_eq!(
                    count_cliques(&g, m).count,
                    naive_count(&g, m),
                    "mismatch at seed {seed}, n {n}, m {m}"
                );
            }
        }
    }

    #[test]
    fn counts_match_naive_exhaustively_small() {
        for n in 1..=5usize {
            for mask in 0u64..(1 << crate::graph::pair_count(n)) {
                let g = Graph::from_pair_mask(n, mask);
                for m in 1..=n {
                    assert_eq!(count_cliques(&g, m).count, naive_count(&g, m));
                }
            }
        }
    }

    #[test]
    fn per_vertex_counts() {
        let k4 = Graph::complete(4);
        for v in 0..4 {
            assert_eq!(count_cliques_at(&k4, v, 3).count, 3);
        }
        for v in 0..5 {
            assert_eq!(count_cliques_at(&cycle(5), v, 3).count, 0);
        }
    }

    #[test]
    fn handshake_identity_on_random_graphs() {
        for seed in 0..200 {
            let n = 2 + (seed as usize) % 13;
            let g = random_graph(n, 0.5, seed + 500);
            for m in 2..=5.min(n) {
                let total: u128 = (0..n).map(|v| count_cliques_at(&g, v, m).count).sum();
                assert_eq!(
                    total,
                    m as u128 * count_cliques(&g, m).count,
                    "handshake fails at seed {seed}, m {m}"
                );
            }
        }
    }

    #[test]
    fn freeness_tests() {
        assert!(is_clique_free(&cycle(5), 3));
        assert!(is_clique_free(&turan_graph(6, 3), 4));
        assert!(!is_clique_free(&turan_plus_matching(6, 3, 1), 4));
        assert!(is_clique_free(&Graph::empty(1), 2));
    }

    #[test]
    fn turan_graphs_are_clique_free() {
        for n in 1..=20usize {
            for r in 1..=n {
                assert!(
                    is_clique_free(&turan_graph(n, r), r + 1),
                    "T_{r}({n}) contains K_{}",
                    r + 1
                );
            }
        }
    }

    #[test]
    fn matching_construction_clique_counts() {
        // t * k^(r-1) copies, each using exactly one matching edge.
        for r in [2usize, 3] {
            for k in 1..=(12 / r) {
                let n = r * k;
                for t in 0..=(k / 2) {
                    let g = turan_plus_matching(n, r, t);
                    assert_eq!(
                        count_cliques(&g, r + 1).count,
                        (t * k.pow(r as u32 - 1)) as u128,
                        "mismatch at r={r}, k={k}, t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn transversal_in_turan_graph() {
        let g = turan_graph(6, 3);
        let parts: Vec<VertexSet> = vec![
            [0usize, 1].into_iter().collect(),
            [2usize, 3].into_iter().collect(),
            [4usize, 5].into_iter().collect(),
        ];
        let hit = find_transversal_clique(&g, &parts).expect("complete multipartite");
        for (i, &v) in hit.iter().enumerate() {
            assert!(parts[i].contains(v));
            for &u in &hit[i + 1..] {
                assert!(g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn transversal_absent_in_empty_graph() {
        let g = Graph::empty(2);
        let parts = vec![VertexSet::singleton(0), VertexSet::singleton(1)];
        assert_eq!(find_transversal_clique(&g, &parts), None);
    }

    /// Oracle: full Cartesian product over the parts.
    fn naive_transversal_exists(g: &Graph, parts: &[VertexSet]) -> bool {
        fn rec(g: &Graph, parts: &[VertexSet], chosen: &mut Vec<usize>) -> bool {
            if chosen.len() == parts.len() {
                return true;
            }
            for v in parts[chosen.len()].iter() {
                if chosen.iter().all(|&u| g.has_edge(u, v)) {
                    chosen.push(v);
                    if rec(g, parts, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        rec(g, parts, &mut Vec::new())
    }

    #[test]
    fn transversal_agrees_with_naive_product_search() {
        let mut rng_seed = 0u64;
        for _ in 0..120 {
            rng_seed += 1;
            let n = 4 + (rng_seed as usize) % 9; // up to 12
            let r = 2 + (rng_seed as usize) % 3; // up to 4
            let g = random_graph(n, 0.45, rng_seed);
            // Deterministic disjoint parts: round-robin over a prefix.
            let take = n.min(r * 2 + (rng_seed as usize) % 3);
            let mut parts = vec![VertexSet::EMPTY; r];
            for v in 0..take {
                parts[v % r].insert(v);
            }
            if parts.iter().any(|p| p.is_empty()) {
                continue;
            }
            let found = find_transversal_clique(&g, &parts);
            assert_eq!(
                found.is_some(),
                naive_transversal_exists(&g, &parts),
                "disagreement at seed {rng_seed}"
            );
            if let Some(hit) = found {
                for (i, &v) in hit.iter().enumerate() {
                    assert!(parts[i].contains(v));
                    for &u in &hit[i + 1..] {
                        assert!(g.has_edge(u, v), "returned set is not a clique");
                    }
                }
            }
        }
    }
}
