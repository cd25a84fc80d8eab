//! Independent oracles for the acceptance suite: plain subset scans and full
//! assignment enumerations, sharing no algorithmic code with the library.

use cliquelab::Graph;

/// Number of m-cliques by enumerating every m-subset and testing all pairs.
pub fn clique_count(g: &Graph, m: usize) -> u128 {
    fn rec(g: &Graph, start: usize, m: usize, chosen: &mut Vec<usize>, count: &mut u128) {
        if chosen.len() == m {
            let is_clique = chosen
                .iter()
                .enumerate()
                .all(|(i, &u)| chosen[i + 1..].iter().all(|&v| g.has_edge(u, v)));
            if is_clique {
                *count += 1;
            }
            return;
        }
        for v in start..g.n() {
            chosen.push(v);
            rec(g, v + 1, m, chosen, count);
            chosen.pop();
        }
    }
    let mut count = 0;
    rec(g, 0, m, &mut Vec::new(), &mut count);
    count
}

/// True iff some assignment of vertices to r parts has no same-part edge,
/// by scanning all r^n assignments.
pub fn r_partite_scan(g: &Graph, r: usize) -> bool {
    distance_rn_scan(g, r) == 0
}

/// Minimum same-part edge count over all r^n assignments, each evaluated
/// from scratch.
pub fn distance_rn_scan(g: &Graph, r: usize) -> usize {
    let n = g.n();
    let r = r.min(n);
    let total = (r as u64).pow(n as u32);
    let mut best = usize::MAX;
    for code in 0..total {
        let mut c = code;
        let mut part = vec![0u8; n];
        for slot in part.iter_mut() {
            *slot = (c % r as u64) as u8;
            c /= r as u64;
        }
        let mut interior = 0usize;
        for u in 0..n {
            for v in (u + 1)..n {
                if part[u] == part[v] && g.has_edge(u, v) {
                    interior += 1;
                }
            }
        }
        if interior < best {
            best = interior;
            if best == 0 {
                return 0;
            }
        }
    }
    best
}

/// Builds the graph for a labeled-census index using an explicit edge list
/// (its own pair ordering, independent of the library's mask decoding).
pub fn graph_from_index(n: usize, index: u64) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if (index >> k) & 1 == 1 {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

/// Counts (K_{r+1}-free graphs, r-partite graphs among them) over all
/// labeled graphs on n vertices.
pub fn census_counts(n: usize, r: usize) -> (u64, u64) {
    let pairs = n * (n - 1) / 2;
    let mut free = 0u64;
    let mut partite = 0u64;
    for index in 0u64..(1 << pairs) {
        let g = graph_from_index(n, index);
        if clique_count(&g, r + 1) != 0 {
            continue;
        }
        free += 1;
        if r_partite_scan(&g, r) {
            partite += 1;
        }
    }
    (free, partite)
}
