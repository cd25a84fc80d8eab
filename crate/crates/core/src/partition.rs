//! r-partitions of a graph: interior edges, exact distance to r-partiteness,
//! optimal-partition enumeration, and a local-search heuristic with a proven
//! interior-edge guarantee.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Largest vertex count the exact subset-DP solver accepts (3^n time, 2^n space).
pub const MAX_EXACT_DISTANCE_VERTICES: usize = 18;
/// Largest part count the exact solver accepts.
pub const MAX_EXACT_DISTANCE_PARTS: usize = 8;

/// Assignment of every vertex to one of `r` parts. Parts may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RPartition {
    r: usize,
    assignment: Vec<u8>,
    interior: usize,
}

impl RPartition {
    /// Builds a partition from a per-vertex part assignment, computing the
    /// interior edge count. Panics if the assignment length differs from the
    /// vertex count or any part index is `>= r`. Part indices live in a u8,
    /// so `r <= 256`.
    pub fn new(g: &Graph, r: usize, assignment: Vec<u8>) -> Self {
        assert_eq!(assignment.len(), g.n(), "assignment length must equal n");
        assert!((1..=256).contains(&r), "part count out of range");
        assert!(
            assignment.iter().all(|&p| (p as usize) < r),
            "part index out of range"
        );
        let interior = interior_of_assignment(g, r, &assignment);
        RPartition {
            r,
            assignment,
            interior,
        }
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn part_of(&self, v: usize) -> usize {
        self.assignment[v] as usize
    }

    #[inline]
    pub fn assignment(&self) -> &[u8] {
        &self.assignment
    }

    /// Cached interior edge count.
    #[inline]
    pub fn interior(&self) -> usize {
        self.interior
    }

    /// The parts as vertex sets, indexed `0..r`.
    pub fn parts(&self) -> Vec<VertexSet> {
        let mut parts = vec![VertexSet::EMPTY; self.r];
        for (v, &p) in self.assignment.iter().enumerate() {
            parts[p as usize].insert(v);
        }
        parts
    }

    pub fn part(&self, j: usize) -> VertexSet {
        assert!(j < self.r);
        let mut s = VertexSet::EMPTY;
        for (v, &p) in self.assignment.iter().enumerate() {
            if p as usize == j {
                s.insert(v);
            }
        }
        s
    }

    /// Relabels parts so they are ordered by smallest contained vertex,
    /// nonempty parts first. This is the deduplication order used by the
    /// optimal-partition enumeration.
    pub fn canonicalize_part_order(&self) -> RPartition {
        let mut map = vec![u8::MAX; self.r];
        let mut next = 0u8;
        let mut assignment = Vec::with_capacity(self.assignment.len());
        for &p in &self.assignment {
            if map[p as usize] == u8::MAX {
                map[p as usize] = next;
                next += 1;
            }
            assignment.push(map[p as usize]);
        }
        RPartition {
            r: self.r,
            assignment,
            interior: self.interior,
        }
    }
}

fn interior_of_assignment(g: &Graph, r: usize, assignment: &[u8]) -> usize {
    let mut masks = vec![0u64; r];
    for (v, &p) in assignment.iter().enumerate() {
        masks[p as usize] |= 1u64 << v;
    }
    masks
        .iter()
        .map(|&m| g.edges_within(VertexSet::from_bits(m)))
        .sum()
}

/// Number of edges with both endpoints in the same part.
pub fn interior_edges(g: &Graph, p: &RPartition) -> usize {
    assert_eq!(p.assignment.len(), g.n());
    interior_of_assignment(g, p.r, &p.assignment)
}

/// Exact distance to r-partiteness plus one optimal partition as witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceResult {
    pub distance: usize,
    pub witness: RPartition,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("exact distance solver limited to n <= {max}, got n = {n}")]
    TooManyVertices { n: usize, max: usize },
    #[error("exact distance solver limited to r <= {max}, got r = {r}")]
    TooManyParts { r: usize, max: usize },
    #[error("r must be at least 1")]
    ZeroParts,
}

/// Per-subset edge counts: `e[s]` is the edge count of the subgraph induced
/// by the bitset `s`. Built by peeling the lowest vertex of each subset.
fn subset_edge_table(g: &Graph) -> Vec<u16> {
    let n = g.n();
    let size = 1usize << n;
    let mut e = vec![0u16; size];
    for s in 1..size {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        e[s] = e[rest] + (g.rows()[v] & rest as u64).count_ones() as u16;
    }
    e
}

/// Exact minimum interior edge count over all r-partitions, via layered
/// subset DP, with a witness reconstructed from the DP tables.
pub fn distance_to_r_partite(g: &Graph, r: usize) -> Result<DistanceResult, DistanceError> {
    if r == 0 {
        return Err(DistanceError::ZeroParts);
    }
    let n = g.n();
    if r >= n {
        // Each vertex in its own part; extra parts stay empty (the witness
        // representation caps the part count at 256).
        let assignment: Vec<u8> = (0..n).map(|v| v as u8).collect();
        return Ok(DistanceResult {
            distance: 0,
            witness: RPartition::new(g, r.min(256), assignment),
        });
    }
    if n > MAX_EXACT_DISTANCE_VERTICES {
        return Err(DistanceError::TooManyVertices {
            n,
            max: MAX_EXACT_DISTANCE_VERTICES,
        });
    }
    if r > MAX_EXACT_DISTANCE_PARTS {
        return Err(DistanceError::TooManyParts {
            r,
            max: MAX_EXACT_DISTANCE_PARTS,
        });
    }

    let edge = subset_edge_table(g);
    let full = (1usize << n) - 1;

    // layers[k][s] = min interior over k-partitions of subset s.
    let mut layers: Vec<Vec<u32>> = Vec::with_capacity(r);
    layers.push(edge.iter().map(|&x| u32::from(x)).collect());
    for _ in 1..r {
        let prev = layers.last().unwrap();
        let mut cur = vec![u32::MAX; full + 1];
        for s in 0..=full {
            // New part t is a subset of s; the complement keeps k-1 parts.
            let mut best = prev[s]; // t = empty
            let mut t = s;
            while t != 0 {
                let cand = prev[s ^ t].saturating_add(u32::from(edge[t]));
                if cand < best {
                    best = cand;
                }
                t = (t - 1) & s;
            }
            cur[s] = best;
        }
        layers.push(cur);
    }
    let distance = layers[r - 1][full] as usize;

    // Reconstruct one optimal partition by walking the layers.
    let mut assignment = vec![0u8; n];
    let mut s = full;
    for k in (1..r).rev() {
        // Find a part t with layers[k-1][s^t] + e[t] == layers[k][s].
        let target = layers[k][s];
        let mut chosen = 0usize;
        let mut t = s;
        loop {
            if layers[k - 1][s ^ t].saturating_add(u32::from(edge[t])) == target {
                chosen = t;
                break;
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        let mut bits = chosen;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            assignment[v] = k as u8;
        }
        s ^= chosen;
    }
    // Remaining vertices (subset s) are part 0 already.
    let witness = RPartition::new(g, r, assignment).canonicalize_part_order();
    debug_assert_eq!(witness.interior(), distance);
    Ok(DistanceResult { distance, witness })
}

/// Exact distance by branch and bound over assignments, seeded with the
/// local-search value as incumbent. Slower than the subset DP in the worst
/// case but not bound by its 2^n tables; intended for occasional larger
/// instances.
pub fn distance_to_r_partite_branch_bound(g: &Graph, r: usize) -> Result<DistanceResult, DistanceError> {
    if r == 0 {
        return Err(DistanceError::ZeroParts);
    }
    let n = g.n();
    if r >= n {
        let assignment: Vec<u8> = (0..n).map(|v| v as u8).collect();
        return Ok(DistanceResult {
            distance: 0,
            witness: RPartition::new(g, r.min(256), assignment),
        });
    }
    let incumbent = local_search_partition(g, r, 0);
    let mut best = incumbent.interior();
    let mut best_assignment = incumbent.assignment().to_vec();
    let mut masks = vec![0u64; r];
    let mut assignment = vec![0u8; n];

    fn rec(
        g: &Graph,
        r: usize,
        v: usize,
        interior: usize,
        used: usize,
        masks: &mut [u64],
        assignment: &mut [u8],
        best: &mut usize,
        best_assignment: &mut Vec<u8>,
    ) {
        if interior >= *best {
            return; // even with zero further interior edges we cannot improve
        }
        if v == g.n() {
            *best = interior;
            best_assignment.copy_from_slice(assignment);
            return;
        }
        let row = g.rows()[v];
        // Symmetry breaking: a new part may only open at the next unused index.
        let limit = (used + 1).min(r);
        for k in 0..limit {
            let delta = (row & masks[k]).count_ones() as usize;
            masks[k] |= 1u64 << v;
            assignment[v] = k as u8;
            rec(
                g,
                r,
                v + 1,
                interior + delta,
                used.max(k + 1),
                masks,
                assignment,
                best,
                best_assignment,
            );
            masks[k] &= !(1u64 << v);
        }
    }
    rec(
        g,
        r,
        0,
        0,
        0,
        &mut masks,
        &mut assignment,
        &mut best,
        &mut best_assignment,
    );
    let witness = RPartition::new(g, r, best_assignment).canonicalize_part_order();
    Ok(DistanceResult {
        distance: best,
        witness,
    })
}

/// Reusable distance solver for bulk workloads: owns the DP buffers so a
/// census shard does not reallocate per graph. Value-only (no witness).
pub(crate) struct DistanceSolver {
    edge: Vec<u16>,
    prev: Vec<u32>,
    cur: Vec<u32>,
}

impl DistanceSolver {
    pub(crate) fn new() -> Self {
        DistanceSolver {
            edge: Vec::new(),
            prev: Vec::new(),
            cur: Vec::new(),
        }
    }

    /// Minimum interior edges over all r-partitions of the graph given by
    /// adjacency rows. Caller keeps `adj.len() <= MAX_EXACT_DISTANCE_VERTICES`
    /// and `r <= MAX_EXACT_DISTANCE_PARTS` (or `r >= n`).
    pub(crate) fn distance(&mut self, adj: &[u64], r: usize) -> usize {
        let n = adj.len();
        if r >= n {
            return 0;
        }
        debug_assert!(n <= MAX_EXACT_DISTANCE_VERTICES && r >= 1);
        let size = 1usize << n;
        self.edge.resize(size, 0);
        self.prev.resize(size, 0);
        self.cur.resize(size, 0);
        self.edge[0] = 0;
        for s in 1..size {
            let v = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            self.edge[s] = self.edge[rest] + (adj[v] & rest as u64).count_ones() as u16;
        }
        for s in 0..size {
            self.prev[s] = u32::from(self.edge[s]);
        }
        for _ in 1..r {
            for s in 0..size {
                let mut best = self.prev[s];
                let mut t = s;
                while t != 0 {
                    let cand = self.prev[s ^ t] + u32::from(self.edge[t]);
                    if cand < best {
                        best = cand;
                    }
                    t = (t - 1) & s;
                }
                self.cur[s] = best;
            }
            std::mem::swap(&mut self.prev, &mut self.cur);
        }
        self.prev[size - 1] as usize
    }
}

/// Decides r-colorability by backtracking; much faster than the full DP.
pub fn is_r_partite(g: &Graph, r: usize) -> bool {
    is_r_partite_rows(g.rows(), r)
}

pub(crate) fn is_r_partite_rows(adj: &[u64], r: usize) -> bool {
    let n = adj.len();
    if r >= n {
        return true;
    }
    if r == 0 {
        return false; // n >= 1 vertex cannot be placed
    }
    // Color vertices in descending degree order; a vertex may use at most one
    // color beyond those already used (color symmetry breaking).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));
    let mut color = vec![u8::MAX; n];

    fn rec(adj: &[u64], order: &[usize], color: &mut [u8], idx: usize, used: u8, r: u8) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        let mut blocked = 0u64; // bit k set when color k conflicts
        let mut row = adj[v];
        while row != 0 {
            let u = row.trailing_zeros() as usize;
            row &= row - 1;
            if color[u] != u8::MAX {
                blocked |= 1u64 << color[u];
            }
        }
        let limit = r.min(used + 1);
        for k in 0..limit {
            if blocked & (1u64 << k) != 0 {
                continue;
            }
            color[v] = k;
            if rec(adj, order, color, idx + 1, used.max(k + 1), r) {
                return true;
            }
            color[v] = u8::MAX;
        }
        false
    }
    rec(adj, &order, &mut color, 0, 0, r as u8)
}

/// True iff `g` is t-far from r-partite: every way of making it r-partite
/// deletes at least `t` edges. `t = 0` is vacuously true.
pub fn is_t_far(g: &Graph, r: usize, t: usize) -> Result<bool, DistanceError> {
    if r == 0 {
        return Err(DistanceError::ZeroParts);
    }
    if t == 0 {
        return Ok(true);
    }
    if is_r_partite(g, r) {
        return Ok(false);
    }
    if t == 1 {
        return Ok(true); // not r-partite means distance >= 1
    }
    Ok(distance_to_r_partite(g, r)?.distance >= t)
}

/// Seeded local search: start from a random balanced assignment, then move
/// any vertex whose relocation strictly decreases the interior edge count
/// (scanning vertices in index order, moving to the lowest-index strictly
/// improving part) until no move improves.
///
/// At termination every vertex has at most `d(v)/r` same-part neighbors, so
/// the interior count is at most `e(G)/r`.
pub fn local_search_partition(g: &Graph, r: usize, seed: u64) -> RPartition {
    assert!(r >= 1, "r must be at least 1");
    let n = g.n();
    // Using more parts than vertices never helps; cap the working set.
    let r_eff = r.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled: Vec<usize> = (0..n).collect();
    shuffled.shuffle(&mut rng);

    let mut assignment = vec![0u8; n];
    let mut masks = vec![0u64; r_eff];
    for (i, &v) in shuffled.iter().enumerate() {
        let p = i % r_eff;
        assignment[v] = p as u8;
        masks[p] |= 1u64 << v;
    }

    loop {
        let mut moved = false;
        for v in 0..n {
            let row = g.rows()[v];
            let cur = assignment[v] as usize;
            let cur_cost = (row & masks[cur]).count_ones();
            if cur_cost == 0 {
                continue;
            }
            for k in 0..r_eff {
                if k == cur {
                    continue;
                }
                if (row & masks[k]).count_ones() < cur_cost {
                    masks[cur] &= !(1u64 << v);
                    masks[k] |= 1u64 << v;
                    assignment[v] = k as u8;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            break;
        }
    }
    RPartition::new(g, r.min(256), assignment)
}

/// Streams every optimal r-partition of `g`, deduplicated up to part
/// relabeling: parts are ordered by their smallest contained vertex, so each
/// set partition appears exactly once.
pub fn optimal_partitions(g: &Graph, r: usize) -> Result<OptimalPartitions<'_>, DistanceError> {
    let target = distance_to_r_partite(g, r)?.distance;
    Ok(OptimalPartitions::new(g, r, target))
}

/// The canonical optimal partition: the first one in enumeration order.
pub fn canonical_optimal_partition(g: &Graph, r: usize) -> Result<RPartition, DistanceError> {
    Ok(optimal_partitions(g, r)?
        .next()
        .expect("every graph has at least one r-partition"))
}

/// Iterator over optimal partitions; DFS over canonical assignments with
/// interior-count pruning.
pub struct OptimalPartitions<'g> {
    g: &'g Graph,
    /// Part count carried by the yielded partitions (capped at the u8 space).
    r: usize,
    /// Parts the DFS may actually open: canonical order never opens more
    /// than one part per vertex.
    r_work: usize,
    target: usize,
    n: usize,
    /// Part assigned to vertex `v` for v < depth.
    assignment: Vec<u8>,
    /// Next part index to try for the vertex at each depth.
    next_try: Vec<u8>,
    masks: Vec<u64>,
    /// Interior edge count of the prefix at each depth.
    interior: Vec<usize>,
    /// Number of parts opened by the prefix at each depth.
    used: Vec<u8>,
    depth: usize,
    exhausted: bool,
}

impl<'g> OptimalPartitions<'g> {
    fn new(g: &'g Graph, r: usize, target: usize) -> Self {
        let n = g.n();
        let r_work = r.min(n);
        OptimalPartitions {
            g,
            r: r.min(256),
            r_work,
            target,
            n,
            assignment: vec![0; n],
            next_try: vec![0; n + 1],
            masks: vec![0; r_work],
            interior: vec![0; n + 1],
            used: vec![0; n + 1],
            depth: 0,
            exhausted: false,
        }
    }

    pub fn target_interior(&self) -> usize {
        self.target
    }

    /// Pops the assignment at `depth-1` and schedules its successor part.
    fn backtrack(&mut self) -> bool {
        if self.depth == 0 {
            self.exhausted = true;
            return false;
        }
        self.depth -= 1;
        let v = self.depth;
        let k = self.assignment[v];
        self.masks[k as usize] &= !(1u64 << v);
        self.next_try[v] = k + 1;
        true
    }
}

impl Iterator for OptimalPartitions<'_> {
    type Item = RPartition;

    fn next(&mut self) -> Option<RPartition> {
        if self.exhausted {
            return None;
        }
        loop {
            if self.depth == self.n {
                // Leaf: pruning guarantees interior <= target, and target is
                // the global minimum, so every leaf is optimal.
                let part = RPartition {
                    r: self.r,
                    assignment: self.assignment.clone(),
                    interior: self.interior[self.n],
                };
                debug_assert_eq!(part.interior, self.target);
                if !self.backtrack() {
                    self.exhausted = true;
                }
                return Some(part);
            }
            let v = self.depth;
            let row = self.g.rows()[v];
            let limit = ((self.used[v] as usize) + 1).min(self.r_work);
            let mut advanced = false;
            for k in (self.next_try[v] as usize)..limit {
                let delta = (row & self.masks[k]).count_ones() as usize;
                if self.interior[v] + delta > self.target {
                    continue;
                }
                self.assignment[v] = k as u8;
                self.masks[k] |= 1u64 << v;
                self.interior[v + 1] = self.interior[v] + delta;
                self.used[v + 1] = self.used[v].max(k as u8 + 1);
                self.depth += 1;
                self.next_try[self.depth] = 0;
                advanced = true;
                break;
            }
            if !advanced && !self.backtrack() {
                return None;
            }
        }
    }
}

// ============================================================================
// Tests
// ============================================================================
