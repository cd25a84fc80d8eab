//! Bitset-backed simple graphs on up to 64 labeled vertices: construction,
//! graph6 text I/O, deterministic generators, and a brute-force canonical form.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Hard cap on the vertex count: a neighborhood is one machine word.
pub const MAX_VERTICES: usize = 64;

/// Largest order accepted by [`canonical_form`].
pub const MAX_CANONICAL_VERTICES: usize = 10;

#[inline(always)]
const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline(always)]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Number of vertex pairs on `n` vertices.
#[inline(always)]
pub(crate) const fn pair_count(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

// ============================================================================
// VertexSet
// ============================================================================

/// A subset of `[n]` for `n <= 64`, packed into one machine word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// The full set `{0, ..., n-1}`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        VertexSet(low_mask(n))
    }

    #[inline]
    pub const fn singleton(v: usize) -> Self {
        VertexSet(bit(v))
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & bit(v) != 0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= bit(v);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !bit(v);
    }

    #[inline]
    #[must_use]
    pub const fn with(self, v: usize) -> Self {
        VertexSet(self.0 | bit(v))
    }

    #[inline]
    pub const fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub const fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub const fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub const fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest vertex in the set, if any.
    #[inline]
    pub fn min_vertex(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Iterates vertices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            assert!(v < 64, "vertex {v} out of range");
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

// ============================================================================
// Graph
// ============================================================================

/// Immutable simple graph on `1..=64` labeled vertices.
///
/// `adj[v]` is the neighborhood of `v` as a bitset. The representation is
/// always symmetric and irreflexive; constructors enforce this.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    ///
    /// Panics if `n` is not in `1..=64`.
    pub fn empty(n: usize) -> Self {
        assert!(
            (1..=MAX_VERTICES).contains(&n),
            "vertex count {n} out of range 1..=64"
        );
        Graph {
            n,
            adj: vec![0u64; n],
        }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        let mask = low_mask(n);
        for v in 0..n {
            g.adj[v] = mask & !bit(v);
        }
        g
    }

    /// Builds a graph from an edge list. Panics on out-of-range endpoints or
    /// self-loops; duplicate edges are allowed and collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u},{v}) out of range for n={n}");
            assert!(u != v, "self-loop at {u}");
            g.adj[u] |= bit(v);
            g.adj[v] |= bit(u);
        }
        g
    }

    /// Builds a graph from adjacency rows, validating symmetry, irreflexivity
    /// and the vertex range.
    pub fn from_adjacency(rows: Vec<u64>) -> Result<Self, AdjacencyError> {
        let n = rows.len();
        if !(1..=MAX_VERTICES).contains(&n) {
            return Err(AdjacencyError::OrderOutOfRange { n });
        }
        let mask = low_mask(n);
        for (v, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                return Err(AdjacencyError::OutOfRangeBits { vertex: v });
            }
            if row & bit(v) != 0 {
                return Err(AdjacencyError::SelfLoop { vertex: v });
            }
        }
        for u in 0..n {
            for v in (u + 1)..n {
                if (rows[u] >> v) & 1 != (rows[v] >> u) & 1 {
                    return Err(AdjacencyError::NotSymmetric { u, v });
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    /// Decodes the colex upper-triangle pair mask used by the census: bit `k`
    /// of `mask` is pair number `k` in the order (0,1),(0,2),(1,2),(0,3),...
    ///
    /// This is the same pair order as the graph6 payload.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        assert!((1..=MAX_VERTICES).contains(&n), "n out of range");
        assert!(pair_count(n) <= 64, "pair mask only supports n <= 11");
        let mut g = Graph::empty(n);
        let mut rest = mask & low_mask(pair_count(n));
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (i, j) = pair_from_index(k);
            g.adj[i] |= bit(j);
            g.adj[j] |= bit(i);
        }
        g
    }

    /// Inverse of [`Graph::from_pair_mask`].
    pub fn to_pair_mask(&self) -> u64 {
        assert!(pair_count(self.n) <= 64, "pair mask only supports n <= 11");
        let mut mask = 0u64;
        let mut k = 0;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    mask |= bit(k);
                }
                k += 1;
            }
        }
        mask
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Adjacency rows as raw bitsets.
    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    pub fn edge_count(&self) -> usize {
        let total: u32 = self.adj.iter().map(|row| row.count_ones()).sum();
        (total / 2) as usize
    }

    /// Edges as `(u, v)` with `u < v`, in colex order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Number of edges inside the vertex subset `s`.
    pub fn edges_within(&self, s: VertexSet) -> usize {
        let mut total = 0u32;
        for v in s.iter() {
            total += (self.adj[v] & s.bits()).count_ones();
        }
        (total / 2) as usize
    }

    /// Number of edges with one endpoint in `a` and the other in `b`.
    /// For overlapping sets, edges inside the overlap count once.
    pub fn edges_between(&self, a: VertexSet, b: VertexSet) -> usize {
        let mut total: usize = 0;
        for v in a.iter() {
            total += (self.adj[v] & b.bits()).count_ones() as usize;
        }
        // Edges with both endpoints in the overlap got counted twice.
        total - self.edges_within(a.intersection(b))
    }

    /// Induced subgraph on `s`, vertices reindexed in increasing label order.
    ///
    /// Panics if `s` is empty or contains vertices `>= n`.
    pub fn induced_subgraph(&self, s: VertexSet) -> Graph {
        assert!(!s.is_empty(), "induced subgraph on empty set");
        assert!(
            s.is_subset(self.vertex_set()),
            "subset contains out-of-range vertices"
        );
        let verts: Vec<usize> = s.iter().collect();
        let m = verts.len();
        let mut g = Graph::empty(m);
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i] |= bit(j);
                    g.adj[j] |= bit(i);
                }
            }
        }
        g
    }

    /// Complement graph: every non-adjacent distinct pair becomes an edge.
    pub fn complement(&self) -> Graph {
        let mask = low_mask(self.n);
        let adj = (0..self.n)
            .map(|v| !self.adj[v] & mask & !bit(v))
            .collect();
        Graph { n: self.n, adj }
    }

    /// Relabels vertices: `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    g.adj[perm[u]] |= bit(perm[v]);
                    g.adj[perm[v]] |= bit(perm[u]);
                }
            }
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {})", self.n, emit_graph6(self))
    }
}

/// Pair `(i, j)` with `i < j` at colex index `k`.
fn pair_from_index(k: usize) -> (usize, usize) {
    // Column j holds indices C(j,2) .. C(j,2)+j-1.
    let mut j = 1;
    while pair_count(j + 1) <= k {
        j += 1;
    }
    (k - pair_count(j), j)
}

// ============================================================================
// Errors
// ============================================================================

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdjacencyError {
    #[error("vertex count {n} out of range 1..=64")]
    OrderOutOfRange { n: usize },
    #[error("adjacency row {vertex} has bits beyond the vertex range")]
    OutOfRangeBits { vertex: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("adjacency not symmetric at ({u},{v})")]
    NotSymmetric { u: usize, v: usize },
}

/// graph6 decoding errors; offsets are byte positions in the input record.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("malformed graph6 header at byte {offset}")]
    MalformedHeader { offset: usize },
    #[error("graph6 order {n} unsupported (need 1..=64), header at byte {offset}")]
    UnsupportedOrder { n: usize, offset: usize },
    #[error("graph6 record truncated: expected {expected} bytes, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("invalid graph6 payload byte {byte:#04x} at byte {offset}")]
    InvalidPayloadByte { offset: usize, byte: u8 },
    #[error("nonzero padding bits in final graph6 byte at byte {offset}")]
    InvalidPadding { offset: usize },
    #[error("trailing garbage after graph6 record at byte {offset}")]
    TrailingGarbage { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("canonical form requires n <= {max}, got n = {n}")]
pub struct CanonicalSizeError {
    pub n: usize,
    pub max: usize,
}

// ============================================================================
// graph6 format
// ============================================================================

/// Parses one graph6 record (canonical form only: shortest header, zero
/// padding bits). A single trailing newline is tolerated.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let bytes = text
        .as_bytes()
        .strip_suffix(b"\n")
        .map(|b| b.strip_suffix(b"\r").unwrap_or(b))
        .unwrap_or(text.as_bytes());
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }

    let (n, header_len) = if bytes[0] == 126 {
        // Long form: '~' then three bytes of 18 bits. Only needed for n >= 63.
        if bytes.len() < 4 {
            return Err(Graph6Error::Truncated {
                expected: 4,
                got: bytes.len(),
            });
        }
        let mut n = 0usize;
        for (k, &b) in bytes[1..4].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Graph6Error::MalformedHeader { offset: 1 + k });
            }
            n = (n << 6) | (b - 63) as usize;
        }
        if n < 63 {
            // Orders below 63 must use the one-byte header.
            return Err(Graph6Error::MalformedHeader { offset: 0 });
        }
        (n, 4)
    } else {
        if !(63..=125).contains(&bytes[0]) {
            return Err(Graph6Error::MalformedHeader { offset: 0 });
        }
        ((bytes[0] - 63) as usize, 1)
    };

    if n == 0 || n > MAX_VERTICES {
        return Err(Graph6Error::UnsupportedOrder { n, offset: 0 });
    }

    let nbits = pair_count(n);
    let payload_len = nbits.div_ceil(6);
    let expected = header_len + payload_len;
    if bytes.len() < expected {
        return Err(Graph6Error::Truncated {
            expected,
            got: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Graph6Error::TrailingGarbage { offset: expected });
    }

    let mut g = Graph::empty(n);
    let mut k = 0usize; // colex pair index
    'payload: for (b_idx, &b) in bytes[header_len..].iter().enumerate() {
        let offset = header_len + b_idx;
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::InvalidPayloadByte { offset, byte: b });
        }
        let chunk = b - 63;
        for s in (0..6).rev() {
            let bit_set = (chunk >> s) & 1 == 1;
            if k >= nbits {
                if bit_set {
                    return Err(Graph6Error::InvalidPadding { offset });
                }
                continue;
            }
            if bit_set {
                let (i, j) = pair_from_index(k);
                g.adj[i] |= bit(j);
                g.adj[j] |= bit(i);
            }
            k += 1;
            if k == nbits && s == 0 {
                continue 'payload;
            }
        }
    }
    Ok(g)
}

/// Encodes a graph as a canonical graph6 record (no trailing newline).
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.n;
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(126);
        out.push(63 + ((n >> 12) & 0x3f) as u8);
        out.push(63 + ((n >> 6) & 0x3f) as u8);
        out.push(63 + (n & 0x3f) as u8);
    }
    let mut chunk = 0u8;
    let mut filled = 0u8;
    for j in 1..n {
        for i in 0..j {
            chunk = (chunk << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(63 + chunk);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (chunk << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

// ============================================================================
// Generators
// ============================================================================

/// Part sizes of the Turan graph T_r(n): as equal as possible, larger first.
pub fn turan_part_sizes(n: usize, r: usize) -> Vec<usize> {
    assert!(r >= 1, "r must be at least 1");
    assert!(r <= n, "need r <= n");
    let q = n / r;
    let s = n % r;
    (0..r).map(|i| if i < s { q + 1 } else { q }).collect()
}

/// Complete r-partite Turan graph with contiguous index blocks as parts,
/// larger parts first.
///
/// Panics unless `1 <= r <= n <= 64`.
pub fn turan_graph(n: usize, r: usize) -> Graph {
    let sizes = turan_part_sizes(n, r);
    let mut g = Graph::empty(n);
    let mut part_of = vec![0usize; n];
    let mut v = 0;
    for (p, &sz) in sizes.iter().enumerate() {
        for _ in 0..sz {
            part_of[v] = p;
            v += 1;
        }
    }
    for u in 0..n {
        for w in (u + 1)..n {
            if part_of[u] != part_of[w] {
                g.adj[u] |= bit(w);
                g.adj[w] |= bit(u);
            }
        }
    }
    g
}

/// Edge count of the Turan graph: `(n^2 - sum of squared part sizes) / 2`.
pub fn turan_edges(n: usize, r: usize) -> usize {
    let sizes = turan_part_sizes(n, r);
    let sq: usize = sizes.iter().map(|s| s * s).sum();
    (n * n - sq) / 2
}

/// Turan graph plus a `t`-edge matching inside the first part: vertices
/// `(0,1), (2,3), ..., (2t-2, 2t-1)`.
///
/// Panics if `2t` exceeds the first part size.
pub fn turan_plus_matching(n: usize, r: usize, t: usize) -> Graph {
    let sizes = turan_part_sizes(n, r);
    assert!(
        2 * t <= sizes[0],
        "matching of {t} edges does not fit in first part of size {}",
        sizes[0]
    );
    let mut g = turan_graph(n, r);
    for i in 0..t {
        let (u, v) = (2 * i, 2 * i + 1);
        g.adj[u] |= bit(v);
        g.adj[v] |= bit(u);
    }
    g
}

/// Erdos-Renyi graph: each pair is an edge independently with probability `p`.
/// Deterministic for a fixed `(n, p, seed)`.
///
/// Panics unless `0 <= p <= 1`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "p must be in [0,1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for j in 1..n {
        for i in 0..j {
            if rng.random_bool(p) {
                g.adj[i] |= bit(j);
                g.adj[j] |= bit(i);
            }
        }
    }
    g
}

// ============================================================================
// Canonical form
// ============================================================================

/// Lexicographically minimal graph6 record over all vertex relabelings.
///
/// Exhaustive permutation minimization (with sound pruning on upper-triangle
/// prefixes); refuses graphs above [`MAX_CANONICAL_VERTICES`].
pub fn canonical_form(g: &Graph) -> Result<String, CanonicalSizeError> {
    if g.n > MAX_CANONICAL_VERTICES {
        return Err(CanonicalSizeError {
            n: g.n,
            max: MAX_CANONICAL_VERTICES,
        });
    }
    let (mask, _) = canonical_pair_mask_and_aut(g);
    Ok(emit_graph6(&Graph::from_pair_mask(g.n, mask)))
}

/// Canonical colex pair mask together with the automorphism group order.
///
/// The canonical mask is the colex pair mask of the lexicographically minimal
/// relabeling; `|Aut|` is the number of permutations attaining the minimum.
/// Supports `n <= 11` (pair mask must fit one word).
pub(crate) fn canonical_pair_mask_and_aut(g: &Graph) -> (u64, u64) {
    let n = g.n;
    assert!(pair_count(n) <= 64, "canonical search needs n <= 11");
    if n == 1 {
        return (0, 1);
    }
    let kbits = pair_count(n);
    // Low-degree vertices early tend to produce small prefixes, which makes
    // the first incumbent strong.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut search = CanonSearch {
        g,
        n,
        order,
        perm: Vec::with_capacity(n),
        used: 0,
        best: u64::MAX,
        aut: 0,
        kbits,
    };
    search.dfs(0, 0, 0);
    // Convert the MSB-first comparison value back to a colex pair mask.
    let mut mask = 0u64;
    for k in 0..kbits {
        if (search.best >> (kbits - 1 - k)) & 1 == 1 {
            mask |= bit(k);
        }
    }
    (mask, search.aut)
}

struct CanonSearch<'a> {
    g: &'a Graph,
    n: usize,
    order: Vec<usize>,
    perm: Vec<usize>,
    used: u64,
    /// Packed upper-triangle bits of the best relabeling found so far,
    /// colex bit `k` stored at position `kbits-1-k` so integer order is
    /// lexicographic string order. `u64::MAX` means "none yet" (every real
    /// value has fewer than 64 significant bits).
    best: u64,
    aut: u64,
    kbits: usize,
}

impl CanonSearch<'_> {
    fn dfs(&mut self, depth: usize, partial: u64, bits_used: usize) {
        if depth == self.n {
            if partial < self.best {
                self.best = partial;
                self.aut = 1;
            } else if partial == self.best {
                self.aut += 1;
            }
            return;
        }
        for idx in 0..self.n {
            let cand = self.order[idx];
            if self.used & bit(cand) != 0 {
                continue;
            }
            // New column: bits (0,depth),(1,depth),...,(depth-1,depth), the
            // earliest pair most significant.
            let mut col = 0u64;
            for &placed in &self.perm {
                col = (col << 1) | u64::from(self.g.has_edge(placed, cand));
            }
            let new_partial = (partial << depth) | col;
            let new_bits = bits_used + depth;
            // Prune strictly worse prefixes only; ties must be explored so
            // the automorphism count stays exact.
            if new_partial > (self.best >> (self.kbits - new_bits)) {
                continue;
            }
            self.perm.push(cand);
            self.used |= bit(cand);
            self.dfs(depth + 1, new_partial, new_bits);
            self.used &= !bit(cand);
            self.perm.pop();
        }
    }
}

// ============================================================================
// Tests
// ============================================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_valid(g: &Graph) {
        for v in 0..g.n() {
            assert!(!g.has_edge(v, v), "self-loop at {v}");
            assert_eq!(g.rows()[v] & !low_mask(g.n()), 0);
            for u in 0..g.n() {
                assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
            }
        }
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges)
    }

    // ------------------------------------------------------------------
    // graph6
    // ------------------------------------------------------------------

    #[test]
    fn parse_d_brace_is_star_on_five_vertices() {
        // Hand decode: 'D' gives n=5; '?' = 000000 covers pairs
        // (0,1),(0,2),(1,2),(0,3),(1,3),(2,3); '{' = 111100 sets
        // (0,4),(1,4),(2,4),(3,4) with two padding zeros.
        let g = parse_graph6("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(
            g.edges(),
            vec![(0, 4), (1, 4), (2, 4), (3, 4)],
            "expected the star with center 4"
        );
        assert_valid(&g);
    }

    #[test]
    fn parse_a_underscore_is_single_edge() {
        // 'A' gives n=2; '_' = 100000 sets pair (0,1).
        let g = parse_graph6("A_").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn emit_single_vertex_is_at_sign() {
        assert_eq!(emit_graph6(&Graph::empty(1)), "@");
        assert_eq!(parse_graph6("@").unwrap().n(), 1);
    }

    #[test]
    fn roundtrip_random_graphs() {
        for seed in 0..200 {
            let n = 1 + (seed as usize * 7) % 64;
            let g = random_graph(n, 0.4, seed);
            let s = emit_graph6(&g);
            let h = parse_graph6(&s).unwrap();
            assert_eq!(g, h, "roundtrip failed for seed {seed}, record {s}");
        }
    }

    #[test]
    fn emit_then_parse_identity_on_records() {
        for seed in 0..50 {
            let n = 1 + (seed as usize) % 64;
            let s = emit_graph6(&random_graph(n, 0.5, seed + 1000));
            assert_eq!(emit_graph6(&parse_graph6(&s).unwrap()), s);
        }
    }

    #[test]
    fn emit_is_injective_on_labeled_graphs() {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        for mask in 0u64..64 {
            let g = Graph::from_pair_mask(4, mask);
            assert!(seen.insert(emit_graph6(&g)), "collision at mask {mask}");
        }
    }

    #[test]
    fn long_form_header_for_63_and_64() {
        for n in [63usize, 64] {
            let g = random_graph(n, 0.3, n as u64);
            let s = emit_graph6(&g);
            assert!(s.starts_with('~'));
            assert_eq!(parse_graph6(&s).unwrap(), g);
        }
    }

    #[test]
    fn parse_rejects_malformed_header() {
        assert_eq!(
            parse_graph6("\u{20}AA"),
            Err(Graph6Error::MalformedHeader { offset: 0 })
        );
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        // n = 0 ('?') is outside the supported order range.
        assert_eq!(
            parse_graph6("?"),
            Err(Graph6Error::UnsupportedOrder { n: 0, offset: 0 })
        );
    }

    #[test]
    fn parse_rejects_truncated_payload() {
        // n=5 needs 10 bits = 2 payload bytes.
        assert_eq!(
            parse_graph6("D?"),
            Err(Graph6Error::Truncated {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn parse_rejects_trailing_garbage() {
        assert_eq!(
            parse_graph6("A_x"),
            Err(Graph6Error::TrailingGarbage { offset: 2 })
        );
    }

    #[test]
    fn parse_rejects_bad_padding() {
        // n=2: one significant bit, five padding bits; 'A' = 000010 has a
        // nonzero padding bit.
        assert_eq!(
            parse_graph6("AA"),
            Err(Graph6Error::InvalidPadding { offset: 1 })
        );
    }

    #[test]
    fn parse_tolerates_single_trailing_newline() {
        assert_eq!(parse_graph6("A_\n").unwrap().edge_count(), 1);
    }

    // ------------------------------------------------------------------
    // Generators
    // ------------------------------------------------------------------

    #[test]
    fn turan_graph_examples() {
        let g = turan_graph(6, 3);
        assert_eq!(g.edge_count(), 12, "K_{{2,2,2}} has 12 edges");
        assert_eq!(turan_graph(5, 1).edge_count(), 0);
        assert_eq!(turan_graph(5, 2).edge_count(), 6, "K_{{2,3}} has 6 edges");
        assert_valid(&g);
    }

    #[test]
    fn turan_edges_matches_generator_everywhere() {
        for n in 1..=64 {
            for r in 1..=n {
                assert_eq!(
                    turan_edges(n, r),
                    turan_graph(n, r).edge_count(),
                    "mismatch at n={n}, r={r}"
                );
            }
        }
    }

    #[test]
    fn turan_edges_lower_bound_formula() {
        for n in 1..=64usize {
            for r in 1..=n {
                let lhs = turan_edges(n, r) as f64;
                let rhs = (1.0 - 1.0 / r as f64) * (n * n) as f64 / 2.0 - r as f64 / 8.0;
                assert!(lhs >= rhs, "bound fails at n={n}, r={r}");
            }
        }
    }

    #[test]
    fn turan_plus_matching_examples() {
        assert_eq!(turan_plus_matching(6, 3, 1).edge_count(), 13);
        assert_eq!(turan_plus_matching(6, 3, 0), turan_graph(6, 3));
        let g = turan_plus_matching(8, 2, 2);
        // Brute-force triangle count over all C(8,3) subsets.
        let mut triangles = 0;
        for a in 0..8 {
            for b in (a + 1)..8 {
                for c in (b + 1)..8 {
                    if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                        triangles += 1;
                    }
                }
            }
        }
        assert_eq!(triangles, 8, "K_{{4,4}} plus a 2-matching has 8 triangles");
    }

    #[test]
    #[should_panic(expected = "does not fit")]
    fn turan_plus_matching_rejects_oversized_matching() {
        let _ = turan_plus_matching(6, 3, 2);
    }

    // ------------------------------------------------------------------
    // Random graphs
    // ------------------------------------------------------------------

    #[test]
    fn random_graph_extremes_and_determinism() {
        assert_eq!(random_graph(10, 0.0, 7).edge_count(), 0);
        assert_eq!(random_graph(10, 1.0, 7), Graph::complete(10));
        assert_eq!(random_graph(20, 0.37, 99), random_graph(20, 0.37, 99));
        assert_ne!(random_graph(20, 0.5, 1), random_graph(20, 0.5, 2));
        assert_valid(&random_graph(20, 0.5, 1));
    }

    // ------------------------------------------------------------------
    // Subgraphs and complement
    // ------------------------------------------------------------------

    #[test]
    fn induced_subgraph_restricts_edges() {
        let g = cycle(5);
        let s: VertexSet = [0usize, 1, 2].into_iter().collect();
        let h = g.induced_subgraph(s);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges(), vec![(0, 1), (1, 2)]);
        assert_valid(&h);
    }

    #[test]
    fn complement_flips_edges() {
        let g = path(4);
        let c = g.complement();
        assert_eq!(g.edge_count() + c.edge_count(), 6);
        for u in 0..4 {
            for v in (u + 1)..4 {
                assert_ne!(g.has_edge(u, v), c.has_edge(u, v));
            }
        }
        assert_valid(&c);
        assert_eq!(c.complement(), g);
    }

    #[test]
    fn edges_between_counts_cross_edges() {
        let g = turan_graph(6, 3);
        let a: VertexSet = [0usize, 1].into_iter().collect();
        let b: VertexSet = [2usize, 3].into_iter().collect();
        assert_eq!(g.edges_between(a, b), 4);
        assert_eq!(g.edges_within(a), 0);
    }

    // ------------------------------------------------------------------
    // Canonical form
    // ------------------------------------------------------------------

    /// Plain reference minimization over all n! permutations, used as the
    /// independent oracle for the pruned search.
    fn naive_canonical(g: &Graph) -> String {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 1 {
                return vec![vec![0]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        permutations(g.n())
            .into_iter()
            .map(|perm| emit_graph6(&g.relabel(&perm)))
            .min()
            .unwrap()
    }

    #[test]
    fn canonical_matches_naive_minimization() {
        for seed in 0..60 {
            let n = 2 + (seed as usize) % 5; // up to 6 vertices
            let g = random_graph(n, 0.5, seed + 31);
            assert_eq!(canonical_form(&g).unwrap(), naive_canonical(&g));
        }
    }

    #[test]
    fn canonical_is_orbit_invariant() {
        let mut rng_seed = 0u64;
        for _ in 0..40 {
            rng_seed += 1;
            let n = 3 + (rng_seed as usize) % 6;
            let g = random_graph(n, 0.5, rng_seed);
            let canon = canonical_form(&g).unwrap();
            // A couple of deterministic relabelings.
            let rot: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
            let rev: Vec<usize> = (0..n).map(|v| n - 1 - v).collect();
            assert_eq!(canonical_form(&g.relabel(&rot)).unwrap(), canon);
            assert_eq!(canonical_form(&g.relabel(&rev)).unwrap(), canon);
        }
    }

    #[test]
    fn canonical_separates_triangle_from_path() {
        let tri = cycle(3);
        let p3 = path(3);
        assert_ne!(canonical_form(&tri).unwrap(), canonical_form(&p3).unwrap());
        // Two labelings of the same path agree.
        let p3_relabeled = Graph::from_edges(3, &[(1, 0), (0, 2)]);
        assert_eq!(
            canonical_form(&p3).unwrap(),
            canonical_form(&p3_relabeled).unwrap()
        );
    }

    #[test]
    fn canonical_class_counts_match_known_values() {
        // Numbers of isomorphism classes of simple graphs on n vertices.
        let expected = [(2usize, 2usize), (3, 4), (4, 11), (5, 34), (6, 156)];
        for (n, classes) in expected {
            let mut forms = std::collections::HashSet::new();
            for mask in 0u64..(1 << pair_count(n)) {
                let g = Graph::from_pair_mask(n, mask);
                forms.insert(canonical_form(&g).unwrap());
            }
            assert_eq!(forms.len(), classes, "class count at n={n}");
        }
    }

    #[test]
    fn canonical_refuses_large_graphs() {
        let g = Graph::empty(11);
        assert_eq!(
            canonical_form(&g),
            Err(CanonicalSizeError { n: 11, max: 10 })
        );
    }

    #[test]
    fn automorphism_counts_on_known_graphs() {
        assert_eq!(canonical_pair_mask_and_aut(&Graph::complete(4)).1, 24);
        assert_eq!(canonical_pair_mask_and_aut(&cycle(5)).1, 10);
        assert_eq!(canonical_pair_mask_and_aut(&path(4)).1, 2);
        assert_eq!(canonical_pair_mask_and_aut(&Graph::empty(5)).1, 120);
    }

    // ------------------------------------------------------------------
    // Pair mask
    // ------------------------------------------------------------------

    #[test]
    fn pair_mask_roundtrip_and_order() {
        for mask in 0u64..(1 << pair_count(5)) {
            assert_eq!(Graph::from_pair_mask(5, mask).to_pair_mask(), mask);
        }
        // Pair order matches the graph6 payload: mask bits are the record bits.
        let g = Graph::from_pair_mask(5, 0b1111000000);
        assert_eq!(emit_graph6(&g), "D?{");
    }

    #[test]
    fn from_adjacency_validates() {
        assert!(Graph::from_adjacency(vec![0b10, 0b01]).is_ok());
        assert_eq!(
            Graph::from_adjacency(vec![0b01, 0b10]),
            Err(AdjacencyError::SelfLoop { vertex: 0 })
        );
        assert_eq!(
            Graph::from_adjacency(vec![0b10, 0b00]),
            Err(AdjacencyError::NotSymmetric { u: 0, v: 1 })
        );
    }
}
