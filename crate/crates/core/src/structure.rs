//! Structural predicates quantified over optimal partitions (uniform density,
//! internal sparsity, balance), bad-set families with the derived (m, j, X)
//! data, and the edge-rewiring transformation Phi.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cliques::is_clique_free;
use crate::graph::{emit_graph6, Graph, VertexSet};
use crate::partition::{
    canonical_optimal_partition, distance_to_r_partite, is_r_partite, optimal_partitions,
    DistanceError, RPartition,
};

/// Default work budget for the exact uniform-density scan, in (A, B) pair
/// evaluations.
pub const DEFAULT_DENSITY_BUDGET: u64 = 100_000_000;

// ============================================================================
// Thresholds
// ============================================================================

/// Threshold set for the structural predicates. The built-in "paper" preset
/// is degenerate on small graphs (its size floors fall below one vertex), so
/// every predicate is parameterized and tests exercise relaxed values.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureThresholds {
    /// Cross-pair density floor: require `e(A,B) > alpha * |A| * |B|`.
    pub alpha: BigRational,
    /// Minimum subset size as a fraction of n (floor at one vertex).
    pub size_fraction: BigRational,
    /// Maximum internal degree as a fraction of n.
    pub sparse_fraction: BigRational,
    /// Part-size slack as a fraction of n.
    pub balance_fraction: BigRational,
    /// Distance cap exponent: close means `distance <= n^exponent`.
    pub closeness_exponent: f64,
}

fn pow2_neg(k: usize) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2).pow(k as u32))
}

impl StructureThresholds {
    /// The named preset "paper": alpha 1/32, size floor 2^(-10r) n, internal
    /// degree cap 2^(-5r) n, balance slack 2^(-5r) n, closeness exponent
    /// 2 - 1/r^2.
    pub fn paper(r: usize) -> Self {
        assert!(r >= 1);
        StructureThresholds {
            alpha: BigRational::new(BigInt::from(1), BigInt::from(32)),
            size_fraction: pow2_neg(10 * r),
            sparse_fraction: pow2_neg(5 * r),
            balance_fraction: pow2_neg(5 * r),
            closeness_exponent: 2.0 - 1.0 / (r * r) as f64,
        }
    }

    /// Validates ranges: fractions in [0, 1], alpha in [0, 1].
    ///
    /// Zero is admitted: a zero slack or degree cap turns the predicate into
    /// an exact structural condition (perfectly balanced parts, proper
    /// partitions), which is useful on small graphs.
    pub fn validate(&self) -> Result<(), StructureError> {
        let one = BigRational::from(BigInt::from(1));
        for (name, f) in [
            ("alpha", &self.alpha),
            ("size_fraction", &self.size_fraction),
            ("sparse_fraction", &self.sparse_fraction),
            ("balance_fraction", &self.balance_fraction),
        ] {
            if f.is_negative() || *f > one {
                return Err(StructureError::InvalidThresholds {
                    reason: format!("{name} must lie in [0, 1], got {f}"),
                });
            }
        }
        if !self.closeness_exponent.is_finite() || self.closeness_exponent < 0.0 {
            return Err(StructureError::InvalidThresholds {
                reason: format!(
                    "closeness_exponent must be finite and nonnegative, got {}",
                    self.closeness_exponent
                ),
            });
        }
        Ok(())
    }

    /// Loads thresholds from a JSON config: optional `"preset": "paper"`
    /// base (also the default), with per-field overrides. Fraction fields are
    /// strings parsed as `a/b`, decimals, or integers.
    pub fn from_config_str(config: &str, r: usize) -> Result<Self, StructureError> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            preset: Option<String>,
            alpha: Option<String>,
            size_fraction: Option<String>,
            sparse_fraction: Option<String>,
            balance_fraction: Option<String>,
            closeness_exponent: Option<f64>,
        }
        let doc: Doc =
            serde_json::from_str(config).map_err(|e| StructureError::InvalidThresholds {
                reason: format!("config parse error: {e}"),
            })?;
        match doc.preset.as_deref() {
            None | Some("paper") => {}
            Some(other) => {
                return Err(StructureError::InvalidThresholds {
                    reason: format!("unknown preset {other:?} (known: \"paper\")"),
                })
            }
        }
        let mut th = StructureThresholds::paper(r);
        if let Some(s) = doc.alpha {
            th.alpha = parse_rational(&s)?;
        }
        if let Some(s) = doc.size_fraction {
            th.size_fraction = parse_rational(&s)?;
        }
        if let Some(s) = doc.sparse_fraction {
            th.sparse_fraction = parse_rational(&s)?;
        }
        if let Some(s) = doc.balance_fraction {
            th.balance_fraction = parse_rational(&s)?;
        }
        if let Some(x) = doc.closeness_exponent {
            th.closeness_exponent = x;
        }
        th.validate()?;
        Ok(th)
    }

    /// Minimum subset size on n vertices implied by `size_fraction`.
    fn size_floor(&self, n: usize) -> usize {
        let scaled = &self.size_fraction * BigRational::from(BigInt::from(n));
        let ceil = scaled.ceil().to_integer();
        ceil.to_usize().unwrap_or(usize::MAX).max(1)
    }
}

/// Parses `a/b`, decimal, or integer literals into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, StructureError> {
    let bad = |reason: String| StructureError::InvalidThresholds { reason };
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad numerator in {s:?}")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(bad(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = format!("{int_part}{frac_part}");
        let num: BigInt = digits
            .parse()
            .map_err(|_| bad(format!("bad decimal {s:?}")))?;
        let den = BigInt::from(10).pow(frac_part.len() as u32);
        return Ok(BigRational::new(num, den));
    }
    let num: BigInt = s.parse().map_err(|_| bad(format!("bad number {s:?}")))?;
    Ok(BigRational::from(num))
}

// ============================================================================
// Errors and outcomes
// ============================================================================

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error("uniform-density scan exceeded the budget of {budget} pair evaluations")]
    BudgetExceeded { budget: u64 },
    #[error("precondition violated: graph contains a K_{m}")]
    NotCliqueFree { m: usize },
    #[error("precondition violated: graph is {r}-partite")]
    AlreadyRPartite { r: usize },
    #[error("phi edge choice has {got} bits, expected {expected}")]
    PhiChoiceLength { expected: usize, got: usize },
    #[error("phi image space has 2^{potential} members, too many to exhaust; provide a sample count")]
    PhiNeedsSamples { potential: usize },
    #[error("invalid thresholds: {reason}")]
    InvalidThresholds { reason: String },
}

/// Three-valued result of a structural check: exact scans prove or refute,
/// the sampling fallback can only refute.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CheckOutcome<W> {
    ProvedTrue,
    Refuted { witness: W },
    NotRefuted { samples_tried: u64 },
}

impl<W> CheckOutcome<W> {
    /// True only for a proof; a refutation or an inconclusive sample is false.
    pub fn proved(&self) -> bool {
        matches!(self, CheckOutcome::ProvedTrue)
    }

    pub fn refuted(&self) -> bool {
        matches!(self, CheckOutcome::Refuted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityWitness {
    pub partition: RPartition,
    pub i: usize,
    pub j: usize,
    pub a: VertexSet,
    pub b: VertexSet,
    pub cross_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsityWitness {
    pub partition: RPartition,
    pub part: usize,
    pub vertex: usize,
    pub internal_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceWitness {
    pub partition: RPartition,
    pub part: usize,
    pub size: usize,
}

// ============================================================================
// Uniform density
// ============================================================================

/// Exact uniform-density check: over every optimal r-partition, every ordered
/// pair of distinct parts, and every pair of equal-size subsets at or above
/// the size floor, require `e(A,B) > alpha |A||B|`.
///
/// Aborts with [`StructureError::BudgetExceeded`] once more than `budget`
/// subset pairs have been evaluated.
pub fn is_uniformly_dense(
    g: &Graph,
    r: usize,
    th: &StructureThresholds,
    budget: u64,
) -> Result<CheckOutcome<DensityWitness>, StructureError> {
    th.validate()?;
    let s_min = th.size_floor(g.n());
    let alpha_num = th.alpha.numer();
    let alpha_den = th.alpha.denom();
    let mut spent: u64 = 0;

    for partition in optimal_partitions(g, r)? {
        let parts = partition.parts();
        for i in 0..parts.len() {
            for j in 0..parts.len() {
                if i == j {
                    continue;
                }
                let max_s = parts[i].len().min(parts[j].len());
                for s in s_min..=max_s {
                    let threshold = alpha_num * BigInt::from(s * s);
                    let ui: Vec<usize> = parts[i].iter().collect();
                    let uj: Vec<usize> = parts[j].iter().collect();
                    let mut found: Option<(VertexSet, VertexSet, usize)> = None;
                    for_each_subset(&ui, s, |a_mask| {
                        let mut inner_abort = false;
                        for_each_subset(&uj, s, |b_mask| {
                            spent += 1;
                            if spent > budget {
                                inner_abort = true;
                                return false;
                            }
                            let a = VertexSet::from_bits(a_mask);
                            let b = VertexSet::from_bits(b_mask);
                            let cross = g.edges_between(a, b);
                            if BigInt::from(cross) * alpha_den <= threshold {
                                found = Some((a, b, cross));
                                return false;
                            }
                            true
                        });
                        !inner_abort && found.is_none()
                    });
                    if spent > budget {
                        return Err(StructureError::BudgetExceeded { budget });
                    }
                    if let Some((a, b, cross_edges)) = found {
                        return Ok(CheckOutcome::Refuted {
                            witness: DensityWitness {
                                partition,
                                i,
                                j,
                                a,
                                b,
                                cross_edges,
                            },
                        });
                    }
                }
            }
        }
    }
    Ok(CheckOutcome::ProvedTrue)
}

/// Sampling refutation mode for uniform density: draws random optimal
/// partitions, part pairs and subset pairs. Can only prove failure; an
/// unrefuted run reports how many samples it tried.
pub fn sample_uniform_density_refutation(
    g: &Graph,
    r: usize,
    th: &StructureThresholds,
    samples: u64,
    seed: u64,
) -> Result<CheckOutcome<DensityWitness>, StructureError> {
    th.validate()?;
    let s_min = th.size_floor(g.n());
    let partitions: Vec<RPartition> = optimal_partitions(g, r)?.collect();
    let alpha_num = th.alpha.numer();
    let alpha_den = th.alpha.denom();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Usable (partition, i, j) triples: distinct parts both at least s_min.
    let mut arenas = Vec::new();
    for (p_idx, p) in partitions.iter().enumerate() {
        let parts = p.parts();
        for i in 0..parts.len() {
            for j in 0..parts.len() {
                if i != j && parts[i].len() >= s_min && parts[j].len() >= s_min {
                    arenas.push((p_idx, i, j));
                }
            }
        }
    }
    if arenas.is_empty() {
        return Ok(CheckOutcome::ProvedTrue); // empty quantification
    }

    for tried in 0..samples {
        let &(p_idx, i, j) = &arenas[rng.random_range(0..arenas.len())];
        let parts = partitions[p_idx].parts();
        let max_s = parts[i].len().min(parts[j].len());
        let s = rng.random_range(s_min..=max_s);
        let a = random_subset(&mut rng, parts[i], s);
        let b = random_subset(&mut rng, parts[j], s);
        let cross = g.edges_between(a, b);
        if BigInt::from(cross) * alpha_den <= alpha_num * BigInt::from(s * s) {
            let _ = tried;
            return Ok(CheckOutcome::Refuted {
                witness: DensityWitness {
                    partition: partitions[p_idx].clone(),
                    i,
                    j,
                    a,
                    b,
                    cross_edges: cross,
                },
            });
        }
    }
    Ok(CheckOutcome::NotRefuted {
        samples_tried: samples,
    })
}

fn random_subset(rng: &mut ChaCha8Rng, from: VertexSet, size: usize) -> VertexSet {
    let mut pool: Vec<usize> = from.iter().collect();
    let mut out = VertexSet::EMPTY;
    for _ in 0..size {
        let k = rng.random_range(0..pool.len());
        out.insert(pool.swap_remove(k));
    }
    out
}

/// Calls `f` with every `size`-subset of `items` as a bitmask, in
/// lexicographic order over the sorted item list; stops when `f` returns
/// false.
fn for_each_subset(items: &[usize], size: usize, mut f: impl FnMut(u64) -> bool) {
    if size > items.len() {
        return;
    }
    fn rec(
        items: &[usize],
        size: usize,
        start: usize,
        mask: u64,
        f: &mut impl FnMut(u64) -> bool,
        alive: &mut bool,
    ) {
        if !*alive {
            return;
        }
        if size == 0 {
            *alive = f(mask);
            return;
        }
        for k in start..=(items.len() - size) {
            rec(
                items,
                size - 1,
                k + 1,
                mask | (1u64 << items[k]),
                f,
                alive,
            );
            if !*alive {
                return;
            }
        }
    }
    let mut alive = true;
    rec(items, size, 0, 0, &mut f, &mut alive);
}

// ============================================================================
// Internal sparsity and balance
// ============================================================================

/// Internal sparsity: in every optimal partition, every vertex has internal
/// degree at most `sparse_fraction * n`.
pub fn is_internally_sparse(
    g: &Graph,
    r: usize,
    th: &StructureThresholds,
) -> Result<CheckOutcome<SparsityWitness>, StructureError> {
    th.validate()?;
    let cap = &th.sparse_fraction * BigRational::from(BigInt::from(g.n()));
    for partition in optimal_partitions(g, r)? {
        for (part_idx, part) in partition.parts().into_iter().enumerate() {
            for v in part.iter() {
                let internal = (g.rows()[v] & part.bits()).count_ones() as usize;
                if BigRational::from(BigInt::from(internal)) > cap {
                    return Ok(CheckOutcome::Refuted {
                        witness: SparsityWitness {
                            partition,
                            part: part_idx,
                            vertex: v,
                            internal_degree: internal,
                        },
                    });
                }
            }
        }
    }
    Ok(CheckOutcome::ProvedTrue)
}

/// Balance: in every optimal partition, every part size lies within
/// `n/r +- balance_fraction * n`.
pub fn is_balanced(
    g: &Graph,
    r: usize,
    th: &StructureThresholds,
) -> Result<CheckOutcome<BalanceWitness>, StructureError> {
    th.validate()?;
    let n_rat = BigRational::from(BigInt::from(g.n()));
    let center = &n_rat / BigRational::from(BigInt::from(r));
    let slack = &th.balance_fraction * &n_rat;
    let lo = &center - &slack;
    let hi = &center + &slack;
    for partition in optimal_partitions(g, r)? {
        for (part_idx, part) in partition.parts().into_iter().enumerate() {
            let size = BigRational::from(BigInt::from(part.len()));
            if size < lo || size > hi {
                return Ok(CheckOutcome::Refuted {
                    witness: BalanceWitness {
                        partition,
                        part: part_idx,
                        size: part.len(),
                    },
                });
            }
        }
    }
    Ok(CheckOutcome::ProvedTrue)
}

// ============================================================================
// Bad sets, m-data, Phi
// ============================================================================

/// All r-subsets of `V minus U_j` with no common neighbor inside `U_j`, in
/// lexicographic order over sorted vertex tuples. `r` is the partition's
/// part count.
pub fn bad_sets(g: &Graph, p: &RPartition, j: usize) -> Vec<VertexSet> {
    assert!(j < p.r(), "part index out of range");
    let u_j = p.part(j).bits();
    let outside: Vec<usize> = g
        .vertex_set()
        .difference(VertexSet::from_bits(u_j))
        .iter()
        .collect();
    let mut out = Vec::new();
    for_each_subset(&outside, p.r(), |mask| {
        let mut common = u_j;
        let mut rest = mask;
        while rest != 0 && common != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            common &= g.rows()[v];
        }
        if common == 0 {
            out.push(VertexSet::from_bits(mask));
        }
        true
    });
    out
}

/// A maximal family of vertex-disjoint bad sets towards one part.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadFamily {
    pub j: usize,
    pub sets: Vec<VertexSet>,
}

impl BadFamily {
    pub fn ell(&self) -> usize {
        self.sets.len()
    }

    pub fn union(&self) -> VertexSet {
        self.sets
            .iter()
            .fold(VertexSet::EMPTY, |acc, s| acc.union(*s))
    }
}

/// Greedy-lexicographic maximal disjoint family of bad sets towards `U_j`.
pub fn bad_family(g: &Graph, p: &RPartition, j: usize) -> BadFamily {
    let all = bad_sets(g, p, j);
    let mut taken: Vec<VertexSet> = Vec::new();
    let mut used = VertexSet::EMPTY;
    for s in &all {
        if s.is_disjoint(used) {
            taken.push(*s);
            used = used.union(*s);
        }
    }
    // Maximality guard: no bad set among the unused vertices may remain.
    for s in &all {
        assert!(
            !s.is_disjoint(used) || taken.contains(s),
            "greedy family missed a disjoint bad set"
        );
    }
    BadFamily { j, sets: taken }
}

/// The canonical data (m, j, X): maximal family sizes per part, their
/// maximum m, the smallest part index j attaining it, and the union X of the
/// chosen family. Deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MData {
    pub m: usize,
    pub j: usize,
    pub x: VertexSet,
}

pub fn compute_m_data(g: &Graph, p: &RPartition) -> MData {
    let mut best: Option<BadFamily> = None;
    for j in 0..p.r() {
        let family = bad_family(g, p, j);
        let better = match &best {
            None => true,
            Some(b) => family.ell() > b.ell(),
        };
        if better {
            best = Some(family);
        }
    }
    let family = best.expect("r >= 1");
    MData {
        m: family.ell(),
        j: family.j,
        x: family.union(),
    }
}

/// Checks m >= 1 for every optimal partition of a K_{r+1}-free,
/// non-r-partite graph. Precondition violations are reported as errors.
pub fn check_m_positive(g: &Graph, r: usize) -> Result<bool, StructureError> {
    if !is_clique_free(g, r + 1) {
        return Err(StructureError::NotCliqueFree { m: r + 1 });
    }
    if is_r_partite(g, r) {
        return Err(StructureError::AlreadyRPartite { r });
    }
    for partition in optimal_partitions(g, r)? {
        if compute_m_data(g, &partition).m == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of potential edges the Phi transformation chooses over:
/// `|X| * |V minus (X union U_j)|`.
pub fn phi_potential_edge_count(g: &Graph, p: &RPartition, md: &MData) -> usize {
    let outside = g
        .vertex_set()
        .difference(md.x.union(p.part(md.j)));
    md.x.len() * outside.len()
}

/// The potential pairs `(x, u)` in lexicographic order: `x` over X
/// ascending, then `u` over `V minus (X union U_j)` ascending.
fn phi_pairs(g: &Graph, p: &RPartition, md: &MData) -> Vec<(usize, usize)> {
    let outside = g.vertex_set().difference(md.x.union(p.part(md.j)));
    let mut pairs = Vec::new();
    for x in md.x.iter() {
        for u in outside.iter() {
            pairs.push((x, u));
        }
    }
    pairs
}

/// Applies Phi: removes every edge incident to X, then adds the potential
/// edges selected by `choice` (one bit per pair, lexicographic (x, u) order).
pub fn phi_apply(
    g: &Graph,
    p: &RPartition,
    md: &MData,
    choice: &[bool],
) -> Result<Graph, StructureError> {
    let pairs = phi_pairs(g, p, md);
    if choice.len() != pairs.len() {
        return Err(StructureError::PhiChoiceLength {
            expected: pairs.len(),
            got: choice.len(),
        });
    }
    Ok(phi_apply_selected(g, md, &pairs, |k| choice[k]))
}

/// Mask-driven variant for exhaustive image enumeration (potential <= 64).
pub fn phi_apply_mask(g: &Graph, p: &RPartition, md: &MData, mask: u64) -> Graph {
    let pairs = phi_pairs(g, p, md);
    assert!(pairs.len() <= 64, "mask form requires potential <= 64");
    phi_apply_selected(g, md, &pairs, |k| mask >> k & 1 == 1)
}

fn phi_apply_selected(
    g: &Graph,
    md: &MData,
    pairs: &[(usize, usize)],
    selected: impl Fn(usize) -> bool,
) -> Graph {
    let x_bits = md.x.bits();
    let mut rows: Vec<u64> = g
        .rows()
        .iter()
        .enumerate()
        .map(|(v, &row)| if md.x.contains(v) { 0 } else { row & !x_bits })
        .collect();
    for (k, &(x, u)) in pairs.iter().enumerate() {
        if selected(k) {
            rows[x] |= 1u64 << u;
            rows[u] |= 1u64 << x;
        }
    }
    Graph::from_adjacency(rows).expect("phi preserves graph validity")
}

/// Result of checking that Phi images stay K_{r+1}-free.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiImageReport {
    /// The (m, j, X) data of the canonical optimal partition.
    pub m: usize,
    pub j: usize,
    pub x: VertexSet,
    pub potential: usize,
    /// True when every image was enumerated, false when sampled.
    pub exhaustive: bool,
    pub images_checked: u64,
    /// Number of pairwise-distinct labeled images (exhaustive mode only).
    pub distinct_images: Option<u64>,
    pub all_free: bool,
    /// graph6 of a non-free image, if one was found.
    pub counterexample: Option<String>,
}

/// Maximum potential-edge count for exhaustive Phi image enumeration.
pub const PHI_EXHAUSTIVE_LIMIT: usize = 20;

/// Verifies that the images of Phi (for the canonical optimal partition and
/// the greedy-canonical X) are K_{r+1}-free: exhaustively when
/// `potential <= PHI_EXHAUSTIVE_LIMIT`, otherwise on `samples` seeded draws.
///
/// Preconditions: `g` K_{r+1}-free and not r-partite.
pub fn phi_image_check(
    g: &Graph,
    r: usize,
    samples: u64,
    seed: u64,
) -> Result<PhiImageReport, StructureError> {
    if !is_clique_free(g, r + 1) {
        return Err(StructureError::NotCliqueFree { m: r + 1 });
    }
    if is_r_partite(g, r) {
        return Err(StructureError::AlreadyRPartite { r });
    }
    let partition = canonical_optimal_partition(g, r)?;
    let md = compute_m_data(g, &partition);
    let potential = phi_potential_edge_count(g, &partition, &md);

    let mut all_free = true;
    let mut counterexample = None;
    if potential <= PHI_EXHAUSTIVE_LIMIT {
        let total = 1u64 << potential;
        let mut distinct: HashSet<Graph> = HashSet::new();
        for mask in 0..total {
            let image = phi_apply_mask(g, &partition, &md, mask);
            if all_free && !is_clique_free(&image, r + 1) {
                all_free = false;
                counterexample = Some(emit_graph6(&image));
            }
            distinct.insert(image);
        }
        Ok(PhiImageReport {
            m: md.m,
            j: md.j,
            x: md.x,
            potential,
            exhaustive: true,
            images_checked: total,
            distinct_images: Some(distinct.len() as u64),
            all_free,
            counterexample,
        })
    } else {
        if samples == 0 {
            return Err(StructureError::PhiNeedsSamples { potential });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let choice: Vec<bool> = (0..potential).map(|_| rng.random_bool(0.5)).collect();
            let image = phi_apply(g, &partition, &md, &choice)?;
            if !is_clique_free(&image, r + 1) {
                all_free = false;
                counterexample = Some(emit_graph6(&image));
                break;
            }
        }
        Ok(PhiImageReport {
            m: md.m,
            j: md.j,
            x: md.x,
            potential,
            exhaustive: false,
            images_checked: samples,
            distinct_images: None,
            all_free,
            counterexample,
        })
    }
}

// ============================================================================
// Q-membership classification
// ============================================================================

/// The classification record: the membership conditions and the derived bit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QFlags {
    pub clique_free: bool,
    pub r_partite: bool,
    pub distance: usize,
    /// distance <= n^closeness_exponent
    pub close: bool,
    pub uniformly_dense: bool,
    pub internally_sparse: bool,
    pub balanced: bool,
    /// free, not r-partite, close, dense, sparse and balanced.
    pub in_q: bool,
}

/// Runs every membership check with exact quantification.
pub fn classify_q_membership(
    g: &Graph,
    r: usize,
    th: &StructureThresholds,
    budget: u64,
) -> Result<QFlags, StructureError> {
    th.validate()?;
    let clique_free = is_clique_free(g, r + 1);
    let distance = distance_to_r_partite(g, r)?.distance;
    let r_partite = distance == 0;
    let close = (distance as f64) <= (g.n() as f64).powf(th.closeness_exponent);
    let uniformly_dense = is_uniformly_dense(g, r, th, budget)?.proved();
    let internally_sparse = is_internally_sparse(g, r, th)?.proved();
    let balanced = is_balanced(g, r, th)?.proved();
    Ok(QFlags {
        clique_free,
        r_partite,
        distance,
        close,
        uniformly_dense,
        internally_sparse,
        balanced,
        in_q: clique_free && !r_partite && close && uniformly_dense && internally_sparse && balanced,
    })
}

// ============================================================================
// Tests
// ============================================================================
