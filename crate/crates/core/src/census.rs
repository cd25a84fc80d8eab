//! Exhaustive census over all labeled graphs on up to 8 vertices (9 via
//! canonical representatives with orbit weights), with sharded parallel
//! execution, resumable checkpoints, and built-in verification passes for
//! the supersaturation bound and the m >= 1 lemma.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cliques::{count_cliques, count_cliques_rows, is_clique_free_rows};
use crate::graph::{emit_graph6, pair_count, turan_edges, Graph};
use crate::partition::{
    distance_to_r_partite, is_r_partite_rows, DistanceError, DistanceSolver,
};
use crate::structure::{check_m_positive, StructureError};
use crate::supersat::{c_const, supersat_lower_bound, BoundMode};

/// Largest order for the labeled full-enumeration census (2^28 masks).
pub const MAX_LABELED_CENSUS_VERTICES: usize = 8;
/// Largest order for the unlabeled (canonical representative) census.
pub const MAX_UNLABELED_CENSUS_VERTICES: usize = 9;
/// Largest order for the per-graph verification passes.
pub const MAX_VERIFY_VERTICES: usize = 7;

// ============================================================================
// Options, record, errors
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Labeled,
    Unlabeled,
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Number of contiguous mask ranges; aggregates are shard-order
    /// independent.
    pub shards: u32,
    /// Worker threads (0 = rayon default).
    pub jobs: usize,
    /// Compute the exact distance of every K_{r+1}-free graph.
    pub distance_histogram: bool,
    /// Check the supersaturation bound on every graph with distance >= 1.
    pub check_supersat: bool,
    /// Check m >= 1 over all optimal partitions of free non-r-partite graphs.
    pub check_m_positive: bool,
    /// Enumerate canonical representatives weighted by n!/|Aut| instead of
    /// all labeled graphs.
    pub unlabeled: bool,
    /// Resumable checkpoint file (labeled mode only).
    pub checkpoint_path: Option<PathBuf>,
    /// Stop (with an `Interrupted` error) after completing this many
    /// additional shards; used to exercise kill/resume.
    pub stop_after_shards: Option<u32>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            shards: 64,
            jobs: 0,
            distance_histogram: false,
            check_supersat: false,
            check_m_positive: false,
            unlabeled: false,
            checkpoint_path: None,
            stop_after_shards: None,
        }
    }
}

/// Aggregate census result for one (n, r).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRecord {
    pub n: usize,
    pub r: usize,
    pub mode: CensusMode,
    /// 2^C(n,2): labeled graphs on n vertices.
    pub total_graphs: u64,
    pub free_count: u64,
    pub r_partite_count: u64,
    /// r_partite_count / free_count.
    pub r_partite_ratio: f64,
    pub turan_edge_count: u64,
    pub log2_free_count: f64,
    /// Per-distance counts over free graphs (index = distance), when the
    /// slow path ran. Trailing zeros trimmed.
    pub distance_histogram: Option<Vec<u64>>,
    /// Graphs (weighted in unlabeled mode) with distance >= 1 that were
    /// checked against the bound.
    pub supersat_applicable: Option<u64>,
    pub supersat_violations: Option<u64>,
    pub m_zero_violations: Option<u64>,
    /// graph6 of violating graphs (canonical representatives in unlabeled
    /// mode), sorted.
    pub supersat_violation_graphs: Vec<String>,
    pub m_violation_graphs: Vec<String>,
    pub meta: CensusMeta,
}

/// Runtime metadata; excluded from the deterministic payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusMeta {
    pub runtime_ms: u128,
    pub shards: u32,
    pub jobs: usize,
    pub resumed: bool,
}

impl CensusRecord {
    pub const CSV_HEADER: &'static str = "n,r,mode,total_graphs,free_count,r_partite_count,\
        r_partite_ratio,turan_edge_count,log2_free_count,supersat_applicable,\
        supersat_violations,m_zero_violations";

    /// Canonical JSON of everything except runtime metadata; byte-identical
    /// across shard counts, shard orders, and resume boundaries.
    pub fn payload_json(&self) -> String {
        #[derive(Serialize)]
        struct Payload<'a> {
            n: usize,
            r: usize,
            mode: CensusMode,
            total_graphs: u64,
            free_count: u64,
            r_partite_count: u64,
            r_partite_ratio: f64,
            turan_edge_count: u64,
            log2_free_count: f64,
            distance_histogram: &'a Option<Vec<u64>>,
            supersat_applicable: &'a Option<u64>,
            supersat_violations: &'a Option<u64>,
            m_zero_violations: &'a Option<u64>,
            supersat_violation_graphs: &'a [String],
            m_violation_graphs: &'a [String],
        }
        serde_json::to_string(&Payload {
            n: self.n,
            r: self.r,
            mode: self.mode,
            total_graphs: self.total_graphs,
            free_count: self.free_count,
            r_partite_count: self.r_partite_count,
            r_partite_ratio: self.r_partite_ratio,
            turan_edge_count: self.turan_edge_count,
            log2_free_count: self.log2_free_count,
            distance_histogram: &self.distance_histogram,
            supersat_applicable: &self.supersat_applicable,
            supersat_violations: &self.supersat_violations,
            m_zero_violations: &self.m_zero_violations,
            supersat_violation_graphs: &self.supersat_violation_graphs,
            m_violation_graphs: &self.m_violation_graphs,
        })
        .expect("census payload serializes")
    }

    pub fn to_csv_row(&self) -> String {
        let opt = |x: &Option<u64>| x.map_or(String::new(), |v| v.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.r,
            match self.mode {
                CensusMode::Labeled => "labeled",
                CensusMode::Unlabeled => "unlabeled",
            },
            self.total_graphs,
            self.free_count,
            self.r_partite_count,
            self.r_partite_ratio,
            self.turan_edge_count,
            self.log2_free_count,
            opt(&self.supersat_applicable),
            opt(&self.supersat_violations),
            opt(&self.m_zero_violations),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CensusError {
    #[error("labeled census limited to n <= {max}, got n = {n}", max = MAX_LABELED_CENSUS_VERTICES)]
    LabeledTooLarge { n: usize },
    #[error("unlabeled census limited to n <= {max}, got n = {n}", max = MAX_UNLABELED_CENSUS_VERTICES)]
    UnlabeledTooLarge { n: usize },
    #[error("verification pass limited to n <= {max}, got n = {n}", max = MAX_VERIFY_VERTICES)]
    VerifyTooLarge { n: usize },
    #[error("n must be at least 1")]
    ZeroN,
    #[error("r must be at least 1")]
    ZeroR,
    #[error("sharpness sweep is defined for r in {{2, 3}}, got r = {r}")]
    SharpnessR { r: usize },
    #[error("checkpoints are only supported in labeled mode")]
    CheckpointUnsupported,
    #[error("checkpoint corrupt: {reason}")]
    CheckpointCorrupt { reason: String },
    #[error("checkpoint does not match this run: {reason}")]
    CheckpointMismatch { reason: String },
    #[error("interrupted after {completed} shards; progress checkpointed")]
    Interrupted { completed: u32 },
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

impl From<std::io::Error> for CensusError {
    fn from(e: std::io::Error) -> Self {
        CensusError::Io(e.to_string())
    }
}

// ============================================================================
// Aggregates
// ============================================================================

#[derive(Debug, Clone, Default, PartialEq)]
struct Aggregate {
    masks_done: u64,
    free: u64,
    rpartite: u64,
    supersat_applicable: u64,
    supersat_violations: u64,
    m_zero_violations: u64,
    hist: Vec<u64>,
    supersat_bad_masks: Vec<u64>,
    m_bad_masks: Vec<u64>,
}

impl Aggregate {
    fn merge(&mut self, other: &Aggregate) {
        self.masks_done += other.masks_done;
        self.free += other.free;
        self.rpartite += other.rpartite;
        self.supersat_applicable += other.supersat_applicable;
        self.supersat_violations += other.supersat_violations;
        self.m_zero_violations += other.m_zero_violations;
        if self.hist.len() < other.hist.len() {
            self.hist.resize(other.hist.len(), 0);
        }
        for (i, &c) in other.hist.iter().enumerate() {
            self.hist[i] += c;
        }
        self.supersat_bad_masks.extend_from_slice(&other.supersat_bad_masks);
        self.m_bad_masks.extend_from_slice(&other.m_bad_masks);
    }
}

/// Minimal integer clique counts satisfying the exact-mode bound, indexed by
/// (e, t). `cliques >= kmin[e][t]` is the exact rational comparison
/// `cliques >= bound(n, r, e, t)`.
fn kmin_table(n: usize, r: usize) -> Vec<Vec<i128>> {
    let max_e = pair_count(n);
    let mut table = vec![vec![i128::MIN; max_e + 2]; max_e + 1];
    for e in 0..=max_e {
        for t in 0..=max_e.min(e.max(1)) {
            if t == 0 {
                continue;
            }
            let bound = supersat_lower_bound(n, r, e, t, BoundMode::ExactC).value;
            let kmin = bound.ceil().to_integer();
            table[e][t] = kmin.to_i128().expect("kmin fits i128 at census scale");
        }
    }
    table
}

// ============================================================================
// Shard runner (labeled mode)
// ============================================================================

struct PassConfig {
    n: usize,
    r: usize,
    distance_histogram: bool,
    check_supersat: bool,
    check_m_positive: bool,
    kmin: Option<Vec<Vec<i128>>>,
}

/// Classifies one graph (as adjacency rows + pair mask) into an aggregate
/// with the requested passes, weighted by `weight` labeled copies.
fn classify_into(
    cfg: &PassConfig,
    solver: &mut DistanceSolver,
    adj: &[u64],
    mask: u64,
    weight: u64,
    agg: &mut Aggregate,
) -> Result<(), CensusError> {
    let n = cfg.n;
    let r = cfg.r;
    agg.masks_done += weight;
    let free = is_clique_free_rows(adj, r + 1);
    let mut rpartite = false;
    if free {
        agg.free += weight;
        rpartite = is_r_partite_rows(adj, r);
        if rpartite {
            agg.rpartite += weight;
        }
        if cfg.distance_histogram {
            let d = if rpartite { 0 } else { solver.distance(adj, r) };
            if agg.hist.len() <= d {
                agg.hist.resize(d + 1, 0);
            }
            agg.hist[d] += weight;
        }
    }
    if cfg.check_supersat {
        let t = solver.distance(adj, r);
        if t >= 1 {
            agg.supersat_applicable += weight;
            let e = adj.iter().map(|row| row.count_ones() as usize).sum::<usize>() / 2;
            let cliques = count_cliques_rows(adj, r + 1);
            let kmin = cfg.kmin.as_ref().expect("kmin precomputed")[e][t];
            if (cliques as i128) < kmin {
                agg.supersat_violations += weight;
                agg.supersat_bad_masks.push(mask);
            }
        }
    }
    if cfg.check_m_positive && free && !rpartite {
        let g = Graph::from_pair_mask(n, mask);
        if !check_m_positive(&g, r)? {
            agg.m_zero_violations += weight;
            agg.m_bad_masks.push(mask);
        }
    }
    Ok(())
}

fn run_shard(cfg: &PassConfig, lo: u64, hi: u64) -> Result<Aggregate, CensusError> {
    let n = cfg.n;
    let mut agg = Aggregate::default();
    let mut solver = DistanceSolver::new();
    let pairs: Vec<(usize, usize)> = {
        let mut v = Vec::with_capacity(pair_count(n));
        for j in 1..n {
            for i in 0..j {
                v.push((i, j));
            }
        }
        v
    };
    let mut adj = [0u64; MAX_LABELED_CENSUS_VERTICES];
    for mask in lo..hi {
        adj[..n].fill(0);
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (i, j) = pairs[k];
            adj[i] |= 1u64 << j;
            adj[j] |= 1u64 << i;
        }
        classify_into(cfg, &mut solver, &adj[..n], mask, 1, &mut agg)?;
    }
    Ok(agg)
}

// ============================================================================
// Checkpoint format
// ============================================================================

const CHECKPOINT_MAGIC: &[u8; 8] = b"CLQCENS1";
const CHECKPOINT_VERSION: u32 = 1;

/// Serialized checkpoint state. Byte layout (all integers little-endian):
///
/// ```text
/// offset  size  field
/// 0       8     magic "CLQCENS1"
/// 8       4     version (1)
/// 12      1     n
/// 13      1     r
/// 14      1     pass flags (bit0 histogram, bit1 supersat, bit2 m-positive)
/// 15      1     reserved (0)
/// 16      4     shard_count
/// 20      8     total_masks
/// 28      4     bitmap length B = ceil(shard_count / 8)
/// 32      B     completed-shard bitmap
/// ...           aggregate: masks_done, free, rpartite, supersat_applicable,
///               supersat_violations, m_zero_violations (u64 each);
///               hist_len (u32) + hist_len u64 entries;
///               supersat_bad len (u32) + masks (u64 each);
///               m_bad len (u32) + masks (u64 each)
/// end-32  32    SHA-256 of all preceding bytes
/// ```
struct Checkpoint {
    n: u8,
    r: u8,
    flags: u8,
    shard_count: u32,
    total_masks: u64,
    completed: Vec<u8>,
    agg: Aggregate,
}

impl Checkpoint {
    fn is_done(&self, shard: u32) -> bool {
        self.completed[(shard / 8) as usize] & (1 << (shard % 8)) != 0
    }

    fn mark_done(&mut self, shard: u32) {
        self.completed[(shard / 8) as usize] |= 1 << (shard % 8);
    }

    fn completed_count(&self) -> u32 {
        self.completed
            .iter()
            .map(|b| b.count_ones())
            .sum()
    }

    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(CHECKPOINT_MAGIC);
        out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
        out.push(self.n);
        out.push(self.r);
        out.push(self.flags);
        out.push(0);
        out.extend_from_slice(&self.shard_count.to_le_bytes());
        out.extend_from_slice(&self.total_masks.to_le_bytes());
        out.extend_from_slice(&(self.completed.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.completed);
        for x in [
            self.agg.masks_done,
            self.agg.free,
            self.agg.rpartite,
            self.agg.supersat_applicable,
            self.agg.supersat_violations,
            self.agg.m_zero_violations,
        ] {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out.extend_from_slice(&(self.agg.hist.len() as u32).to_le_bytes());
        for &x in &self.agg.hist {
            out.extend_from_slice(&x.to_le_bytes());
        }
        for list in [&self.agg.supersat_bad_masks, &self.agg.m_bad_masks] {
            out.extend_from_slice(&(list.len() as u32).to_le_bytes());
            for &x in list {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    fn decode(bytes: &[u8]) -> Result<Checkpoint, CensusError> {
        let corrupt = |reason: &str| CensusError::CheckpointCorrupt {
            reason: reason.to_string(),
        };
        if bytes.len() < 32 + 32 {
            return Err(corrupt("file too short"));
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(corrupt("content hash mismatch"));
        }
        if &body[0..8] != CHECKPOINT_MAGIC {
            return Err(corrupt("bad magic"));
        }
        let mut pos = 8usize;
        let mut take = |k: usize| -> Result<&[u8], CensusError> {
            if pos + k > body.len() {
                return Err(corrupt("truncated"));
            }
            let s = &body[pos..pos + k];
            pos += k;
            Ok(s)
        };
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != CHECKPOINT_VERSION {
            return Err(corrupt("unsupported version"));
        }
        let n = take(1)?[0];
        let r = take(1)?[0];
        let flags = take(1)?[0];
        let _reserved = take(1)?[0];
        let shard_count = u32::from_le_bytes(take(4)?.try_into().unwrap());
        let total_masks = u64::from_le_bytes(take(8)?.try_into().unwrap());
        let bitmap_len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        if bitmap_len != (shard_count as usize).div_ceil(8) {
            return Err(corrupt("bitmap length inconsistent"));
        }
        let completed = take(bitmap_len)?.to_vec();
        let mut agg = Aggregate::default();
        let mut u64_field = || -> Result<u64, CensusError> {
            Ok(u64::from_le_bytes(take(8)?.try_into().unwrap()))
        };
        agg.masks_done = u64_field()?;
        agg.free = u64_field()?;
        agg.rpartite = u64_field()?;
        agg.supersat_applicable = u64_field()?;
        agg.supersat_violations = u64_field()?;
        agg.m_zero_violations = u64_field()?;
        let hist_len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        for _ in 0..hist_len {
            let x = u64::from_le_bytes(take(8)?.try_into().unwrap());
            agg.hist.push(x);
        }
        for list in [&mut agg.supersat_bad_masks, &mut agg.m_bad_masks] {
            let len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
            for _ in 0..len {
                list.push(u64::from_le_bytes(take(8)?.try_into().unwrap()));
            }
        }
        if pos != body.len() {
            return Err(corrupt("trailing bytes"));
        }
        Ok(Checkpoint {
            n,
            r,
            flags,
            shard_count,
            total_masks,
            completed,
            agg,
        })
    }

    fn write_to(&self, path: &Path) -> Result<(), CensusError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.encode())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    fn read_from(path: &Path) -> Result<Checkpoint, CensusError> {
        Checkpoint::decode(&std::fs::read(path)?)
    }
}

// ============================================================================
// Census entry points
// ============================================================================

fn pass_flags(options: &CensusOptions) -> u8 {
    u8::from(options.distance_histogram)
        | u8::from(options.check_supersat) << 1
        | u8::from(options.check_m_positive) << 2
}

/// Runs the census for `(n, r)` under the given options.
pub fn run_census(n: usize, r: usize, options: &CensusOptions) -> Result<CensusRecord, CensusError> {
    if n == 0 {
        return Err(CensusError::ZeroN);
    }
    if r == 0 {
        return Err(CensusError::ZeroR);
    }
    let started = Instant::now();
    if options.unlabeled {
        if options.checkpoint_path.is_some() {
            return Err(CensusError::CheckpointUnsupported);
        }
        if n > MAX_UNLABELED_CENSUS_VERTICES {
            return Err(CensusError::UnlabeledTooLarge { n });
        }
        return run_census_unlabeled(n, r, options, started);
    }
    if n > MAX_LABELED_CENSUS_VERTICES {
        return Err(CensusError::LabeledTooLarge { n });
    }

    let total: u64 = 1u64 << pair_count(n);
    let shards = options.shards.max(1).min(total.min(u32::MAX as u64) as u32);
    let chunk = total.div_ceil(shards as u64);
    let flags = pass_flags(options);

    let cfg = PassConfig {
        n,
        r,
        distance_histogram: options.distance_histogram,
        check_supersat: options.check_supersat,
        check_m_positive: options.check_m_positive,
        kmin: options.check_supersat.then(|| kmin_table(n, r)),
    };

    // Load or initialize the checkpoint.
    let mut resumed = false;
    let ckpt = match &options.checkpoint_path {
        Some(path) if path.exists() => {
            let ckpt = Checkpoint::read_from(path)?;
            let expect = (n as u8, r as u8, flags, shards, total);
            let got = (ckpt.n, ckpt.r, ckpt.flags, ckpt.shard_count, ckpt.total_masks);
            if expect != got {
                return Err(CensusError::CheckpointMismatch {
                    reason: format!("file has (n,r,flags,shards,total) = {got:?}, run needs {expect:?}"),
                });
            }
            resumed = ckpt.completed_count() > 0;
            ckpt
        }
        _ => Checkpoint {
            n: n as u8,
            r: r as u8,
            flags,
            shard_count: shards,
            total_masks: total,
            completed: vec![0; (shards as usize).div_ceil(8)],
            agg: Aggregate::default(),
        },
    };

    let mut pending: Vec<u32> = (0..shards).filter(|&s| !ckpt.is_done(s)).collect();
    if let Some(limit) = options.stop_after_shards {
        pending.truncate(limit as usize);
    }
    let will_interrupt =
        options.stop_after_shards.is_some() && (ckpt.completed_count() as usize + pending.len()) < shards as usize;

    let state = Mutex::new(ckpt);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| CensusError::Io(e.to_string()))?;

    let shard_results: Result<Vec<()>, CensusError> = pool.install(|| {
        use rayon::prelude::*;
        pending
            .par_iter()
            .map(|&shard| {
                let lo = shard as u64 * chunk;
                let hi = (lo + chunk).min(total);
                let agg = run_shard(&cfg, lo, hi)?;
                let mut guard = state.lock().expect("checkpoint state poisoned");
                guard.agg.merge(&agg);
                guard.mark_done(shard);
                if let Some(path) = &options.checkpoint_path {
                    guard.write_to(path)?;
                }
                Ok(())
            })
            .collect()
    });
    shard_results?;

    let ckpt = state.into_inner().expect("checkpoint state poisoned");
    if will_interrupt {
        return Err(CensusError::Interrupted {
            completed: ckpt.completed_count(),
        });
    }

    let record = finalize(
        n,
        r,
        CensusMode::Labeled,
        total,
        ckpt.agg,
        options,
        CensusMeta {
            runtime_ms: started.elapsed().as_millis(),
            shards,
            jobs: options.jobs,
            resumed,
        },
    );
    Ok(record)
}

fn finalize(
    n: usize,
    r: usize,
    mode: CensusMode,
    total: u64,
    mut agg: Aggregate,
    options: &CensusOptions,
    meta: CensusMeta,
) -> CensusRecord {
    while agg.hist.last() == Some(&0) {
        agg.hist.pop();
    }
    agg.supersat_bad_masks.sort_unstable();
    agg.m_bad_masks.sort_unstable();
    let to_g6 = |masks: &[u64]| -> Vec<String> {
        masks
            .iter()
            .map(|&m| emit_graph6(&Graph::from_pair_mask(n, m)))
            .collect()
    };
    CensusRecord {
        n,
        r,
        mode,
        total_graphs: total,
        free_count: agg.free,
        r_partite_count: agg.rpartite,
        r_partite_ratio: if agg.free == 0 {
            f64::NAN
        } else {
            agg.rpartite as f64 / agg.free as f64
        },
        turan_edge_count: turan_edges(n, r.min(n)) as u64,
        log2_free_count: (agg.free as f64).log2(),
        distance_histogram: options.distance_histogram.then_some(agg.hist),
        supersat_applicable: options.check_supersat.then_some(agg.supersat_applicable),
        supersat_violations: options.check_supersat.then_some(agg.supersat_violations),
        m_zero_violations: options.check_m_positive.then_some(agg.m_zero_violations),
        supersat_violation_graphs: to_g6(&agg.supersat_bad_masks),
        m_violation_graphs: to_g6(&agg.m_bad_masks),
        meta,
    }
}

// ============================================================================
// Unlabeled mode
// ============================================================================

/// Canonical representatives (as colex pair masks) of every isomorphism
/// class on `n` vertices, by incremental canonical-augmentation: extend each
/// (n-1)-vertex representative by one vertex with every possible
/// neighborhood, canonicalize, deduplicate. Sorted ascending.
pub fn enumerate_unlabeled(n: usize) -> Result<Vec<u64>, CensusError> {
    if n == 0 {
        return Err(CensusError::ZeroN);
    }
    if n > MAX_UNLABELED_CENSUS_VERTICES {
        return Err(CensusError::UnlabeledTooLarge { n });
    }
    let mut level: Vec<u64> = vec![0]; // the 1-vertex graph
    for k in 2..=n {
        let mut next: HashSet<u64> = HashSet::new();
        for &rep in &level {
            let base = Graph::from_pair_mask(k - 1, rep);
            for nb in 0u64..(1 << (k - 1)) {
                let mut rows: Vec<u64> = base.rows().to_vec();
                rows.push(nb);
                for v in 0..(k - 1) {
                    if nb >> v & 1 == 1 {
                        rows[v] |= 1u64 << (k - 1);
                    }
                }
                let g = Graph::from_adjacency(rows).expect("augmented graph is valid");
                let (canon, _) = crate::graph::canonical_pair_mask_and_aut(&g);
                next.insert(canon);
            }
        }
        let mut v: Vec<u64> = next.into_iter().collect();
        v.sort_unstable();
        level = v;
    }
    Ok(level)
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn run_census_unlabeled(
    n: usize,
    r: usize,
    options: &CensusOptions,
    started: Instant,
) -> Result<CensusRecord, CensusError> {
    use rayon::prelude::*;

    let reps = enumerate_unlabeled(n)?;
    let cfg = PassConfig {
        n,
        r,
        distance_histogram: options.distance_histogram,
        check_supersat: options.check_supersat,
        check_m_positive: options.check_m_positive,
        kmin: options.check_supersat.then(|| kmin_table(n, r)),
    };
    let nfact = factorial_u64(n);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| CensusError::Io(e.to_string()))?;
    let chunk = reps.len().div_ceil((options.shards.max(1)) as usize).max(1);
    let parts: Result<Vec<Aggregate>, CensusError> = pool.install(|| {
        reps.par_chunks(chunk)
            .map(|chunk_reps| {
                let mut agg = Aggregate::default();
                let mut solver = DistanceSolver::new();
                for &mask in chunk_reps {
                    let g = Graph::from_pair_mask(n, mask);
                    let (_, aut) = crate::graph::canonical_pair_mask_and_aut(&g);
                    let weight = nfact / aut;
                    classify_into(&cfg, &mut solver, g.rows(), mask, weight, &mut agg)?;
                }
                Ok(agg)
            })
            .collect()
    });
    let mut agg = Aggregate::default();
    for part in parts? {
        agg.merge(&part);
    }

    let total = 1u64 << pair_count(n);
    Ok(finalize(
        n,
        r,
        CensusMode::Unlabeled,
        total,
        agg,
        options,
        CensusMeta {
            runtime_ms: started.elapsed().as_millis(),
            shards: options.shards,
            jobs: options.jobs,
            resumed: false,
        },
    ))
}

// ============================================================================
// Verification reports
// ============================================================================

/// Exhaustive supersaturation validation over every labeled graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupersatCensusReport {
    pub n: usize,
    pub r: usize,
    pub total_graphs: u64,
    /// Graphs with distance >= 1 (the theorem's hypothesis).
    pub applicable: u64,
    pub violations: u64,
    pub violation_graphs: Vec<String>,
    pub runtime_ms: u128,
}

/// Checks the exact-constant bound on every labeled graph on `n <= 7`
/// vertices with distance >= 1. Expected: zero violations.
pub fn verify_exhaustive_supersat(
    n: usize,
    r: usize,
    jobs: usize,
) -> Result<SupersatCensusReport, CensusError> {
    if n > MAX_VERIFY_VERTICES {
        return Err(CensusError::VerifyTooLarge { n });
    }
    let record = run_census(
        n,
        r,
        &CensusOptions {
            jobs,
            check_supersat: true,
            ..CensusOptions::default()
        },
    )?;
    Ok(SupersatCensusReport {
        n,
        r,
        total_graphs: record.total_graphs,
        applicable: record.supersat_applicable.unwrap_or(0),
        violations: record.supersat_violations.unwrap_or(0),
        violation_graphs: record.supersat_violation_graphs,
        runtime_ms: record.meta.runtime_ms,
    })
}

/// Lemma check: m >= 1 over all optimal partitions of every K_{r+1}-free
/// non-r-partite labeled graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MPositiveReport {
    pub n: usize,
    pub r: usize,
    /// Labeled count of K_{r+1}-free non-r-partite graphs.
    pub class_size: u64,
    pub class_empty: bool,
    pub violations: u64,
    pub violation_graphs: Vec<String>,
    pub runtime_ms: u128,
}

pub fn verify_lemma_m_positive(
    n: usize,
    r: usize,
    jobs: usize,
) -> Result<MPositiveReport, CensusError> {
    if n > MAX_VERIFY_VERTICES {
        return Err(CensusError::VerifyTooLarge { n });
    }
    let record = run_census(
        n,
        r,
        &CensusOptions {
            jobs,
            check_m_positive: true,
            ..CensusOptions::default()
        },
    )?;
    let class_size = record.free_count - record.r_partite_count;
    Ok(MPositiveReport {
        n,
        r,
        class_size,
        class_empty: class_size == 0,
        violations: record.m_zero_violations.unwrap_or(0),
        violation_graphs: record.m_violation_graphs,
        runtime_ms: record.meta.runtime_ms,
    })
}

// ============================================================================
// Sharpness sweep
// ============================================================================

/// One row of the sharpness table: the Turan-plus-matching construction at
/// (r, k, t), its exact distance and clique count, and the ratio of the
/// count to the lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub r: usize,
    pub k: usize,
    pub n: usize,
    pub t: usize,
    pub edges: usize,
    pub distance: usize,
    pub cliques: u64,
    pub expected_cliques: u64,
    pub bound_num: String,
    pub bound_den: String,
    pub ratio: f64,
    /// Exact check that `1 <= cliques/bound <= c(r)`.
    pub within_envelope: bool,
}

impl SharpnessRow {
    pub const CSV_HEADER: &'static str =
        "r,k,n,t,edges,distance,cliques,expected_cliques,bound_num,bound_den,ratio,within_envelope";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.r,
            self.k,
            self.n,
            self.t,
            self.edges,
            self.distance,
            self.cliques,
            self.expected_cliques,
            self.bound_num,
            self.bound_den,
            self.ratio,
            self.within_envelope
        )
    }
}

/// Sweeps the sharpness construction for `r in {2, 3}`: for each `n = r k`
/// with `n <= 12` and `1 <= t <= k/2`, the exact distance (expected t), the
/// exact K_{r+1} count (expected t k^(r-1)), and the bound ratio.
pub fn sharpness_sweep(r: usize, k_max: usize) -> Result<Vec<SharpnessRow>, CensusError> {
    if !(r == 2 || r == 3) {
        return Err(CensusError::SharpnessR { r });
    }
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let n = r * k;
        if n > 12 {
            break;
        }
        for t in 1..=(k / 2) {
            let g = crate::graph::turan_plus_matching(n, r, t);
            let e = g.edge_count();
            let distance = distance_to_r_partite(&g, r)?.distance;
            let cliques = count_cliques(&g, r + 1).count;
            let bound = supersat_lower_bound(n, r, e, distance.max(1), BoundMode::ExactC).value;
            let cliques_rat = BigRational::from(BigInt::from(cliques));
            let ratio_rat = &cliques_rat / &bound;
            let within_envelope = bound.is_positive()
                && ratio_rat >= BigRational::one()
                && ratio_rat <= c_const(r);
            rows.push(SharpnessRow {
                r,
                k,
                n,
                t,
                edges: e,
                distance,
                cliques: cliques as u64,
                expected_cliques: (t * k.pow(r as u32 - 1)) as u64,
                bound_num: bound.numer().to_string(),
                bound_den: bound.denom().to_string(),
                ratio: ratio_rat.to_f64().unwrap_or(f64::NAN),
                within_envelope,
            });
        }
    }
    Ok(rows)
}

// ============================================================================
// Tests
// ============================================================================
