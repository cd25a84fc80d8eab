//! Supersaturation lower bound on the K_{r+1} count of graphs that are t-far
//! from r-partite, with exact rational verification and the per-vertex
//! farness-inheritance check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;
use thiserror::Error;

use crate::cliques::count_cliques;
use crate::graph::Graph;
use crate::partition::{distance_to_r_partite, DistanceError};

fn big(x: usize) -> BigInt {
    BigInt::from(x)
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(big(num), big(den))
}

fn factorial(r: usize) -> BigInt {
    (1..=r).fold(BigInt::one(), |acc, k| acc * big(k))
}

fn int_pow(base: usize, exp: usize) -> BigInt {
    num_traits::pow(big(base), exp)
}

/// The induction constant `c(r) = 2 (r+1)^(r-1) r^(r-1) / r!` as an exact
/// rational. Panics if `r == 0`.
pub fn c_const(r: usize) -> BigRational {
    assert!(r >= 1, "r must be at least 1");
    let num = big(2) * int_pow(r + 1, r - 1) * int_pow(r, r - 1);
    BigRational::new(num, factorial(r))
}

/// Rational lower bound on Euler's number: a partial sum of 1/k!.
fn euler_lower() -> BigRational {
    let terms = 24usize;
    let mut sum = BigRational::zero();
    for k in 0..=terms {
        sum += BigRational::new(BigInt::one(), factorial(k));
    }
    sum
}

/// Rational upper bound on Euler's number: the partial sum plus the standard
/// tail bound `1/(K! * K)`.
fn euler_upper() -> BigRational {
    let terms = 24usize;
    euler_lower() + BigRational::new(BigInt::one(), factorial(terms) * big(terms))
}

/// Certified rational upper bound on `e^(2r)`; never smaller than the true
/// value, and within 1e-12 relative error for r <= 20.
fn exp2r_upper(r: usize) -> BigRational {
    num_traits::pow(euler_upper(), 2 * r)
}

/// Which constant the bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// The induction constant c(r): the stronger bound the proof establishes.
    ExactC,
    /// The stated form with `e^(2r) * r!`, the exponential replaced by a
    /// certified rational upper bound (so the bound is never overestimated).
    Stated,
}

/// A computed lower bound on the K_{r+1} count.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub value: BigRational,
    pub mode: BoundMode,
}

/// Lower bound `(n^(r-1) / C) * (e + t - (1 - 1/r) * n^2 / 2)` where `C` is
/// `c(r)` in exact mode and (an upper bound on) `e^(2r) * r!` in stated mode.
///
/// Negative values are returned as-is; the inequality is then vacuous.
pub fn supersat_lower_bound(n: usize, r: usize, e: usize, t: usize, mode: BoundMode) -> BoundValue {
    assert!(r >= 1, "r must be at least 1");
    let divisor = match mode {
        BoundMode::ExactC => c_const(r),
        BoundMode::Stated => exp2r_upper(r) * BigRational::from(factorial(r)),
    };
    let prefactor = BigRational::from(int_pow(n, r - 1)) / divisor;
    let edge_term = BigRational::from(big(e + t))
        - ratio(r - 1, r) * ratio(n * n, 2);
    BoundValue {
        value: prefactor * edge_term,
        mode,
    }
}

/// Verdict of one supersaturation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Distance 0: the theorem does not apply.
    Inapplicable,
    /// Positive bound, clique count at least the bound.
    Holds,
    /// Negative bound: vacuously satisfied.
    HoldsVacuously,
    /// Bound exactly zero with t >= 1; reported distinctly for audit.
    HoldsBoundaryZero,
    /// Clique count below a positive bound.
    Violated,
}

impl Verdict {
    pub fn holds(self) -> bool {
        !matches!(self, Verdict::Violated)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Inapplicable => "inapplicable",
            Verdict::Holds => "holds",
            Verdict::HoldsVacuously => "holds_vacuously",
            Verdict::HoldsBoundaryZero => "holds_boundary_zero",
            Verdict::Violated => "violated",
        }
    }
}

/// Per-graph supersaturation record.
#[derive(Debug, Clone, PartialEq)]
pub struct SupersatReport {
    pub n: usize,
    pub r: usize,
    pub e: usize,
    /// Distance to r-partiteness used as t.
    pub t: usize,
    /// Exact K_{r+1} count.
    pub cliques: u128,
    /// Bound with the exact constant c(r); drives the verdict.
    pub bound_exact: BigRational,
    /// Bound in the stated form (certified, never overestimated).
    pub bound_stated: BigRational,
    /// `cliques - bound_exact`.
    pub margin: BigRational,
    pub verdict: Verdict,
}

impl SupersatReport {
    pub const CSV_HEADER: &'static str = "n,r,e,t,cliques,bound_num,bound_den,margin_sign,verdict";

    fn margin_sign(&self) -> i8 {
        if self.margin.is_zero() {
            0
        } else if self.margin.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.r,
            self.e,
            self.t,
            self.cliques,
            self.bound_exact.numer(),
            self.bound_exact.denom(),
            self.margin_sign(),
            self.verdict.as_str()
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "r": self.r,
            "e": self.e,
            "t": self.t,
            "cliques": self.cliques.to_u64().expect("clique count fits u64 for n <= 64"),
            "bound_num": self.bound_exact.numer().to_string(),
            "bound_den": self.bound_exact.denom().to_string(),
            "margin_sign": self.margin_sign(),
            "verdict": self.verdict.as_str(),
        })
    }
}

/// Computes `t` as the exact distance to r-partiteness, then compares the
/// K_{r+1} count against the lower bound with `t` at its strongest value.
///
/// Distance 0 yields an `Inapplicable` report with a zero bound.
pub fn verify_supersaturation(g: &Graph, r: usize) -> Result<SupersatReport, DistanceError> {
    verify_supersaturation_at(g, r, None)
}

/// As [`verify_supersaturation`], but `t` may be pinned to any value in
/// `1..=distance` (values above the distance violate the t-far hypothesis
/// and are rejected by clamping to the distance).
pub fn verify_supersaturation_at(
    g: &Graph,
    r: usize,
    t_override: Option<usize>,
) -> Result<SupersatReport, DistanceError> {
    let n = g.n();
    let e = g.edge_count();
    let distance = distance_to_r_partite(g, r)?.distance;
    let t = match t_override {
        Some(want) => want.min(distance),
        None => distance,
    };
    let cliques = count_cliques(g, r + 1).count;
    if t == 0 {
        return Ok(SupersatReport {
            n,
            r,
            e,
            t,
            cliques,
            bound_exact: BigRational::zero(),
            bound_stated: BigRational::zero(),
            margin: BigRational::from(BigInt::from(cliques)),
            verdict: Verdict::Inapplicable,
        });
    }
    let bound_exact = supersat_lower_bound(n, r, e, t, BoundMode::ExactC).value;
    let bound_stated = supersat_lower_bound(n, r, e, t, BoundMode::Stated).value;
    let count_rat = BigRational::from(BigInt::from(cliques));
    let margin = &count_rat - &bound_exact;
    let verdict = if bound_exact.is_negative() {
        Verdict::HoldsVacuously
    } else if bound_exact.is_zero() {
        Verdict::HoldsBoundaryZero
    } else if margin.is_negative() {
        Verdict::Violated
    } else {
        Verdict::Holds
    };
    Ok(SupersatReport {
        n,
        r,
        e,
        t,
        cliques,
        bound_exact,
        bound_stated,
        margin,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FarnessError {
    #[error("farness inheritance needs r >= 2, got r = {r}")]
    SmallR { r: usize },
    #[error("precondition violated: graph is only {distance}-far from {r}-partite, not {t}-far")]
    NotTFar { r: usize, t: usize, distance: usize },
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

/// Checks the induction step of the supersaturation proof: for every vertex
/// `v`, with `B_v = N(v)` and `A_v = V minus B_v`, the neighborhood graph
/// `G[B_v]` is `(t - e(A_v))`-far from being (r-1)-partite.
///
/// Requires `r >= 2` and `g` actually t-far from r-partite.
pub fn neighborhood_farness_check(g: &Graph, r: usize, t: usize) -> Result<bool, FarnessError> {
    if r < 2 {
        return Err(FarnessError::SmallR { r });
    }
    let distance = distance_to_r_partite(g, r)?.distance;
    if distance < t {
        return Err(FarnessError::NotTFar { r, t, distance });
    }
    for v in 0..g.n() {
        let b_v = g.neighbors(v);
        let a_v = g.vertex_set().difference(b_v);
        let e_a = g.edges_within(a_v);
        if t <= e_a {
            continue; // required farness is nonpositive: vacuous at v
        }
        let required = t - e_a;
        if b_v.is_empty() {
            return Ok(false);
        }
        let sub = g.induced_subgraph(b_v);
        if distance_to_r_partite(&sub, r - 1)?.distance < required {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience wrapper: farness inheritance at the graph's full distance.
pub fn neighborhood_farness_at_distance(g: &Graph, r: usize) -> Result<bool, FarnessError> {
    let distance = distance_to_r_partite(g, r)?.distance;
    if distance == 0 {
        return Ok(true);
    }
    neighborhood_farness_check(g, r, distance)
}
